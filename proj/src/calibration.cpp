#include "conic/calibration.hpp"

#include "conic/errors.hpp"
#include "conic/log.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace conic {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

void require_increasing_maturities(const std::vector<MarketQuote>& quotes,
                                   const Date& valuation) {
    if (quotes.empty()) throw ParseError("no quotes to calibrate");
    Date prev = valuation;
    for (const MarketQuote& q : quotes) {
        const Date m = quote_maturity(q, valuation);
        if (!(m > prev))
            throw ParseError("quotes must be sorted by strictly increasing maturity; '" +
                             q.tenor + "' does not extend the previous pillar");
        prev = m;
    }
}

} // namespace

CdsContract quote_contract(const MarketQuote& q, const Date& valuation) {
    if (q.recovery < 0.0 || q.recovery > 1.0)
        throw ParseError("recovery must lie in [0, 1], got " + fmt(q.recovery));
    return CdsContract(build_schedule(valuation, quote_maturity(q, valuation)), q.coupon,
                       q.lgd());
}

Date quote_maturity(const MarketQuote& q, const Date& valuation) {
    return tenor_maturity(valuation, q.tenor);
}

double upfront_target(const CdsContract& c, const DiscountCurve& disc, double upfront) {
    const double df_settle = disc.df(c.schedule.time_of(c.schedule.cash_settle));
    return df_settle * upfront - accrued_amount(c, disc);
}

HazardCurve bootstrap_mid(const std::vector<MarketQuote>& quotes, const Date& valuation,
                          const DiscountCurve& disc, CurveForm form,
                          const CalibrationOptions& opt) {
    require_increasing_maturities(quotes, valuation);
    std::vector<double> knots, lambdas;
    knots.reserve(quotes.size());
    lambdas.reserve(quotes.size());
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        const MarketQuote& q = quotes[i];
        const CdsContract c = quote_contract(q, valuation);
        if (!check_monotonicity_condition(c))
            throw AssumptionError("pillar '" + q.tenor +
                                  "': coupon too large against the loss given default; the "
                                  "priced value need not be monotone in the intensity");
        const DefaultGrid grid = DefaultGrid::build(c.schedule, opt.grid_step_days);
        const double target = upfront_target(c, disc, q.uf_mid());
        knots.push_back(c.schedule.time_of(c.schedule.maturity()));
        lambdas.push_back(opt.lambda_min); // placeholder for this pillar's slot

        auto g = [&](double lambda) {
            lambdas.back() = lambda;
            return pv_cds(c, disc, HazardCurve(knots, lambdas, form), grid) - target;
        };
        const double glo = g(opt.lambda_min);
        const double ghi = g(opt.lambda_max);
        if (glo > opt.root.f_tol || ghi < -opt.root.f_tol)
            throw AssumptionError("pillar '" + q.tenor + "': mid target " + fmt(target) +
                                  " outside the attainable value range [" + fmt(glo + target) +
                                  ", " + fmt(ghi + target) + "]");
        lambdas.back() =
            root::solve_bracketed(g, opt.lambda_min, opt.lambda_max, glo, ghi, opt.root);
        log::debug("bootstrap pillar %s: lambda = %.10g", q.tenor.c_str(), lambdas.back());
    }
    return HazardCurve(knots, lambdas, form);
}

BidAskPricer PillarContext::make_pricer(const MarketQuote& q, const Date& valuation,
                                        const DiscountCurve& disc, int grid_step_days) {
    CdsContract c = quote_contract(q, valuation);
    DefaultGrid grid = DefaultGrid::build(c.schedule, grid_step_days);
    return BidAskPricer(std::move(c), disc, std::move(grid));
}

PillarContext::PillarContext(MarketQuote quote, const Date& valuation,
                             const DiscountCurve& disc, std::vector<double> fixed_knots,
                             std::vector<double> fixed_lambdas, CurveForm form,
                             DistortionFamily family, const CalibrationOptions& opt)
    : quote_(std::move(quote)), opt_(opt), fixed_knots_(std::move(fixed_knots)),
      fixed_lambdas_(std::move(fixed_lambdas)), form_(form), family_(family),
      pricer_(make_pricer(quote_, valuation, disc, opt.grid_step_days)),
      knot_time_(
          pricer_.contract().schedule.time_of(pricer_.contract().schedule.maturity())),
      target_bid_(upfront_target(pricer_.contract(), disc, quote_.uf_bid)),
      target_ask_(upfront_target(pricer_.contract(), disc, quote_.uf_ask)) {
    if (fixed_knots_.size() != fixed_lambdas_.size())
        throw std::invalid_argument("fixed pillar knots and intensities differ in length");
    if (!fixed_knots_.empty() && knot_time_ <= fixed_knots_.back())
        throw std::invalid_argument("pillar maturity does not extend the fixed curve");
    if (!check_monotonicity_condition(pricer_.contract()))
        throw AssumptionError("pillar '" + quote_.tenor +
                              "': coupon too large against the loss given default; the "
                              "priced value need not be monotone in the intensity");
}

HazardCurve PillarContext::curve_with(double lambda) const {
    std::vector<double> knots = fixed_knots_;
    std::vector<double> lambdas = fixed_lambdas_;
    knots.push_back(knot_time_);
    lambdas.push_back(lambda);
    return HazardCurve(std::move(knots), std::move(lambdas), form_);
}

void PillarContext::ensure_hazard(double lambda) {
    if (lambda == cached_lambda_) return;
    pricer_.set_hazard(curve_with(lambda));
    cached_lambda_ = lambda;
}

double PillarContext::pv(double lambda) {
    ensure_hazard(lambda);
    return pricer_.pv();
}

double PillarContext::bid(double lambda, double gamma) {
    ensure_hazard(lambda);
    return pricer_.bid(Distortion(family_, gamma));
}

double PillarContext::ask(double lambda, double gamma) {
    ensure_hazard(lambda);
    return pricer_.ask(Distortion(family_, gamma));
}

double PillarContext::spread(double lambda, double gamma) {
    ensure_hazard(lambda);
    return pricer_.spread(Distortion(family_, gamma));
}

LambdaBracket bracket_lambda(PillarContext& ctx) {
    const CalibrationOptions& opt = ctx.options();
    const double b = ctx.target_bid();
    const double a = ctx.target_ask();
    const double pv_lo = ctx.pv(opt.lambda_min);
    const double pv_hi = ctx.pv(opt.lambda_max);
    if (b - pv_lo < -opt.root.f_tol || pv_hi - a < -opt.root.f_tol)
        throw AssumptionError("pillar '" + ctx.quote().tenor + "': quoted levels [" + fmt(b) +
                              ", " + fmt(a) + "] fall outside the attainable value range [" +
                              fmt(pv_lo) + ", " + fmt(pv_hi) + "]");

    LambdaBracket br;
    br.lambda_b = root::solve_bracketed([&](double l) { return ctx.pv(l) - b; }, opt.lambda_min,
                                        opt.lambda_max, pv_lo - b, pv_hi - b, opt.root);
    br.lambda_a = root::solve_bracketed([&](double l) { return ctx.pv(l) - a; }, opt.lambda_min,
                                        opt.lambda_max, pv_lo - a, pv_hi - a, opt.root);
    return br;
}

double solve_gamma_for_spread(PillarContext& ctx, double lambda, double target_spread) {
    if (target_spread < 0.0)
        throw std::invalid_argument("target spread must be non-negative");
    if (target_spread == 0.0) return 0.0;
    const CalibrationOptions& opt = ctx.options();
    const double cap = ctx.spread(lambda, opt.gamma_max);
    if (cap < target_spread - opt.root.f_tol)
        throw AssumptionError("pillar '" + ctx.quote().tenor + "': quoted spread " +
                              fmt(target_spread) + " exceeds the widest model spread " +
                              fmt(cap) + " attainable at the distortion cap " +
                              fmt(opt.gamma_max));
    return root::solve_bracketed(
        [&](double g) { return ctx.spread(lambda, g) - target_spread; }, 0.0, opt.gamma_max,
        -target_spread, cap - target_spread, opt.root);
}

PillarFit calibrate_pillar(PillarContext& ctx) {
    const CalibrationOptions& opt = ctx.options();
    const double b = ctx.target_bid();
    const double a = ctx.target_ask();

    PillarFit fit;
    fit.bracket = bracket_lambda(ctx);

    if (opt.force_gamma_zero) {
        // One-price mode: pin gamma and fit the mid target; with coincident
        // quotes the bracket has already collapsed onto the root.
        const double mid = 0.5 * (b + a);
        fit.lambda = root::solve_bracketed([&](double l) { return ctx.pv(l) - mid; },
                                           fit.bracket.lambda_b, fit.bracket.lambda_a,
                                           ctx.pv(fit.bracket.lambda_b) - mid,
                                           ctx.pv(fit.bracket.lambda_a) - mid, opt.root);
        fit.gamma = 0.0;
        fit.residual_bid = ctx.bid(fit.lambda, 0.0) - b;
        fit.residual_ask = ctx.ask(fit.lambda, 0.0) - a;
        return fit;
    }

    const double target_spread = a - b;
    auto outer = [&](double lambda) {
        const double gamma = solve_gamma_for_spread(ctx, lambda, target_spread);
        return ctx.ask(lambda, gamma) - a;
    };

    // At the lower end the undistorted value sits on the bid target, so the
    // spread-matched ask undershoots; at the upper end it overshoots. A sign
    // failure here means the fixed point structure broke down numerically.
    const double f_lo = outer(fit.bracket.lambda_b);
    const double f_hi = outer(fit.bracket.lambda_a);
    if (f_lo > opt.root.f_tol || f_hi < -opt.root.f_tol)
        throw SolverError("pillar '" + ctx.quote().tenor +
                          "': ask residual does not change sign over the intensity bracket (" +
                          fmt(f_lo) + " at " + fmt(fit.bracket.lambda_b) + ", " + fmt(f_hi) +
                          " at " + fmt(fit.bracket.lambda_a) + ")");

    fit.lambda = root::solve_bracketed(outer, fit.bracket.lambda_b, fit.bracket.lambda_a, f_lo,
                                       f_hi, opt.root);
    fit.gamma = solve_gamma_for_spread(ctx, fit.lambda, target_spread);
    fit.residual_bid = ctx.bid(fit.lambda, fit.gamma) - b;
    fit.residual_ask = ctx.ask(fit.lambda, fit.gamma) - a;

    // The fitted level must leave the risk-neutral value strictly inside the
    // quoted corridor; landing outside means the fit is not acceptable.
    const double pv = ctx.pv(fit.lambda);
    if (!(pv > b && pv < a))
        throw SolverError("pillar '" + ctx.quote().tenor + "': risk-neutral value " + fmt(pv) +
                          " escaped the quoted corridor [" + fmt(b) + ", " + fmt(a) + "]");
    return fit;
}

double LiquidityCurve::at(double t) const {
    if (times.empty()) throw std::logic_error("empty liquidity term structure");
    if (t <= times.front()) return gammas.front();
    if (t >= times.back()) return gammas.back();
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (t <= times[i]) {
            const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
            return gammas[i - 1] + w * (gammas[i] - gammas[i - 1]);
        }
    }
    return gammas.back(); // unreachable
}

const PillarResult* CalibrationResult::find(const std::string& tenor) const {
    for (const PillarResult& p : pillars)
        if (p.tenor == tenor) return &p;
    return nullptr;
}

CalibrationResult calibrate_bid_ask(const std::vector<MarketQuote>& quotes,
                                    const Date& valuation, const DiscountCurve& disc,
                                    DistortionFamily family, CurveForm form,
                                    const CalibrationOptions& opt) {
    require_increasing_maturities(quotes, valuation);
    CalibrationResult result;
    std::vector<double> knots, lambdas;
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        const MarketQuote& q = quotes[i];
        try {
            if (!opt.force_gamma_zero && !(q.uf_bid < q.uf_ask))
                throw AssumptionError(
                    "pillar '" + q.tenor +
                    "': two-price calibration needs a strictly positive quoted spread (a zero "
                    "spread forces a vanishing distortion level; use the mid bootstrap)");
            PillarContext ctx(q, valuation, disc, knots, lambdas, form, family, opt);
            const PillarFit fit = calibrate_pillar(ctx);

            PillarResult p;
            p.tenor = q.tenor;
            p.maturity = quote_maturity(q, valuation);
            p.lambda = fit.lambda;
            p.gamma = fit.gamma;
            p.residual_bid = fit.residual_bid;
            p.residual_ask = fit.residual_ask;
            p.lambda_b = fit.bracket.lambda_b;
            p.lambda_a = fit.bracket.lambda_a;
            result.pillars.push_back(p);
            knots.push_back(ctx.knot_time());
            lambdas.push_back(fit.lambda);
            log::info("pillar %s: lambda = %.10g, gamma = %.10g", q.tenor.c_str(),
                      fit.lambda, fit.gamma);
        } catch (const AssumptionError& e) {
            result.success = false;
            result.failure_kind = CalibrationResult::FailureKind::Assumption;
            result.failed_pillar = i;
            result.failure = e.what();
        } catch (const SolverError& e) {
            result.success = false;
            result.failure_kind = CalibrationResult::FailureKind::Solver;
            result.failed_pillar = i;
            result.failure = e.what();
        }
        if (!result.success) {
            log::warn("calibration stopped at pillar %s: %s", q.tenor.c_str(),
                      result.failure.c_str());
            break;
        }
    }
    if (!knots.empty()) result.hazard_curve = HazardCurve(knots, lambdas, form);
    for (std::size_t i = 0; i < result.pillars.size(); ++i) {
        result.liquidity.times.push_back(knots[i]);
        result.liquidity.gammas.push_back(result.pillars[i].gamma);
    }
    return result;
}

} // namespace conic
