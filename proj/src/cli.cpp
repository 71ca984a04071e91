#include "conic/cli.hpp"

#include "conic/errors.hpp"
#include "conic/market_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace conic {

namespace {

struct Flags {
    std::string quotes_path;
    std::string discount_path;
    std::string result_path;
    std::string distortion = "minmaxvar";
    std::string curve_form = "const";
    int grid_days = 1;
    double tol = 1e-12;
    std::string out;
    std::string format = "json";
    int survival_days = 30;
    double lambda = 0.0;
    double gamma = 0.0;
};

CalibrationOptions make_options(const Flags& fl) {
    CalibrationOptions opt;
    opt.grid_step_days = fl.grid_days;
    opt.root.f_tol = fl.tol;
    return opt;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Writes lines to --out when given, stdout otherwise.
void emit_lines(const std::string& out, const std::vector<std::string>& lines) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw ParseError("cannot write '" + out + "'");
        os = &file;
    }
    for (const std::string& l : lines) (*os) << l << '\n';
}

std::vector<SurvivalSample> sample_survival(const HazardCurve& h, const Date& valuation,
                                            int step_days) {
    std::vector<SurvivalSample> samples;
    const double horizon = h.knot_times().back();
    Date d = valuation;
    for (;;) {
        double t = year_fraction(valuation, d, DayCount::Act365F);
        if (t >= horizon) t = horizon;
        samples.push_back({d, t, h.survival(t)});
        if (t >= horizon) break;
        d = d.plus_days(step_days);
    }
    return samples;
}

ResultFile make_result(const QuoteFile& qf, const Flags& fl, const std::string& distortion,
                       CurveForm form, const CalibrationOptions& opt,
                       const std::vector<ResultPillar>& pillars, const HazardCurve& curve) {
    ResultFile r;
    r.valuation = qf.valuation;
    r.distortion = distortion;
    r.curve_form = std::string(to_string(form));
    r.grid_step_days = opt.grid_step_days;
    r.f_tol = opt.root.f_tol;
    r.x_tol = opt.root.x_tol;
    r.quotes_hash = file_hash(fl.quotes_path);
    r.discount_hash = file_hash(fl.discount_path);
    r.pillars = pillars;
    r.survival = sample_survival(curve, qf.valuation, fl.survival_days);
    return r;
}

void write_result(const ResultFile& r, const Flags& fl) {
    if (fl.out.empty()) return;
    if (fl.format == "csv")
        write_result_csv(r, fl.out);
    else
        write_result_json(r, fl.out);
}

void print_pillars(const std::vector<ResultPillar>& pillars) {
    std::vector<std::string> lines{"tenor,lambda,gamma,residual_bid,residual_ask"};
    for (const ResultPillar& p : pillars)
        lines.push_back(p.tenor + ',' + num(p.lambda) + ',' + num(p.gamma) + ',' +
                        num(p.residual_bid) + ',' + num(p.residual_ask));
    emit_lines("", lines);
}

int do_bootstrap(const Flags& fl) {
    const QuoteFile qf = parse_quotes(fl.quotes_path);
    const DiscountCurve disc = parse_discount_curve(fl.discount_path, qf.valuation);
    const CurveForm form = curve_form_from_string(fl.curve_form);
    const CalibrationOptions opt = make_options(fl);
    const HazardCurve curve = bootstrap_mid(qf.quotes, qf.valuation, disc, form, opt);

    // residuals of each pillar against its own solve (earlier pillars fixed)
    std::vector<ResultPillar> pillars;
    std::vector<double> knots, lambdas;
    for (std::size_t i = 0; i < qf.quotes.size(); ++i) {
        const MarketQuote& q = qf.quotes[i];
        const CdsContract c = quote_contract(q, qf.valuation);
        knots.push_back(curve.knot_times()[i]);
        lambdas.push_back(curve.lambdas()[i]);
        const HazardCurve prefix(knots, lambdas, form);
        const DefaultGrid grid = DefaultGrid::build(c.schedule, opt.grid_step_days);
        const double residual =
            pv_cds(c, disc, prefix, grid) - upfront_target(c, disc, q.uf_mid());
        pillars.push_back({q.tenor, curve.lambdas()[i], 0.0, residual, residual});
    }
    print_pillars(pillars);
    write_result(make_result(qf, fl, "none", form, opt, pillars, curve), fl);
    return 0;
}

int do_calibrate(const Flags& fl, bool plot) {
    const QuoteFile qf = parse_quotes(fl.quotes_path);
    const DiscountCurve disc = parse_discount_curve(fl.discount_path, qf.valuation);
    const CurveForm form = curve_form_from_string(fl.curve_form);
    const DistortionFamily family = distortion_family_from_string(fl.distortion);
    const CalibrationOptions opt = make_options(fl);
    const CalibrationResult res =
        calibrate_bid_ask(qf.quotes, qf.valuation, disc, family, form, opt);

    std::vector<ResultPillar> pillars;
    for (const PillarResult& p : res.pillars)
        pillars.push_back({p.tenor, p.lambda, p.gamma, p.residual_bid, p.residual_ask});
    print_pillars(pillars);
    if (!res.success) {
        std::fprintf(stderr, "error: %s\n", res.failure.c_str());
        return res.failure_kind == CalibrationResult::FailureKind::Assumption ? 2 : 3;
    }

    if (!plot) {
        write_result(make_result(qf, fl, fl.distortion, form, opt, pillars, *res.hazard_curve),
                     fl);
        return 0;
    }

    // long-form series: quoted and fitted upfronts with their gaps at the
    // pillar maturities, then the fitted intensity steps and interpolated
    // distortion level on a regular grid
    std::vector<std::string> lines{"series,t,value"};
    const HazardCurve& curve = *res.hazard_curve;
    for (std::size_t i = 0; i < res.pillars.size(); ++i) {
        const PillarResult& p = res.pillars[i];
        const MarketQuote& q = qf.quotes[i];
        const CdsContract c = quote_contract(q, qf.valuation);
        const double t = curve.knot_times()[i];
        const double df_s = disc.df(c.schedule.time_of(c.schedule.cash_settle));
        const double model_bid = q.uf_bid + p.residual_bid / df_s;
        const double model_ask = q.uf_ask + p.residual_ask / df_s;
        lines.push_back("quote_bid," + num(t) + ',' + num(q.uf_bid));
        lines.push_back("quote_ask," + num(t) + ',' + num(q.uf_ask));
        lines.push_back("model_bid," + num(t) + ',' + num(model_bid));
        lines.push_back("model_ask," + num(t) + ',' + num(model_ask));
        lines.push_back("error_bid," + num(t) + ',' + num(model_bid - q.uf_bid));
        lines.push_back("error_ask," + num(t) + ',' + num(model_ask - q.uf_ask));
    }
    for (const SurvivalSample& s : sample_survival(curve, qf.valuation, fl.survival_days)) {
        lines.push_back("lambda," + num(s.t) + ',' + num(curve.lambda_at(s.t)));
        lines.push_back("gamma," + num(s.t) + ',' + num(res.liquidity.at(s.t)));
    }
    emit_lines(fl.out, lines);
    return 0;
}

int do_price(const Flags& fl) {
    const QuoteFile qf = parse_quotes(fl.quotes_path);
    const DiscountCurve disc = parse_discount_curve(fl.discount_path, qf.valuation);
    const DistortionFamily family = distortion_family_from_string(fl.distortion);
    const Distortion d(family, fl.gamma);

    std::vector<std::string> lines{"tenor,pv,bid,ask,uf_bid,uf_ask"};
    for (const MarketQuote& q : qf.quotes) {
        const CdsContract c = quote_contract(q, qf.valuation);
        const DefaultGrid grid = DefaultGrid::build(c.schedule, fl.grid_days);
        const HazardCurve flat({c.schedule.time_of(c.schedule.maturity())}, {fl.lambda});
        BidAskPricer pricer(c, disc, grid);
        pricer.set_hazard(flat);
        const double acc = accrued_amount(c, disc);
        const double df_s = disc.df(c.schedule.time_of(c.schedule.cash_settle));
        lines.push_back(q.tenor + ',' + num(pricer.pv()) + ',' + num(pricer.bid(d)) + ',' +
                        num(pricer.ask(d)) + ',' + num((pricer.bid(d) + acc) / df_s) + ',' +
                        num((pricer.ask(d) + acc) / df_s));
    }
    emit_lines(fl.out, lines);
    return 0;
}

int do_survival(const Flags& fl) {
    const ResultFile r = read_result_json(fl.result_path);
    const HazardCurve curve = r.hazard_curve();
    std::vector<std::string> lines{"date,t,survival"};
    for (const SurvivalSample& s : sample_survival(curve, r.valuation, fl.survival_days))
        lines.push_back(s.date.to_string() + ',' + num(s.t) + ',' + num(s.survival));
    emit_lines(fl.out, lines);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"two-price CDS calibration: implied default intensities and "
                 "liquidity levels from bid/ask upfront quotes"};
    app.require_subcommand(1);
    Flags fl;

    const auto add_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--quotes", fl.quotes_path, "quote sheet CSV")->required();
        cmd->add_option("--discount-curve", fl.discount_path, "discount factor CSV")
            ->required();
    };
    const auto add_model = [&](CLI::App* cmd, bool with_form) {
        cmd->add_option("--distortion", fl.distortion, "distortion family")
            ->check(CLI::IsMember({"minmaxvar", "wang"}));
        if (with_form)
            cmd->add_option("--curve-form", fl.curve_form, "hazard curve interpolation")
                ->check(CLI::IsMember({"const", "linear"}));
        cmd->add_option("--grid-days", fl.grid_days, "default grid step in days")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--tol", fl.tol, "solver tolerance on function values")
            ->check(CLI::PositiveNumber);
    };
    const auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", fl.out, "output path (stdout when omitted)");
        cmd->add_option("--format", fl.format, "result file format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--survival-days", fl.survival_days,
                        "survival sample spacing in days")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* boot = app.add_subcommand("bootstrap", "fit hazard pillars to mid upfronts");
    add_inputs(boot);
    add_model(boot, true);
    add_output(boot);

    CLI::App* cal = app.add_subcommand(
        "calibrate", "fit (intensity, liquidity) pillars to bid/ask upfronts");
    add_inputs(cal);
    add_model(cal, true);
    add_output(cal);

    CLI::App* price = app.add_subcommand(
        "price", "value the quoted contracts at a given flat intensity and liquidity");
    add_inputs(price);
    add_model(price, false);
    price->add_option("--lambda", fl.lambda, "flat default intensity")
        ->required()
        ->check(CLI::PositiveNumber);
    price->add_option("--gamma", fl.gamma, "distortion level")
        ->required()
        ->check(CLI::NonNegativeNumber);
    price->add_option("--out", fl.out, "output path (stdout when omitted)");

    CLI::App* surv =
        app.add_subcommand("survival", "survival probabilities from a stored result");
    surv->add_option("--result", fl.result_path, "result file (JSON)")->required();
    surv->add_option("--survival-days", fl.survival_days, "sample spacing in days")
        ->check(CLI::PositiveNumber);
    surv->add_option("--out", fl.out, "output path (stdout when omitted)");

    CLI::App* plot = app.add_subcommand(
        "export-plot", "calibrate and dump plot-ready series (premia, errors, curves)");
    add_inputs(plot);
    add_model(plot, true);
    add_output(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (boot->parsed()) return do_bootstrap(fl);
        if (cal->parsed()) return do_calibrate(fl, false);
        if (price->parsed()) return do_price(fl);
        if (surv->parsed()) return do_survival(fl);
        if (plot->parsed()) return do_calibrate(fl, true);
        return 1; // unreachable given require_subcommand
    } catch (const AssumptionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"conic-cds"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace conic
