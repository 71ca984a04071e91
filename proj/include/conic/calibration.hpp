#pragma once

#include "conic/choquet.hpp"
#include "conic/root_finding.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conic {

/// One tenor's quoted upfront premia plus the contract terms they refer to.
/// Upfronts are fractions of notional, signed from the protection buyer's
/// side (negative means the buyer is paid to enter).
struct MarketQuote {
    std::string tenor; // tenor token ("6M", "5Y") or ISO maturity date
    double uf_bid = 0.0;
    double uf_ask = 0.0;
    double coupon = 0.0;
    double recovery = 0.0;

    double uf_mid() const { return 0.5 * (uf_bid + uf_ask); }
    double lgd() const { return 1.0 - recovery; }
};

struct CalibrationOptions {
    int grid_step_days = 1;
    double lambda_min = 1e-10;
    double lambda_max = 10.0;
    double gamma_max = 50.0;
    // One-price mode routed through the two-price machinery: pins gamma to 0
    // and fits the mid upfront, accepting quotes with uf_bid == uf_ask.
    bool force_gamma_zero = false;
    root::Options root;
};

/// Contract implied by a quote: schedule from the valuation date and the
/// tenor under the standard roll convention, lgd = 1 - recovery.
CdsContract quote_contract(const MarketQuote& q, const Date& valuation);
Date quote_maturity(const MarketQuote& q, const Date& valuation);

/// Converts a cash-settled upfront into the running-PV target the solvers
/// aim at: settlement-discounted upfront less the accrued amount.
double upfront_target(const CdsContract& c, const DiscountCurve& disc, double upfront);

/// Classical one-price bootstrap: for each pillar in maturity order, solve
/// for the constant hazard extension that reprices the mid upfront, keeping
/// the already-fitted pillars frozen.
HazardCurve bootstrap_mid(const std::vector<MarketQuote>& quotes, const Date& valuation,
                          const DiscountCurve& disc, CurveForm form,
                          const CalibrationOptions& opt = {});

/// Pricing state for one pillar while all earlier pillars stay frozen.
/// Caches the payoff ranking (hazard-independent) and the last hazard level,
/// so sweeping gamma at a fixed lambda costs one distortion pass per leg.
class PillarContext {
  public:
    PillarContext(MarketQuote quote, const Date& valuation, const DiscountCurve& disc,
                  std::vector<double> fixed_knots, std::vector<double> fixed_lambdas,
                  CurveForm form, DistortionFamily family, const CalibrationOptions& opt = {});

    double pv(double lambda);
    double bid(double lambda, double gamma);
    double ask(double lambda, double gamma);
    double spread(double lambda, double gamma);

    /// Running-PV targets implied by the quoted upfronts.
    double target_bid() const { return target_bid_; }
    double target_ask() const { return target_ask_; }

    const MarketQuote& quote() const { return quote_; }
    double knot_time() const { return knot_time_; }
    DistortionFamily family() const { return family_; }
    const CalibrationOptions& options() const { return opt_; }

    /// Hazard curve over the fixed pillars plus this one at the given level.
    HazardCurve curve_with(double lambda) const;

  private:
    static BidAskPricer make_pricer(const MarketQuote& q, const Date& valuation,
                                    const DiscountCurve& disc, int grid_step_days);
    void ensure_hazard(double lambda);

    MarketQuote quote_;
    CalibrationOptions opt_;
    std::vector<double> fixed_knots_;
    std::vector<double> fixed_lambdas_;
    CurveForm form_;
    DistortionFamily family_;
    BidAskPricer pricer_;
    double knot_time_;
    double target_bid_;
    double target_ask_;
    double cached_lambda_ = -1.0; // no hazard set yet
};

struct LambdaBracket {
    double lambda_b = 0.0;
    double lambda_a = 0.0;
};

/// Intensity interval whose endpoints reprice the bid and ask targets under
/// the undistorted measure. Requires both targets to be attainable over the
/// intensity clamp (reported with the attained range when they are not).
LambdaBracket bracket_lambda(PillarContext& ctx);

/// The unique distortion level at which the model spread matches the target,
/// by monotonicity of the spread in gamma. Requires the spread at the gamma
/// cap to reach the target (reported with the attained spread when not).
double solve_gamma_for_spread(PillarContext& ctx, double lambda, double target_spread);

struct PillarFit {
    double lambda = 0.0;
    double gamma = 0.0;
    LambdaBracket bracket;
    double residual_bid = 0.0;
    double residual_ask = 0.0;
};

/// Joint (lambda, gamma) fit for one pillar: the outer equation matches the
/// ask target over the bracket, with gamma re-solved from the spread match
/// at every candidate lambda, so the bid equation holds automatically.
PillarFit calibrate_pillar(PillarContext& ctx);

struct PillarResult {
    std::string tenor;
    Date maturity;
    double lambda = 0.0;
    double gamma = 0.0;
    double residual_bid = 0.0;
    double residual_ask = 0.0;
    double lambda_b = 0.0;
    double lambda_a = 0.0;
};

/// Gamma term structure: linear between pillar maturities, flat outside.
struct LiquidityCurve {
    std::vector<double> times;
    std::vector<double> gammas;

    double at(double t) const;
};

struct CalibrationResult {
    enum class FailureKind { None, Assumption, Solver };

    std::vector<PillarResult> pillars;
    std::optional<HazardCurve> hazard_curve; // over the pillars that fitted
    LiquidityCurve liquidity;
    bool success = true;
    FailureKind failure_kind = FailureKind::None;
    std::size_t failed_pillar = 0; // meaningful only when !success
    std::string failure;

    /// Index lookup by tenor label; npos-style -1 wrapped as optional.
    const PillarResult* find(const std::string& tenor) const;
};

/// Sequential two-price calibration across all quotes. Pillar failures stop
/// the sweep; the result then carries the pillars fitted so far together
/// with the failure message instead of throwing.
CalibrationResult calibrate_bid_ask(const std::vector<MarketQuote>& quotes,
                                    const Date& valuation, const DiscountCurve& disc,
                                    DistortionFamily family, CurveForm form,
                                    const CalibrationOptions& opt = {});

} // namespace conic
