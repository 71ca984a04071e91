#pragma once

#include "conic/dates.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace conic {

/// Risk-free discounting from pillar (time, df) nodes.
///
/// Interpolation is linear in log df with df(0) = 1; past the last node the
/// final forward rate is held flat. Node times are in years (ACT/365F from
/// the valuation date by convention elsewhere).
class DiscountCurve {
  public:
    DiscountCurve(std::vector<double> times, std::vector<double> dfs,
                  std::optional<Date> valuation = std::nullopt);

    /// Constant continuously-compounded rate: df(t) = exp(-rate * t).
    static DiscountCurve flat(double rate);

    /// Discount factor at t >= 0 years (t < 0 is a domain error).
    double df(double t) const;

    const std::vector<double>& times() const { return times_; }
    std::vector<double> dfs() const;
    const std::optional<Date>& valuation() const { return valuation_; }

  private:
    std::vector<double> times_;
    std::vector<double> log_dfs_;
    std::optional<Date> valuation_;
};

enum class CurveForm { PiecewiseConstant, PiecewiseLinear };

CurveForm curve_form_from_string(std::string_view s);
std::string_view to_string(CurveForm form);

/// Default intensity term structure on pillar knots 0 < t_1 < ... < t_K.
///
/// PiecewiseConstant holds lambda_i on (t_{i-1}, t_i] and lambda_K beyond.
/// PiecewiseLinear is flat at lambda_1 up to t_1, interpolates linearly
/// between consecutive pillar levels on the interior segments, and is flat
/// at lambda_K past t_{K-1} (so the last level enters as a flat tail, not a
/// ramp). Under both forms the curve on [0, t_i] depends only on
/// lambda_1..lambda_i, which is what makes a sequential bootstrap valid.
class HazardCurve {
  public:
    HazardCurve(std::vector<double> knot_times, std::vector<double> lambdas,
                CurveForm form = CurveForm::PiecewiseConstant);

    double lambda_at(double t) const;

    /// Integrated intensity from 0 to t >= 0 (t < 0 is a domain error).
    double intensity_integral(double t) const;

    /// P(tau > t) = exp(-integrated intensity).
    double survival(double t) const;

    /// P(a < tau <= b), computed as survival(a) * (-expm1(-dI)) so that
    /// masses of short cells do not lose precision to cancellation.
    double default_mass(double a, double b) const;

    /// Copy of this curve with lambda_i (0-based) replaced; curves stay
    /// immutable, which is what the bootstrap relies on between sweeps.
    HazardCurve bump_pillar(std::size_t i, double lambda) const;

    std::size_t pillars() const { return times_.size(); }
    const std::vector<double>& knot_times() const { return times_; }
    const std::vector<double>& lambdas() const { return lambdas_; }
    CurveForm form() const { return form_; }

  private:
    void rebuild();

    std::vector<double> times_;
    std::vector<double> lambdas_;
    std::vector<double> cum_; // intensity integral at each knot
    CurveForm form_;
};

} // namespace conic
