#include "conic/curves.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conic {

DiscountCurve::DiscountCurve(std::vector<double> times, std::vector<double> dfs,
                             std::optional<Date> valuation)
    : times_(std::move(times)), valuation_(valuation) {
    if (times_.empty() || times_.size() != dfs.size())
        throw ParseError("discount curve needs matching, non-empty time/df vectors");
    double prev = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (times_[i] <= prev)
            throw ParseError("discount curve times must be strictly increasing and positive");
        if (!(dfs[i] > 0.0))
            throw ParseError("discount factors must be positive");
        prev = times_[i];
        log_dfs_.push_back(std::log(dfs[i]));
    }
}

DiscountCurve DiscountCurve::flat(double rate) {
    // one node; log-linear through (0, 1) plus flat-forward extrapolation
    // reproduce exp(-rate * t) everywhere
    return DiscountCurve({1.0}, {std::exp(-rate)});
}

double DiscountCurve::df(double t) const {
    if (t < 0.0) throw std::domain_error("df: negative time " + std::to_string(t));
    if (t == 0.0) return 1.0;
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    const std::size_t n = times_.size();
    double log_df;
    if (it == times_.end()) {
        // hold the last forward rate flat
        const double slope = (n == 1) ? log_dfs_[0] / times_[0]
                                      : (log_dfs_[n - 1] - log_dfs_[n - 2]) /
                                            (times_[n - 1] - times_[n - 2]);
        log_df = log_dfs_[n - 1] + slope * (t - times_[n - 1]);
    } else {
        const std::size_t j = static_cast<std::size_t>(it - times_.begin());
        const double t0 = (j == 0) ? 0.0 : times_[j - 1];
        const double l0 = (j == 0) ? 0.0 : log_dfs_[j - 1];
        const double w = (t - t0) / (times_[j] - t0);
        log_df = l0 + w * (log_dfs_[j] - l0);
    }
    return std::exp(log_df);
}

std::vector<double> DiscountCurve::dfs() const {
    std::vector<double> out(log_dfs_.size());
    std::transform(log_dfs_.begin(), log_dfs_.end(), out.begin(),
                   [](double l) { return std::exp(l); });
    return out;
}

CurveForm curve_form_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "piecewise_constant" || lower == "constant" || lower == "const" || lower == "pwc")
        return CurveForm::PiecewiseConstant;
    if (lower == "piecewise_linear" || lower == "linear" || lower == "pwl")
        return CurveForm::PiecewiseLinear;
    throw ParseError("unknown curve form '" + std::string(s) + "'");
}

std::string_view to_string(CurveForm form) {
    return form == CurveForm::PiecewiseConstant ? "piecewise_constant" : "piecewise_linear";
}

HazardCurve::HazardCurve(std::vector<double> knot_times, std::vector<double> lambdas,
                         CurveForm form)
    : times_(std::move(knot_times)), lambdas_(std::move(lambdas)), form_(form) {
    if (times_.empty() || times_.size() != lambdas_.size())
        throw ParseError("hazard curve needs matching, non-empty knot/lambda vectors");
    double prev = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (times_[i] <= prev)
            throw ParseError("hazard knots must be strictly increasing and positive");
        if (!(lambdas_[i] > 0.0)) throw ParseError("default intensities must be positive");
        prev = times_[i];
    }
    rebuild();
}

void HazardCurve::rebuild() {
    const std::size_t k = times_.size();
    cum_.assign(k, 0.0);
    if (form_ == CurveForm::PiecewiseConstant || k == 1) {
        double acc = 0.0, t0 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            acc += lambdas_[i] * (times_[i] - t0);
            cum_[i] = acc;
            t0 = times_[i];
        }
        return;
    }
    // piecewise linear: flat head, trapezoid interior, flat tail
    cum_[0] = lambdas_[0] * times_[0];
    for (std::size_t i = 1; i + 1 < k; ++i)
        cum_[i] = cum_[i - 1] + 0.5 * (lambdas_[i - 1] + lambdas_[i]) * (times_[i] - times_[i - 1]);
    cum_[k - 1] = cum_[k - 2] + lambdas_[k - 1] * (times_[k - 1] - times_[k - 2]);
}

double HazardCurve::lambda_at(double t) const {
    const std::size_t k = times_.size();
    if (form_ == CurveForm::PiecewiseConstant || k == 1) {
        const auto it = std::lower_bound(times_.begin(), times_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - times_.begin());
        return lambdas_[std::min(j, k - 1)];
    }
    if (t <= times_[0]) return lambdas_[0];
    if (t > times_[k - 2]) return lambdas_[k - 1];
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin()); // t in (times_[j-1], times_[j]]
    const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return lambdas_[j - 1] + w * (lambdas_[j] - lambdas_[j - 1]);
}

double HazardCurve::intensity_integral(double t) const {
    if (t < 0.0) throw std::domain_error("intensity_integral: negative time");
    if (t == 0.0) return 0.0;
    const std::size_t k = times_.size();
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin());
    if (j == k) // beyond the last knot both forms are flat at the last level
        return cum_[k - 1] + lambdas_[k - 1] * (t - times_[k - 1]);

    const double t0 = (j == 0) ? 0.0 : times_[j - 1];
    const double base = (j == 0) ? 0.0 : cum_[j - 1];
    if (form_ == CurveForm::PiecewiseConstant || k == 1 || j == 0 || j == k - 1) {
        // constant segments: head/tail of the linear form, or any PWC segment
        return base + lambdas_[j] * (t - t0);
    }
    // interior linear segment from lambdas_[j-1] to lambdas_[j]
    const double dt = times_[j] - t0;
    const double a = lambdas_[j - 1];
    const double slope = (lambdas_[j] - a) / dt;
    const double x = t - t0;
    return base + a * x + 0.5 * slope * x * x;
}

double HazardCurve::survival(double t) const { return std::exp(-intensity_integral(t)); }

double HazardCurve::default_mass(double a, double b) const {
    if (a > b) throw std::invalid_argument("default_mass: interval out of order");
    const double di = intensity_integral(b) - intensity_integral(a);
    return survival(a) * (-std::expm1(-di));
}

HazardCurve HazardCurve::bump_pillar(std::size_t i, double lambda) const {
    if (i >= lambdas_.size()) throw std::out_of_range("bump_pillar: pillar index");
    if (!(lambda > 0.0)) throw std::invalid_argument("bump_pillar: non-positive intensity");
    HazardCurve out(*this);
    out.lambdas_[i] = lambda;
    out.rebuild();
    return out;
}

} // namespace conic
