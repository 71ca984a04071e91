#pragma once

#include <string_view>

namespace conic {

namespace normal {

/// Standard normal CDF via the complementary error function.
double cdf(double x);

/// Standard normal quantile on (0, 1), Wichura's PPND16 rational
/// approximation (absolute error well below 1e-12 across the domain).
/// Throws std::domain_error at or outside the endpoints.
double inverse_cdf(double p);

} // namespace normal

enum class DistortionFamily { MinMaxVar, Wang };

DistortionFamily distortion_family_from_string(std::string_view s);
std::string_view to_string(DistortionFamily family);

/// Concave probability distortion psi_gamma on [0,1].
///
/// MinMaxVar: psi(x) = 1 - (1 - x^(1/(1+gamma)))^(1+gamma).
/// Wang:      psi(x) = Phi(Phi^{-1}(x) + gamma), with psi(0) = 0 and
///            psi(1) = 1 taken as the endpoint limits.
/// gamma = 0 is the identity for both families (returned exactly).
class Distortion {
  public:
    Distortion(DistortionFamily family, double gamma);

    static Distortion minmaxvar(double gamma) { return {DistortionFamily::MinMaxVar, gamma}; }
    static Distortion wang(double gamma) { return {DistortionFamily::Wang, gamma}; }

    /// psi_gamma(x) for x in [0,1].
    double operator()(double x) const;

    /// Dual distortion 1 - psi_gamma(1 - x), the measure used when a
    /// Choquet integral of -X is rewritten as one of X.
    double dual(double x) const;

    DistortionFamily family() const { return family_; }
    double gamma() const { return gamma_; }

    /// Same family at a different gamma (solvers walk gamma).
    Distortion with_gamma(double gamma) const { return {family_, gamma}; }

  private:
    DistortionFamily family_;
    double gamma_;
};

/// Free-function spellings of the two evaluation modes.
double distort(const Distortion& d, double x);
double dual_distort(const Distortion& d, double x);

} // namespace conic
