#include "conic/distortion.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conic {

namespace normal {

double cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Wichura's algorithm AS 241, routine PPND16. Three rational
// approximations: a central one in p and two tail ones in sqrt(-log r).
double inverse_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal::inverse_cdf: p must lie strictly inside (0,1)");

    static constexpr double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
        1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
        3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static constexpr double b[8] = {
        1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
        5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
        2.8729085735721942674e+4, 5.2264952788528545610e+3};
    static constexpr double c[8] = {
        1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
        3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    const auto horner = [](const double (&k)[8], double t) {
        return ((((((k[7] * t + k[6]) * t + k[5]) * t + k[4]) * t + k[3]) * t + k[2]) * t + k[1]) *
                   t +
               k[0];
    };

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * horner(a, r) / horner(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = horner(c, r) / horner(d, r);
    } else {
        r -= 5.0;
        z = horner(e, r) / horner(f, r);
    }
    return (q < 0.0) ? -z : z;
}

} // namespace normal

DistortionFamily distortion_family_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "minmaxvar") return DistortionFamily::MinMaxVar;
    if (lower == "wang") return DistortionFamily::Wang;
    throw ParseError("unknown distortion family '" + std::string(s) +
                     "' (expected minmaxvar or wang)");
}

std::string_view to_string(DistortionFamily family) {
    return family == DistortionFamily::MinMaxVar ? "minmaxvar" : "wang";
}

Distortion::Distortion(DistortionFamily family, double gamma) : family_(family), gamma_(gamma) {
    if (!(gamma >= 0.0)) // also rejects NaN
        throw std::invalid_argument("distortion parameter must be non-negative");
}

double Distortion::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("distortion argument outside [0,1]");
    if (gamma_ == 0.0) return x;
    if (family_ == DistortionFamily::MinMaxVar) {
        const double p = 1.0 + gamma_;
        return 1.0 - std::pow(1.0 - std::pow(x, 1.0 / p), p);
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    return normal::cdf(normal::inverse_cdf(x) + gamma_);
}

double Distortion::dual(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("distortion argument outside [0,1]");
    if (gamma_ == 0.0) return x;
    return 1.0 - (*this)(1.0 - x);
}

double distort(const Distortion& d, double x) { return d(x); }
double dual_distort(const Distortion& d, double x) { return d.dual(x); }

} // namespace conic
