#pragma once

#include "conic/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace conic {
namespace root {

struct Options {
    double f_tol = 1e-12; // absolute, on the function value
    double x_tol = 1e-10; // absolute, on the bracket width
    int max_iter = 200;
};

/// Root of f on [lo, hi] given already-evaluated endpoint values.
///
/// Secant steps through the current bracket, falling back to bisection when
/// the step leaves the interval or the bracket stops shrinking. Requires a
/// sign change (an endpoint within f_tol counts as the root). Throws
/// SolverError when the bracket is invalid or the iteration budget runs out.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double flo, double fhi,
                       const Options& opt = {}) {
    if (std::abs(flo) <= opt.f_tol) return lo;
    if (std::abs(fhi) <= opt.f_tol) return hi;
    if (!(lo < hi)) throw SolverError("root bracket is empty [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
    if ((flo > 0.0) == (fhi > 0.0))
        throw SolverError("no sign change over bracket: f(" + std::to_string(lo) + ") = " +
                          std::to_string(flo) + ", f(" + std::to_string(hi) + ") = " +
                          std::to_string(fhi));

    double a = lo, b = hi, fa = flo, fb = fhi;
    int stall = 0; // consecutive iterations without halving the bracket
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        const double width = b - a;
        if (width <= opt.x_tol) return std::abs(fa) < std::abs(fb) ? a : b;

        double x = b - fb * (b - a) / (fb - fa);
        if (!(x > a && x < b) || stall >= 2) {
            x = a + 0.5 * width;
            stall = 0;
        }
        const double fx = f(x);
        if (std::abs(fx) <= opt.f_tol) return x;
        if ((fx > 0.0) == (fa > 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        stall = (b - a > 0.5 * width) ? stall + 1 : 0;
    }
    throw SolverError("root finder failed to converge in " + std::to_string(opt.max_iter) +
                      " iterations (bracket [" + std::to_string(a) + ", " + std::to_string(b) +
                      "])");
}

template <class F>
double solve_bracketed(F&& f, double lo, double hi, const Options& opt = {}) {
    const double flo = f(lo);
    const double fhi = f(hi);
    return solve_bracketed(std::forward<F>(f), lo, hi, flo, fhi, opt);
}

} // namespace root
} // namespace conic
