#pragma once

#include <cstddef>
#include <functional>

namespace lindley::numerics {

using RealFunction = std::function<double(double)>;

/// Closed interval [lo, hi] with lo < hi.
struct Bracket {
    double lo;
    double hi;

    Bracket(double lo_, double hi_);

    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t subdivisions = 1;
};

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    std::size_t evaluations = 0;
};

inline constexpr std::size_t kMaxPanels = 1'000'000;

double std_normal_pdf(double z);

/// Φ(z). Cody's rational Chebyshev erfc, evaluated on whichever tail keeps
/// the result free of cancellation.
double std_normal_cdf(double z);

/// 1 − Φ(z) without cancellation.
double std_normal_sf(double z);

/// Φ⁻¹(p): Acklam's rational guess followed by Halley corrections against Φ.
double std_normal_quantile(double p);

/// Adaptive Gauss–Kronrod (7/15) quadrature with global bisection of the
/// worst panel. Stops once the summed error estimate is ≤ tol; throws
/// AccuracyError carrying the best estimate if kMaxPanels is reached first.
QuadratureResult integrate_adaptive(const RealFunction& f, const Bracket& bracket, double tol);

/// Brent's method. Every evaluation point lies inside the bracket.
/// Stops when |f(x)| ≤ ftol or the enclosing interval is no wider than xtol.
RootResult find_root_bracketed(const RealFunction& f, const Bracket& bracket, double xtol,
                               double ftol);

}  // namespace lindley::numerics
