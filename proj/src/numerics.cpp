#include "lindley/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "lindley/error.hpp"

namespace lindley::numerics {

namespace {

void require_finite(double z, const char* what) {
    if (!std::isfinite(z)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

// Cody, "Rational Chebyshev approximations for the error function" (1969).
// Returns erfc(y) for y >= 0.
double cody_erfc(double y) {
    static constexpr std::array<double, 5> a = {3.1611237438705656, 113.864154151050156,
                                                377.485237685302021, 3209.37758913846947,
                                                .185777706184603153};
    static constexpr std::array<double, 4> b = {23.6012909523441209, 244.024637934444173,
                                                1282.61652607737228, 2844.23683343917062};
    static constexpr std::array<double, 9> c = {
        .564188496988670089, 8.88314979438837594, 66.1191906371416295,
        298.635138197400131, 881.95222124176909,  1712.04761263407058,
        2051.07837782607147, 1230.33935479799725, 2.15311535474403846e-8};
    static constexpr std::array<double, 8> d = {
        15.7449261107098347, 117.693950891312499, 537.181101862009858, 1621.38957456669019,
        3290.79923573345963, 4362.61909014324716, 3439.36767414372164, 1230.33935480374942};
    static constexpr std::array<double, 6> p = {.305326634961232344,  .360344899949804439,
                                                .125781726111229246,  .0160837851487422766,
                                                6.58749161529837803e-4, .0163153871373020978};
    static constexpr std::array<double, 5> q = {2.56852019228982242, 1.87295284992346047,
                                                .527905102951428412, .0605183413124413191,
                                                .00233520497626869185};
    constexpr double sqrpi = 0.56418958354775628695;  // 1/sqrt(pi)
    constexpr double xsmall = 1.11e-16;
    constexpr double xbig = 26.543;

    // exp(-y^2) with y^2 split so the large part is exact.
    auto gauss_factor = [](double v) {
        const double head = std::trunc(v * 16.0) / 16.0;
        const double del = (v - head) * (v + head);
        return std::exp(-head * head) * std::exp(-del);
    };

    if (y <= 0.46875) {
        const double ysq = y > xsmall ? y * y : 0.0;
        double xnum = a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * ysq;
            xden = (xden + b[i]) * ysq;
        }
        return 1.0 - y * (xnum + a[3]) / (xden + b[3]);
    }
    if (y <= 4.0) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        return gauss_factor(y) * (xnum + c[7]) / (xden + d[7]);
    }
    if (y >= xbig) {
        return 0.0;
    }
    const double ysq = 1.0 / (y * y);
    double xnum = p[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
        xnum = (xnum + p[i]) * ysq;
        xden = (xden + q[i]) * ysq;
    }
    const double r = ysq * (xnum + p[4]) / (xden + q[4]);
    return gauss_factor(y) * (sqrpi - r) / y;
}

// Lower-tail probability Φ(-t) for t >= 0.
double lower_tail(double t) { return 0.5 * cody_erfc(t / std::numbers::sqrt2); }

// Acklam's rational approximation to Φ⁻¹(p) for p in (0, 0.5]; relative error ~1e-9.
double acklam_lower(double p) {
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const RealFunction& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    auto eval = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw DomainError("integrate_adaptive: integrand is not finite at x=" +
                              std::to_string(x));
        }
        return y;
    };

    const double fc = eval(center);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = eval(center - dx) + eval(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * sum;
        }
    }
    return Panel{lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Bracket::Bracket(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw DomainError("Bracket: requires finite lo < hi");
    }
}

double std_normal_pdf(double z) {
    require_finite(z, "std_normal_pdf");
    return std::numbers::inv_sqrtpi / std::numbers::sqrt2 * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) {
    require_finite(z, "std_normal_cdf");
    return z < 0.0 ? lower_tail(-z) : 1.0 - lower_tail(z);
}

double std_normal_sf(double z) {
    require_finite(z, "std_normal_sf");
    return z > 0.0 ? lower_tail(z) : 1.0 - lower_tail(-z);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("std_normal_quantile: p must lie in (0, 1)");
    }
    if (p == 0.5) {
        return 0.0;
    }
    // Work in the lower tail, where Φ is accurate relative to p. 1 - p is exact for p >= 0.5.
    const bool upper = p > 0.5;
    const double tail = upper ? 1.0 - p : p;

    double x = acklam_lower(tail);
    for (int iter = 0; iter < 2; ++iter) {
        const double e = lower_tail(-x) - tail;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return upper ? -x : x;
}

QuadratureResult integrate_adaptive(const RealFunction& f, const Bracket& bracket, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("integrate_adaptive: tol must be positive");
    }

    std::vector<Panel> storage;
    storage.reserve(64);
    std::priority_queue<Panel> panels(std::less<Panel>{}, std::move(storage));

    Panel first = gauss_kronrod(f, bracket.lo, bracket.hi);
    double total = first.value;
    double error = first.error;
    panels.push(first);

    auto resum = [&] {
        auto copy = panels;
        total = 0.0;
        error = 0.0;
        while (!copy.empty()) {
            total += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    };

    for (;;) {
        if (error <= tol) {
            // Running sums drift; confirm against an exact re-summation.
            resum();
            if (error <= tol) {
                break;
            }
        }
        if (panels.size() >= kMaxPanels) {
            throw AccuracyError("integrate_adaptive: panel cap reached before tolerance", total,
                                error);
        }
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi)) {
            resum();
            throw AccuracyError("integrate_adaptive: panel cannot be subdivided further", total,
                                error);
        }
        panels.pop();
        const Panel left = gauss_kronrod(f, worst.lo, mid);
        const Panel right = gauss_kronrod(f, mid, worst.hi);
        panels.push(left);
        panels.push(right);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
    }

    return QuadratureResult{total, std::max(error, 0.0), panels.size()};
}

RootResult find_root_bracketed(const RealFunction& f, const Bracket& bracket, double xtol,
                               double ftol) {
    if (!(xtol > 0.0 && ftol > 0.0)) {
        throw DomainError("find_root_bracketed: xtol and ftol must be positive");
    }

    std::size_t evaluations = 0;
    auto eval = [&](double x) {
        ++evaluations;
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw EvaluationError("find_root_bracketed: objective is not finite at x=" +
                                  std::to_string(x));
        }
        return y;
    };

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = eval(a);
    double fb = eval(b);
    if (std::abs(fa) <= ftol) {
        return RootResult{a, fa, evaluations};
    }
    if (std::abs(fb) <= ftol) {
        return RootResult{b, fb, evaluations};
    }
    if (std::signbit(fa) == std::signbit(fb)) {
        throw BracketError("find_root_bracketed: f(lo) and f(hi) have the same sign");
    }

    // Brent's zeroin: b is the best estimate, c the opposite end of the enclosing interval.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;

    for (;;) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || std::abs(fb) <= ftol) {
            return RootResult{b, fb, evaluations};
        }

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, m);
        b = std::clamp(b, bracket.lo, bracket.hi);
        fb = eval(b);
    }
}

}  // namespace lindley::numerics
