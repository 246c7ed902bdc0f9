#include "lindley/model.hpp"

#include <cmath>
#include <numbers>

#include "lindley/error.hpp"
#include "lindley/numerics.hpp"

namespace lindley {

Observation::Observation(double x) : x_(x) {
    if (!std::isfinite(x)) {
        throw DomainError("observation x must be finite");
    }
}

AlternativeSpread::AlternativeSpread(double sigma) : sigma_(sigma) {
    if (!(std::isfinite(sigma) && sigma > 0.0)) {
        throw DomainError("sigma must be finite and positive");
    }
}

namespace model {

double posterior_exponent(const Observation& obs, const AlternativeSpread& spread) {
    const double x = obs.value();
    const double s = spread.value();
    // σ²/(1+σ²) written as 1/(1+σ⁻²) so σ² never overflows.
    const double shrink = 1.0 / (1.0 + 1.0 / (s * s));
    return 0.5 * x * x * shrink;
}

double log_bayes_factor(const Observation& obs, const AlternativeSpread& spread) {
    const double s = spread.value();
    return 0.5 * std::log1p(s * s) - posterior_exponent(obs, spread);
}

double bayes_factor(const Observation& obs, const AlternativeSpread& spread) {
    return std::hypot(1.0, spread.value()) * std::exp(-posterior_exponent(obs, spread));
}

double marginal_alt(const Observation& obs, const AlternativeSpread& spread) {
    const double scale = std::hypot(1.0, spread.value());
    const double z = obs.value() / scale;
    return numerics::std_normal_pdf(z) / scale;
}

double posterior_h0_from_log_m(const Observation& obs, const AlternativeSpread& spread,
                               double log_m) {
    if (std::isnan(log_m)) {
        throw DomainError("posterior_h0: log m is NaN");
    }
    const double t = log_m + posterior_exponent(obs, spread);
    if (t > 0.0) {
        const double r = std::exp(-t);
        return r / (1.0 + r);
    }
    return 1.0 / (1.0 + std::exp(t));
}

double posterior_h0(const Observation& obs, const AlternativeSpread& spread, double rho0) {
    if (!(rho0 > 0.0 && rho0 < 1.0)) {
        throw DomainError("posterior_h0: rho0 must lie in (0, 1)");
    }
    const double s = spread.value();
    const double log_m = std::log1p(-rho0) - std::log(rho0) - 0.5 * std::log1p(s * s);
    return posterior_h0_from_log_m(obs, spread, log_m);
}

double kl_null_vs_alt(double theta) {
    if (!std::isfinite(theta)) {
        throw DomainError("kl_null_vs_alt: theta must be finite");
    }
    return 0.5 * theta * theta;
}

double expected_kl(const AlternativeSpread& spread) {
    return 0.5 * spread.value() * spread.value();
}

}  // namespace model
}  // namespace lindley
