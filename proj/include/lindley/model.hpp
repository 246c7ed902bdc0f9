#pragma once

#include <string>

namespace lindley {

/// A single draw x ~ N(θ, 1).
class Observation {
public:
    explicit Observation(double x);
    double value() const noexcept { return x_; }

private:
    double x_;
};

/// Prior standard deviation σ of θ under the alternative, θ ~ N(0, σ²).
/// Always finite and positive: an infinitely diffuse alternative is not representable.
class AlternativeSpread {
public:
    explicit AlternativeSpread(double sigma);
    double value() const noexcept { return sigma_; }

private:
    double sigma_;
};

/// Full evaluation of one point-null test.
struct PosteriorReport {
    double x = 0.0;
    double sigma = 0.0;
    std::string scheme;
    double rho0 = 0.0;
    double bayes_factor = 0.0;
    double m_value = 0.0;
    double log_m = 0.0;
    double posterior_h0 = 0.0;
    double alpha_b = 0.0;
    bool rejected = false;
};

namespace model {

/// B₀₁ = √(1+σ²) · exp(−x²σ² / (2(1+σ²))).
double bayes_factor(const Observation& obs, const AlternativeSpread& spread);
double log_bayes_factor(const Observation& obs, const AlternativeSpread& spread);

/// Marginal density of x under the alternative: N(x | 0, 1+σ²).
double marginal_alt(const Observation& obs, const AlternativeSpread& spread);

/// The exponent ½x²σ²/(1+σ²) shared by the posterior and the rejection threshold.
double posterior_exponent(const Observation& obs, const AlternativeSpread& spread);

/// P(H₀|x) for a prior null mass rho0 in (0, 1).
double posterior_h0(const Observation& obs, const AlternativeSpread& spread, double rho0);

/// P(H₀|x) = 1 / (1 + exp(log_m + ½x²σ²/(1+σ²))), evaluated without overflow.
/// Saturates to 0 or 1 instead of producing NaN.
double posterior_h0_from_log_m(const Observation& obs, const AlternativeSpread& spread,
                               double log_m);

/// D_KL(N(θ,1) ‖ N(0,1)) = θ²/2.
double kl_null_vs_alt(double theta);

/// E_π[D_KL] under θ ~ N(0, σ²), i.e. σ²/2.
double expected_kl(const AlternativeSpread& spread);

}  // namespace model
}  // namespace lindley
