#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include "lindley/model.hpp"
#include "lindley/numerics.hpp"
#include "lindley/priors.hpp"

namespace lindley {

/// Target classical Type I error α, Bayesian rejection threshold α_B on P(H₀|x),
/// and the model prior.
struct CalibrationSpec {
    double alpha;
    double alpha_b;
    PriorScheme scheme;

    CalibrationSpec(double alpha_, double alpha_b_, PriorScheme scheme_);
};

struct CalibrationResult {
    double sigma_star = 0.0;
    double psi_at_sigma = 0.0;
    double achieved_alpha = 0.0;
    double residual = 0.0;  // achieved_alpha − alpha
    numerics::Bracket bracket_used{0.0, 1.0};
    std::size_t evaluations = 0;
};

/// Range of σ on which ψ(σ) > 0, i.e. m(σ) < α_B⁻¹ − 1. Either end may be open
/// (lo = 0, hi = +inf); `empty` means the Bayesian test rejects for every x at every σ.
struct PsiDomain {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool empty = false;

    bool contains(double sigma) const noexcept { return !empty && lo < sigma && sigma < hi; }
};

struct Decision {
    bool reject = false;
    bool via_posterior = false;
    bool via_threshold = false;
    double posterior_h0 = 0.0;
    std::optional<double> psi;  // empty outside the positivity domain
};

namespace calibration {

/// ψ(σ) = 2(1+σ²)/σ² · (log(α_B⁻¹−1) − log m(σ)).
/// Throws DomainError where ψ ≤ 0 (the Bayesian test rejects for all x).
double psi(double sigma, double alpha_b, const PriorScheme& scheme);

/// True when ψ(σ) > 0.
bool psi_defined(double sigma, double alpha_b, const PriorScheme& scheme);

/// P₀(x² > ψ(σ)) = 2[1 − Φ(√ψ)]; exactly 1 where ψ is undefined.
double type_i_error(double sigma, double alpha_b, const PriorScheme& scheme);

/// Solves type_i_error(σ) = α. Throws InfeasibleError with the achievable α range
/// when the scanned domain holds no sign change.
CalibrationResult solve_sigma(const CalibrationSpec& spec);

PsiDomain psi_domain(double alpha_b, const PriorScheme& scheme);

/// The σ > 0 at which m(σ) = α_B⁻¹ − 1, if m ever crosses that level.
/// For the KL and Robert priors this is the upper end of ψ's domain; for a Fixed
/// prior with ρ₀ < α_B it is the lower end.
std::optional<double> positivity_bound(double alpha_b, const PriorScheme& scheme);

/// c_α with P₀(x² > c_α) = α.
double classical_threshold(double alpha);

/// Rejection decision computed through P(H₀|x) < α_B and through x² > ψ(σ).
/// Throws ConsistencyError if they disagree away from |P(H₀|x) − α_B| < 1e-12.
Decision decide(const Observation& obs, double sigma, double alpha_b, const PriorScheme& scheme);

/// P_θ(x² > ψ(σ)) for x ~ N(θ, 1).
double power_analytic(double theta, double sigma, double alpha_b, const PriorScheme& scheme);

inline constexpr double kDecisionBand = 1e-12;

/// The decision rule with every σ-dependent quantity precomputed, for repeated use.
class DecisionRule {
public:
    DecisionRule(double sigma, double alpha_b, const PriorScheme& scheme);

    Decision decide(double x) const;

    double sigma() const noexcept { return spread_.value(); }
    double alpha_b() const noexcept { return alpha_b_; }
    double log_m() const noexcept { return log_m_; }
    const std::optional<double>& psi() const noexcept { return psi_; }

private:
    AlternativeSpread spread_;
    double alpha_b_;
    double log_m_;
    std::optional<double> psi_;
};

}  // namespace calibration
}  // namespace lindley
