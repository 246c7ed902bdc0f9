#include "lindley/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "lindley/error.hpp"

namespace lindley {

namespace {

void require_probability(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0, 1)");
    }
}

// log(α_B⁻¹ − 1), the level log m(σ) must stay below for ψ > 0.
double log_threshold_odds(double alpha_b) {
    require_probability(alpha_b, "alpha_b");
    return std::log1p(-alpha_b) - std::log(alpha_b);
}

double psi_from_margin(double sigma, double margin) {
    return 2.0 * (1.0 + 1.0 / (sigma * sigma)) * margin;
}

// Solves log m(σ) = level for σ when log m is increasing, starting from a point below.
double increasing_crossing(const PriorScheme& scheme, double level) {
    auto f = [&](double s) { return priors::log_m_of_sigma(scheme, s) - level; };
    double lo = 1e-3;
    while (f(lo) >= 0.0) {
        lo *= 0.5;
    }
    double hi = 1.0;
    while (f(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    return numerics::find_root_bracketed(f, numerics::Bracket(lo, hi),
                                         std::numeric_limits<double>::min(), 1e-14)
        .root;
}

}  // namespace

CalibrationSpec::CalibrationSpec(double alpha_, double alpha_b_, PriorScheme scheme_)
    : alpha(alpha_), alpha_b(alpha_b_), scheme(std::move(scheme_)) {
    require_probability(alpha, "alpha");
    require_probability(alpha_b, "alpha_b");
}

namespace calibration {

bool psi_defined(double sigma, double alpha_b, const PriorScheme& scheme) {
    return log_threshold_odds(alpha_b) - priors::log_m_of_sigma(scheme, sigma) > 0.0;
}

double psi(double sigma, double alpha_b, const PriorScheme& scheme) {
    const double margin = log_threshold_odds(alpha_b) - priors::log_m_of_sigma(scheme, sigma);
    if (!(margin > 0.0)) {
        std::ostringstream msg;
        msg << "psi nonpositive: Bayesian test rejects for all x (sigma=" << sigma
            << ", m(sigma) >= 1/alpha_b - 1)";
        throw DomainError(msg.str());
    }
    return psi_from_margin(sigma, margin);
}

double type_i_error(double sigma, double alpha_b, const PriorScheme& scheme) {
    const double margin = log_threshold_odds(alpha_b) - priors::log_m_of_sigma(scheme, sigma);
    if (!(margin > 0.0)) {
        return 1.0;
    }
    return 2.0 * numerics::std_normal_sf(std::sqrt(psi_from_margin(sigma, margin)));
}

PsiDomain psi_domain(double alpha_b, const PriorScheme& scheme) {
    const double level = log_threshold_odds(alpha_b);
    PsiDomain domain;

    if (std::holds_alternative<scheme::KLSelfInformation>(scheme.variant())) {
        // log m rises from 0 at σ → 0.
        if (level <= 0.0) {
            domain.empty = true;
        } else {
            domain.hi = increasing_crossing(scheme, level);
        }
    } else if (std::holds_alternative<scheme::Robert>(scheme.variant())) {
        // log m rises from −∞ towards log √(2π).
        const double sup = std::log(scheme.declared_regime()->limit);
        if (level < sup) {
            domain.hi = increasing_crossing(scheme, level);
        }
    } else if (const auto* f = std::get_if<scheme::Fixed>(&scheme.variant())) {
        // log m falls from log((1−ρ₀)/ρ₀) towards −∞.
        const double odds = std::log1p(-f->rho0) - std::log(f->rho0);
        if (odds > level) {
            domain.lo = std::sqrt(std::expm1(2.0 * (odds - level)));
        }
    } else {
        throw UnsupportedSchemeError("psi domain is only derived for built-in schemes");
    }
    return domain;
}

std::optional<double> positivity_bound(double alpha_b, const PriorScheme& scheme) {
    const auto domain = psi_domain(alpha_b, scheme);
    if (domain.empty) {
        return std::nullopt;
    }
    if (std::isfinite(domain.hi)) {
        return domain.hi;
    }
    if (domain.lo > 0.0) {
        return domain.lo;
    }
    return std::nullopt;
}

CalibrationResult solve_sigma(const CalibrationSpec& spec) {
    const auto& scheme = spec.scheme;
    std::size_t evaluations = 0;
    auto g = [&](double sigma) {
        ++evaluations;
        return type_i_error(sigma, spec.alpha_b, scheme) - spec.alpha;
    };

    // Geometric scan over 10^-3 … 10^3, eight points per decade, clipped to ψ's domain.
    double scan_lo = 1e-3;
    double scan_hi = 1e3;
    std::vector<double> grid;
    if (const auto* table = std::get_if<scheme::CustomTable>(&scheme.variant())) {
        scan_lo = std::max(scan_lo, table->rows.front().first);
        scan_hi = std::min(scan_hi, table->rows.back().first);
    } else {
        const auto domain = psi_domain(spec.alpha_b, scheme);
        if (domain.empty) {
            throw InfeasibleError(
                "no sigma gives the requested alpha: the Bayesian test rejects for every x "
                "at every sigma (achievable alpha = 1)",
                1.0, 1.0);
        }
        if (domain.lo > scan_lo) {
            scan_lo = domain.lo;
        }
        if (domain.hi < scan_hi) {
            scan_hi = domain.hi;
        }
    }
    if (!(scan_lo < scan_hi)) {
        throw InfeasibleError("no sigma gives the requested alpha: empty search range", 1.0, 1.0);
    }
    grid.push_back(scan_lo);
    for (int k = 0; k <= 48; ++k) {
        const double s = std::pow(10.0, -3.0 + k / 8.0);
        if (s > scan_lo && s < scan_hi) {
            grid.push_back(s);
        }
    }
    grid.push_back(scan_hi);

    std::vector<double> values;
    values.reserve(grid.size());
    double min_alpha = 1.0;
    double max_alpha = 0.0;
    for (double s : grid) {
        values.push_back(g(s));
        min_alpha = std::min(min_alpha, values.back() + spec.alpha);
        max_alpha = std::max(max_alpha, values.back() + spec.alpha);
    }

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const bool crosses = (values[i] <= 0.0 && values[i + 1] >= 0.0) ||
                             (values[i] >= 0.0 && values[i + 1] <= 0.0);
        if (!crosses) {
            continue;
        }
        const numerics::Bracket bracket(grid[i], grid[i + 1]);
        const auto root = numerics::find_root_bracketed(
            g, bracket, std::numeric_limits<double>::min(), 1e-13);

        CalibrationResult result{.sigma_star = root.root,
                                 .psi_at_sigma = psi(root.root, spec.alpha_b, scheme),
                                 .achieved_alpha = type_i_error(root.root, spec.alpha_b, scheme),
                                 .residual = 0.0,
                                 .bracket_used = bracket,
                                 .evaluations = evaluations};
        result.residual = result.achieved_alpha - spec.alpha;
        return result;
    }

    std::ostringstream msg;
    msg.precision(6);
    msg << "no sigma gives alpha=" << spec.alpha << " under scheme " << scheme.name()
        << " with alpha_b=" << spec.alpha_b << "; achievable alpha lies in [" << min_alpha
        << ", " << max_alpha << "]";
    if (spec.alpha > max_alpha) {
        msg << " (maximum achievable " << max_alpha << ")";
    } else {
        msg << " (minimum achievable " << min_alpha << ")";
    }
    throw InfeasibleError(msg.str(), min_alpha, max_alpha);
}

double classical_threshold(double alpha) {
    require_probability(alpha, "alpha");
    const double z = -numerics::std_normal_quantile(0.5 * alpha);
    return z * z;
}

DecisionRule::DecisionRule(double sigma, double alpha_b, const PriorScheme& scheme)
    : spread_(sigma), alpha_b_(alpha_b), log_m_(priors::log_m_of_sigma(scheme, sigma)) {
    const double margin = log_threshold_odds(alpha_b) - log_m_;
    if (margin > 0.0) {
        psi_ = psi_from_margin(sigma, margin);
    }
}

Decision DecisionRule::decide(double x) const {
    const Observation obs(x);
    Decision d;
    d.psi = psi_;
    d.posterior_h0 = model::posterior_h0_from_log_m(obs, spread_, log_m_);
    d.via_posterior = d.posterior_h0 < alpha_b_;
    d.via_threshold = !psi_ || x * x > *psi_;
    if (d.via_posterior != d.via_threshold &&
        std::abs(d.posterior_h0 - alpha_b_) >= kDecisionBand) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "decision routes disagree at x=" << x << ", sigma=" << sigma()
            << ": P(H0|x)=" << d.posterior_h0 << ", alpha_b=" << alpha_b_;
        throw ConsistencyError(msg.str());
    }
    d.reject = d.via_posterior;
    return d;
}

Decision decide(const Observation& obs, double sigma, double alpha_b, const PriorScheme& scheme) {
    return DecisionRule(sigma, alpha_b, scheme).decide(obs.value());
}

double power_analytic(double theta, double sigma, double alpha_b, const PriorScheme& scheme) {
    if (!std::isfinite(theta)) {
        throw DomainError("power_analytic: theta must be finite");
    }
    const DecisionRule rule(sigma, alpha_b, scheme);
    if (!rule.psi()) {
        return 1.0;
    }
    const double root = std::sqrt(*rule.psi());
    return numerics::std_normal_sf(root - theta) + numerics::std_normal_cdf(-root - theta);
}

}  // namespace calibration
}  // namespace lindley
