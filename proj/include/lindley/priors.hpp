#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lindley/model.hpp"

namespace lindley {

/// Limit behaviour of m(σ) as σ → ∞.
///   Vanishing  m → 0      P(H₀|x) → 1 for every x (the Lindley paradox)
///   Finite     m → c      P(H₀|x) bounded away from 0 although ρ₀ → 0
///   Divergent  m → ∞      P(H₀|x) → 0
struct Regime {
    enum class Kind { Vanishing, Finite, Divergent };

    Kind kind = Kind::Vanishing;
    double limit = 0.0;  // only meaningful for Finite

    static Regime vanishing() { return {Kind::Vanishing, 0.0}; }
    static Regime finite(double c) { return {Kind::Finite, c}; }
    static Regime divergent() { return {Kind::Divergent, 0.0}; }

    /// "i", "ii" or "iii".
    std::string case_label() const;
    std::string name() const;

    bool operator==(const Regime&) const = default;
};

namespace scheme {

struct Fixed {
    double rho0;
};

/// ρ₀(σ) = 1 / (1 + √(2π)σ).
struct Robert {};

/// ρ₀(σ) = 1 / (1 + exp(σ²/2)): the self-information of the alternative equals
/// its expected KL loss σ²/2.
struct KLSelfInformation {};

/// Tabulated (σ, ρ₀) pairs, linearly interpolated, never extrapolated.
struct CustomTable {
    std::vector<std::pair<double, double>> rows;
    std::string source;
};

}  // namespace scheme

class PriorScheme {
public:
    using Variant =
        std::variant<scheme::Fixed, scheme::Robert, scheme::KLSelfInformation, scheme::CustomTable>;

    static PriorScheme fixed(double rho0);
    static PriorScheme robert();
    static PriorScheme kl();
    static PriorScheme table(std::vector<std::pair<double, double>> rows,
                             std::string source = "inline");

    /// Parses fixed:<rho0> | robert | kl | table:<path>.
    static PriorScheme parse(std::string_view spelling);

    const Variant& variant() const noexcept { return variant_; }

    /// CLI spelling of the scheme.
    std::string name() const;

    /// Analytic regime; empty for tables.
    std::optional<Regime> declared_regime() const;

    bool is_table() const noexcept { return std::holds_alternative<scheme::CustomTable>(variant_); }

private:
    explicit PriorScheme(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

/// Numeric corroboration of a declared regime.
struct RegimeEvidence {
    Regime regime;
    double sigma_mid = 1e3;
    double sigma_far = 1e6;
    double m_mid = 0.0;      // may be +inf for Divergent
    double m_far = 0.0;
    double log_m_mid = 0.0;
    double log_m_far = 0.0;
    double sigma_times_m_far = 0.0;
};

struct ParadoxRow {
    double sigma;
    double rho0;
    double m;
    double posterior_h0;
};

namespace priors {

double rho0(const PriorScheme& scheme, double sigma);

/// m(σ) = (1−ρ₀(σ))/ρ₀(σ) · 1/√(1+σ²).
double m_of_sigma(const PriorScheme& scheme, double sigma);

/// log m(σ), finite far beyond the point where m itself overflows.
double log_m_of_sigma(const PriorScheme& scheme, double sigma);

/// Declared regime plus evidence at σ = 10³ and 10⁶. Throws UnsupportedSchemeError
/// for tables and ConsistencyError if the evidence contradicts the declaration.
RegimeEvidence classify_regime(const PriorScheme& scheme);

/// One row per σ (grid strictly increasing and positive).
std::vector<ParadoxRow> paradox_sweep(const PriorScheme& scheme, double x,
                                      const std::vector<double>& sigma_grid);

/// B₀₁, ρ₀, m, P(H₀|x) and the decision P(H₀|x) < α_B.
PosteriorReport posterior_report(const Observation& obs, const AlternativeSpread& spread,
                                 const PriorScheme& scheme, double alpha_b);

/// Reads a two-column CSV (header row, then σ,ρ₀ lines).
std::vector<std::pair<double, double>> read_table_csv(const std::string& path);

}  // namespace priors
}  // namespace lindley
