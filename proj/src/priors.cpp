#include "lindley/priors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lindley/error.hpp"
#include "lindley/text.hpp"

namespace lindley {

namespace {

constexpr double kSqrt2Pi = std::numbers::sqrt2 / std::numbers::inv_sqrtpi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_sigma(double sigma) {
    if (!(std::isfinite(sigma) && sigma > 0.0)) {
        throw DomainError("sigma must be finite and positive");
    }
}

double interpolate(const scheme::CustomTable& table, double sigma) {
    const auto& rows = table.rows;
    if (sigma < rows.front().first || sigma > rows.back().first) {
        std::ostringstream msg;
        msg << "table prior: sigma=" << sigma << " outside tabulated range ["
            << rows.front().first << ", " << rows.back().first << "]";
        throw RangeError(msg.str());
    }
    auto hi = std::lower_bound(rows.begin(), rows.end(), sigma,
                               [](const auto& row, double s) { return row.first < s; });
    if (hi->first == sigma) {
        return hi->second;
    }
    auto lo = std::prev(hi);
    const double w = (sigma - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

// log((1−ρ₀)/ρ₀), the prior log-odds against the null.
double log_prior_odds(const PriorScheme& scheme, double sigma) {
    return std::visit(
        overloaded{
            [](const scheme::Fixed& f) { return std::log1p(-f.rho0) - std::log(f.rho0); },
            [&](const scheme::Robert&) { return std::log(kSqrt2Pi * sigma); },
            [&](const scheme::KLSelfInformation&) { return 0.5 * sigma * sigma; },
            [&](const scheme::CustomTable& t) {
                const double r = interpolate(t, sigma);
                return std::log1p(-r) - std::log(r);
            },
        },
        scheme.variant());
}

}  // namespace

std::string Regime::case_label() const {
    switch (kind) {
        case Kind::Vanishing: return "i";
        case Kind::Finite: return "ii";
        case Kind::Divergent: return "iii";
    }
    return "?";
}

std::string Regime::name() const {
    switch (kind) {
        case Kind::Vanishing: return "Vanishing";
        case Kind::Finite: return "Finite";
        case Kind::Divergent: return "Divergent";
    }
    return "?";
}

PriorScheme PriorScheme::fixed(double rho0) {
    if (!(rho0 > 0.0 && rho0 < 1.0)) {
        throw DomainError("fixed prior: rho0 must lie in (0, 1)");
    }
    return PriorScheme(scheme::Fixed{rho0});
}

PriorScheme PriorScheme::robert() { return PriorScheme(scheme::Robert{}); }

PriorScheme PriorScheme::kl() { return PriorScheme(scheme::KLSelfInformation{}); }

PriorScheme PriorScheme::table(std::vector<std::pair<double, double>> rows, std::string source) {
    if (rows.size() < 2) {
        throw DomainError("table prior: need at least two rows");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [sigma, rho0] = rows[i];
        if (!(std::isfinite(sigma) && sigma > 0.0)) {
            throw DomainError("table prior: sigma values must be finite and positive");
        }
        if (!(rho0 > 0.0 && rho0 < 1.0)) {
            throw DomainError("table prior: rho0 values must lie in (0, 1)");
        }
        if (i > 0 && !(rows[i - 1].first < sigma)) {
            throw DomainError("table prior: sigma column must be strictly increasing");
        }
    }
    return PriorScheme(scheme::CustomTable{std::move(rows), std::move(source)});
}

PriorScheme PriorScheme::parse(std::string_view spelling) {
    if (spelling == "robert") {
        return robert();
    }
    if (spelling == "kl") {
        return kl();
    }
    if (spelling.starts_with("fixed:")) {
        const auto value = text::parse_double(spelling.substr(6));
        if (!value) {
            throw DomainError("scheme: cannot parse rho0 in '" + std::string(spelling) + "'");
        }
        return fixed(*value);
    }
    if (spelling.starts_with("table:")) {
        const std::string path(spelling.substr(6));
        return table(priors::read_table_csv(path), path);
    }
    throw DomainError("scheme: expected fixed:<rho0>, robert, kl or table:<path>, got '" +
                      std::string(spelling) + "'");
}

std::string PriorScheme::name() const {
    return std::visit(overloaded{
                          [](const scheme::Fixed& f) { return "fixed:" + text::format_real(f.rho0); },
                          [](const scheme::Robert&) { return std::string("robert"); },
                          [](const scheme::KLSelfInformation&) { return std::string("kl"); },
                          [](const scheme::CustomTable& t) { return "table:" + t.source; },
                      },
                      variant_);
}

std::optional<Regime> PriorScheme::declared_regime() const {
    return std::visit(overloaded{
                          [](const scheme::Fixed&) -> std::optional<Regime> {
                              return Regime::vanishing();
                          },
                          [](const scheme::Robert&) -> std::optional<Regime> {
                              return Regime::finite(kSqrt2Pi);
                          },
                          [](const scheme::KLSelfInformation&) -> std::optional<Regime> {
                              return Regime::divergent();
                          },
                          [](const scheme::CustomTable&) -> std::optional<Regime> {
                              return std::nullopt;
                          },
                      },
                      variant_);
}

namespace priors {

double rho0(const PriorScheme& scheme, double sigma) {
    require_sigma(sigma);
    return std::visit(overloaded{
                          [](const scheme::Fixed& f) { return f.rho0; },
                          [&](const scheme::Robert&) { return 1.0 / (1.0 + kSqrt2Pi * sigma); },
                          [&](const scheme::KLSelfInformation&) {
                              return 1.0 / (1.0 + std::exp(0.5 * sigma * sigma));
                          },
                          [&](const scheme::CustomTable& t) { return interpolate(t, sigma); },
                      },
                      scheme.variant());
}

double m_of_sigma(const PriorScheme& scheme, double sigma) {
    require_sigma(sigma);
    const double scale = std::hypot(1.0, sigma);
    return std::visit(overloaded{
                          [&](const scheme::Fixed& f) { return (1.0 - f.rho0) / f.rho0 / scale; },
                          [&](const scheme::Robert&) { return kSqrt2Pi * (sigma / scale); },
                          [&](const scheme::KLSelfInformation&) {
                              return std::exp(log_m_of_sigma(scheme, sigma));
                          },
                          [&](const scheme::CustomTable& t) {
                              const double r = interpolate(t, sigma);
                              return (1.0 - r) / r / scale;
                          },
                      },
                      scheme.variant());
}

double log_m_of_sigma(const PriorScheme& scheme, double sigma) {
    require_sigma(sigma);
    return log_prior_odds(scheme, sigma) - 0.5 * std::log1p(sigma * sigma);
}

RegimeEvidence classify_regime(const PriorScheme& scheme) {
    const auto declared = scheme.declared_regime();
    if (!declared) {
        throw UnsupportedSchemeError(
            "regime classification is undefined for tabulated priors (finite table, no limit)");
    }

    RegimeEvidence ev;
    ev.regime = *declared;
    ev.log_m_mid = log_m_of_sigma(scheme, ev.sigma_mid);
    ev.log_m_far = log_m_of_sigma(scheme, ev.sigma_far);
    ev.m_mid = std::exp(ev.log_m_mid);
    ev.m_far = std::exp(ev.log_m_far);
    ev.sigma_times_m_far = std::exp(std::log(ev.sigma_far) + ev.log_m_far);

    bool consistent = false;
    switch (ev.regime.kind) {
        case Regime::Kind::Vanishing:
            consistent = ev.m_far < 1e-3 && ev.m_far < ev.m_mid;
            break;
        case Regime::Kind::Finite:
            consistent = std::abs(ev.m_far - ev.regime.limit) < 1e-6 * ev.regime.limit;
            break;
        case Regime::Kind::Divergent:
            consistent = ev.log_m_far > 1e3;
            break;
    }
    if (!consistent) {
        std::ostringstream msg;
        msg << "regime evidence for " << scheme.name() << " contradicts declared "
            << ev.regime.name() << ": log m(1e3)=" << ev.log_m_mid
            << ", log m(1e6)=" << ev.log_m_far;
        throw ConsistencyError(msg.str());
    }
    return ev;
}

std::vector<ParadoxRow> paradox_sweep(const PriorScheme& scheme, double x,
                                      const std::vector<double>& sigma_grid) {
    const Observation obs(x);
    for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
        require_sigma(sigma_grid[i]);
        if (i > 0 && !(sigma_grid[i - 1] < sigma_grid[i])) {
            throw DomainError("paradox_sweep: sigma grid must be strictly increasing");
        }
    }

    std::vector<ParadoxRow> rows;
    rows.reserve(sigma_grid.size());
    for (double sigma : sigma_grid) {
        const AlternativeSpread spread(sigma);
        const double log_m = log_m_of_sigma(scheme, sigma);
        rows.push_back(ParadoxRow{sigma, rho0(scheme, sigma), std::exp(log_m),
                                  model::posterior_h0_from_log_m(obs, spread, log_m)});
    }
    return rows;
}

PosteriorReport posterior_report(const Observation& obs, const AlternativeSpread& spread,
                                 const PriorScheme& scheme, double alpha_b) {
    if (!(alpha_b > 0.0 && alpha_b < 1.0)) {
        throw DomainError("alpha_b must lie in (0, 1)");
    }
    PosteriorReport r;
    r.x = obs.value();
    r.sigma = spread.value();
    r.scheme = scheme.name();
    r.rho0 = rho0(scheme, r.sigma);
    r.bayes_factor = model::bayes_factor(obs, spread);
    r.log_m = log_m_of_sigma(scheme, r.sigma);
    r.m_value = m_of_sigma(scheme, r.sigma);
    r.posterior_h0 = model::posterior_h0_from_log_m(obs, spread, r.log_m);
    r.alpha_b = alpha_b;
    r.rejected = r.posterior_h0 < alpha_b;
    return r;
}

std::vector<std::pair<double, double>> read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("table prior: cannot open '" + path + "'");
    }
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto fields = text::split(trimmed, ',');
        std::optional<double> sigma;
        std::optional<double> rho;
        if (fields.size() == 2) {
            sigma = text::parse_double(text::trim(fields[0]));
            rho = text::parse_double(text::trim(fields[1]));
        }
        if (!sigma || !rho) {
            throw DomainError("table prior: malformed row at " + path + ":" +
                              std::to_string(line_no));
        }
        rows.emplace_back(*sigma, *rho);
    }
    return rows;
}

}  // namespace priors
}  // namespace lindley
