#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "lindley/priors.hpp"

namespace lindley {

namespace rng {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., Random123).
Philox4x32Counter philox4x32_10(Philox4x32Counter counter, Philox4x32Key key);

/// Counter-based stream: the i-th draw of seed s is a pure function of (s, i),
/// so any partition of the index range reproduces the same sequence.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// 64 random bits for position `index`.
    std::uint64_t bits(std::uint64_t index) const;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform(std::uint64_t index) const;

    /// Split off an independent stream (distinct key).
    CounterStream split(std::uint64_t stream_id) const;

private:
    std::uint64_t seed_;
};

/// N(0,1) variate at `index`, by inverse CDF of the uniform at the same index.
double draw_standard_normal(const CounterStream& stream, std::uint64_t index);

}  // namespace rng

struct SimulationPlan {
    std::size_t n = 1'000'000;
    std::uint64_t seed = 0;
    double theta = 0.0;
    double sigma = 1.0;
    double alpha_b = 0.05;
    PriorScheme scheme = PriorScheme::kl();
};

struct MonteCarloReport {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double theta = 0.0;
    std::size_t rejections = 0;            // P(H₀|x) < α_B
    std::size_t threshold_rejections = 0;  // x² > ψ(σ)
    double estimate = 0.0;
    double std_error = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    double analytic_value = 0.0;
    bool within_3se = false;

    bool operator==(const MonteCarloReport&) const = default;
};

namespace montecarlo {

/// Rejection rate under θ = 0. Throws DomainError if plan.theta != 0.
/// `workers` = 0 picks the hardware concurrency; results never depend on it.
MonteCarloReport simulate_type_i(const SimulationPlan& plan, unsigned workers = 0);

/// Rejection rate under x ~ N(θ, 1), compared with calibration::power_analytic.
MonteCarloReport simulate_power(const SimulationPlan& plan, unsigned workers = 0);

}  // namespace montecarlo
}  // namespace lindley
