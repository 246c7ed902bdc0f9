#include "lindley/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "lindley/calibration.hpp"
#include "lindley/error.hpp"
#include "lindley/numerics.hpp"

namespace lindley {

namespace rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32Counter philox_round(const Philox4x32Counter& c, const Philox4x32Key& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

Philox4x32Counter philox4x32_10(Philox4x32Counter counter, Philox4x32Key key) {
    counter = philox_round(counter, key);
    for (int round = 1; round < 10; ++round) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        counter = philox_round(counter, key);
    }
    return counter;
}

std::uint64_t CounterStream::bits(std::uint64_t index) const {
    const Philox4x32Key key = {static_cast<std::uint32_t>(seed_),
                               static_cast<std::uint32_t>(seed_ >> 32)};
    const Philox4x32Counter ctr = {static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32), 0u, 0u};
    const auto out = philox4x32_10(ctr, key);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double CounterStream::uniform(std::uint64_t index) const {
    return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
}

CounterStream CounterStream::split(std::uint64_t stream_id) const {
    return CounterStream(mix64(seed_ ^ mix64(stream_id + 0x9E3779B97F4A7C15ull)));
}

double draw_standard_normal(const CounterStream& stream, std::uint64_t index) {
    return numerics::std_normal_quantile(stream.uniform(index));
}

}  // namespace rng

namespace montecarlo {

namespace {

struct Counts {
    std::size_t posterior = 0;
    std::size_t threshold = 0;
};

Counts count_range(const calibration::DecisionRule& rule, const rng::CounterStream& stream,
                   double theta, std::size_t begin, std::size_t end) {
    Counts c;
    for (std::size_t i = begin; i < end; ++i) {
        const double x = theta + rng::draw_standard_normal(stream, i);
        const auto d = rule.decide(x);
        c.posterior += d.via_posterior;
        c.threshold += d.via_threshold;
    }
    return c;
}

MonteCarloReport run(const SimulationPlan& plan, double analytic, unsigned workers) {
    if (plan.n < 1) {
        throw DomainError("simulation: n must be at least 1");
    }
    if (!std::isfinite(plan.theta)) {
        throw DomainError("simulation: theta must be finite");
    }
    const calibration::DecisionRule rule(plan.sigma, plan.alpha_b, plan.scheme);
    const rng::CounterStream stream(plan.seed);

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    // Small runs are not worth a thread each.
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(1, plan.n / 4096)));

    std::vector<Counts> partial(workers);
    std::vector<std::exception_ptr> failures(workers);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = plan.n / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = (w + 1 == workers) ? plan.n : begin + chunk;
            pool.emplace_back([&, w, begin, end] {
                try {
                    partial[w] = count_range(rule, stream, plan.theta, begin, end);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    MonteCarloReport r;
    r.n = plan.n;
    r.seed = plan.seed;
    r.theta = plan.theta;
    for (const auto& c : partial) {
        r.rejections += c.posterior;
        r.threshold_rejections += c.threshold;
    }
    const double n = static_cast<double>(plan.n);
    r.estimate = static_cast<double>(r.rejections) / n;
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
    r.ci95_lo = std::clamp(r.estimate - 1.96 * r.std_error, 0.0, 1.0);
    r.ci95_hi = std::clamp(r.estimate + 1.96 * r.std_error, 0.0, 1.0);
    r.analytic_value = analytic;
    r.within_3se = std::abs(r.estimate - analytic) <= 3.0 * r.std_error;
    return r;
}

}  // namespace

MonteCarloReport simulate_type_i(const SimulationPlan& plan, unsigned workers) {
    if (plan.theta != 0.0) {
        throw DomainError("simulate_type_i: plan.theta must be 0 under the null");
    }
    return run(plan, calibration::type_i_error(plan.sigma, plan.alpha_b, plan.scheme), workers);
}

MonteCarloReport simulate_power(const SimulationPlan& plan, unsigned workers) {
    return run(plan,
               calibration::power_analytic(plan.theta, plan.sigma, plan.alpha_b, plan.scheme),
               workers);
}

}  // namespace montecarlo
}  // namespace lindley
