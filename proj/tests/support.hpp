#pragma once

// Shared fixtures and generators for the test suites.

#include "pac/contract_space.hpp"
#include "pac/domain.hpp"
#include "pac/instance_io.hpp"
#include "pac/rng.hpp"

#include <array>
#include <vector>

namespace pac::testing {

/// pi = (1, 2), u = sqrt, f_1 = (0.7, 0.3) at cost 0.05, f_2 = (0.4, 0.6) at cost 0.2, w0 = 0.1.
inline Instance instance_a() {
    Eigen::MatrixXd f(2, 2);
    f << 0.7, 0.3,
         0.4, 0.6;
    return Instance{OutcomeModel(Eigen::Vector2d(1.0, 2.0), 0.1),
                    AgentInstance(UtilitySpec::crra(0.5), f, Eigen::Vector2d(0.05, 0.2))};
}

inline UtilitySpec utility_for(std::size_t which) {
    static const std::array<double, 3> rhos{0.3, 0.5, 1.0};
    return which < rhos.size() ? UtilitySpec::crra(rhos[which]) : UtilitySpec::log();
}

/// Random instance with k in {2, 3}, n in {1..4} and one of CRRA(0.3), CRRA(0.5), CRRA(1), Log.
inline Instance random_instance(std::uint64_t seed) {
    Rng rng = substream(seed, {0x636f72707573ULL});
    GeneratorOptions options;
    options.outcomes = 2 + rng() % 2;
    options.efforts = 1 + rng() % 4;
    options.utility = utility_for(rng() % 4);
    options.cap = 0.5 + 3.0 * uniform01(rng);
    options.min_wage_fraction = 0.05 + 0.5 * uniform01(rng);
    options.seed = rng();
    return generate_instance(options);
}

/// Random member of the learnable class (monotone-smooth, w0 <= w <= H).
/// About a fifth of the increments sit on each boundary of [0, pi(i+1) - pi(i)].
inline Contract random_learnable_contract(const OutcomeModel& outcomes, Rng& rng) {
    const std::size_t k = outcomes.outcome_count();
    const double w0 = outcomes.min_wage();
    const double cap = outcomes.cap();
    Eigen::VectorXd increments = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 1; i < k; ++i) {
        const double spread = outcomes.value(i) - outcomes.value(i - 1);
        const double pick = uniform01(rng);
        increments(static_cast<Eigen::Index>(i)) = pick < 0.2 ? 0.0 : pick < 0.4 ? spread : spread * uniform01(rng);
    }
    const double total = increments.sum();
    if (total > cap - w0) increments *= (cap - w0) / total * uniform01(rng);
    Eigen::VectorXd wages(static_cast<Eigen::Index>(k));
    double running = w0 + (cap - w0 - increments.sum()) * uniform01(rng);
    for (std::size_t i = 0; i < k; ++i) {
        running += increments(static_cast<Eigen::Index>(i));
        wages(static_cast<Eigen::Index>(i)) = std::min(running, cap);
    }
    return Contract(wages);
}

/// Any positive contract with wages in [lo, hi].
inline Contract random_contract(std::size_t k, double lo, double hi, Rng& rng) {
    Eigen::VectorXd wages(static_cast<Eigen::Index>(k));
    for (auto& w : wages) w = lo + (hi - lo) * uniform01(rng);
    return Contract(wages);
}

}  // namespace pac::testing
