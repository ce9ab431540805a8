#pragma once

#include "pac/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace pac {

/// A finite set of arms with rewards bounded in [lo, hi].
///
/// `sample` draws one reward for an arm from the given stream. `sample_sum`
/// is optional: when present it must return a value distributed as the sum
/// of n independent `sample` draws, and lets a sampler with a cheaper exact
/// aggregate skip the per-draw loop. Either callback may be invoked from
/// several threads at once for different arms, each with its own stream.
struct ArmSet {
    using Sampler = std::function<double(std::size_t arm, Rng& rng)>;
    using SumSampler = std::function<double(std::size_t arm, std::uint64_t draws, Rng& rng)>;

    std::size_t size = 0;
    Sampler sample;
    SumSampler sample_sum;
    double lo = 0.0;
    double hi = 1.0;

    double range() const noexcept { return hi - lo; }
};

/// One round of the elimination schedule.
struct RoundPlan {
    std::size_t round = 0;  ///< 1-based
    std::size_t survivors = 0;
    std::uint64_t samples_per_arm = 0;
    double epsilon = 0.0;
    double delta = 0.0;
};

/// Rounds run until a single arm is left:
///   eps_1 = eps / 4, delta_1 = delta / 2,
///   n_l = ceil(2 B^2 ln(3 / delta_l) / (eps_l / 2)^2),
///   eps_{l+1} = 3 eps_l / 4, delta_{l+1} = delta_l / 2,
///   |S_{l+1}| = ceil(|S_l| / 2).
std::vector<RoundPlan> elimination_schedule(std::size_t arms, double range, double epsilon, double delta);

/// Exact number of draws the schedule consumes, sum_l |S_l| n_l.
std::uint64_t total_sample_count(std::size_t arms, double range, double epsilon, double delta);

/// C with total_sample_count <= C (N B^2 / eps^2) ln(1 / delta) whenever
/// N >= 2, eps <= B and delta <= 1/2. With |S_l| <= 2N / 2^(l-1) the schedule
/// sum is at most 256 (9 ln(1/delta) + 9 ln 3 + 81 ln 2) N B^2 / eps^2 plus
/// 2N of ceiling slack, below 26700 (N B^2 / eps^2) ln(1/delta) in that range.
inline constexpr double kBudgetConstant = 32768.0;

struct ArmRecord {
    std::size_t arm = 0;
    double empirical_mean = 0.0;
    bool eliminated = false;
};

struct RoundTrace {
    RoundPlan plan;
    std::vector<ArmRecord> arms;  ///< ascending arm index
    std::size_t survivors_after = 0;
};

struct EliminationTrace {
    std::vector<RoundTrace> rounds;
    std::uint64_t total_samples = 0;
};

struct EliminationResult {
    std::size_t best_arm = 0;
    EliminationTrace trace;
};

enum class SamplingExecution { Sequential, Parallel };

struct EliminationOptions {
    std::uint64_t seed = 0;
    /// Refuse to start when the schedule needs more draws than this.
    std::optional<std::uint64_t> sample_budget;
    SamplingExecution execution = SamplingExecution::Sequential;
};

/// PAC best-arm identification: returns an arm within epsilon of the best
/// mean with probability at least 1 - delta. Each round keeps exactly the
/// ceil(|S|/2) arms with the highest empirical means; equal means are
/// ordered by arm index. Arm a in round l draws from substream (seed, l, a).
EliminationResult median_elimination(const ArmSet& arms, double epsilon, double delta,
                                     const EliminationOptions& options = {});

/// CSV with header round,arm,samples,empirical_mean,eliminated.
void write_trace_csv(std::ostream& out, const EliminationTrace& trace);

}  // namespace pac
