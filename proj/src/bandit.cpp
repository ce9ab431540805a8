#include "pac/bandit.hpp"

#include "pac/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace pac {

namespace {

void require_parameters(std::size_t arms, double range, double epsilon, double delta) {
    if (arms == 0) throw PreconditionError("arm set is empty");
    if (!(range > 0.0) || !std::isfinite(range)) throw PreconditionError("reward range must be positive");
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
}

double draw_sum(const ArmSet& arms, std::size_t arm, std::uint64_t draws, Rng& rng) {
    if (arms.sample_sum) {
        const double sum = arms.sample_sum(arm, draws, rng);
        const double n = static_cast<double>(draws);
        if (!(sum >= n * arms.lo - 1e-9 * n * arms.range() && sum <= n * arms.hi + 1e-9 * n * arms.range())) {
            throw std::out_of_range("aggregate reward of arm " + std::to_string(arm) + " outside [n lo, n hi]");
        }
        return sum;
    }
    double sum = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const double reward = arms.sample(arm, rng);
        if (!(reward >= arms.lo && reward <= arms.hi)) {
            throw std::out_of_range("reward " + std::to_string(reward) + " of arm " + std::to_string(arm) +
                                    " outside [lo, hi]");
        }
        sum += reward;
    }
    return sum;
}

}  // namespace

std::vector<RoundPlan> elimination_schedule(std::size_t arms, double range, double epsilon, double delta) {
    require_parameters(arms, range, epsilon, delta);
    std::vector<RoundPlan> plan;
    double eps_l = epsilon / 4.0;
    double delta_l = delta / 2.0;
    std::size_t survivors = arms;
    for (std::size_t round = 1; survivors > 1; ++round) {
        const double half_eps = eps_l / 2.0;
        const double n = std::ceil(2.0 * range * range * std::log(3.0 / delta_l) / (half_eps * half_eps));
        plan.push_back({round, survivors, static_cast<std::uint64_t>(n), eps_l, delta_l});
        survivors = (survivors + 1) / 2;
        eps_l *= 0.75;
        delta_l /= 2.0;
    }
    return plan;
}

std::uint64_t total_sample_count(std::size_t arms, double range, double epsilon, double delta) {
    std::uint64_t total = 0;
    for (const auto& round : elimination_schedule(arms, range, epsilon, delta)) {
        total += static_cast<std::uint64_t>(round.survivors) * round.samples_per_arm;
    }
    return total;
}

EliminationResult median_elimination(const ArmSet& arms, double epsilon, double delta,
                                     const EliminationOptions& options) {
    if (!(arms.hi > arms.lo)) throw PreconditionError("reward bounds require hi > lo");
    if (!arms.sample && !arms.sample_sum) throw PreconditionError("arm set has no sampler");
    const auto schedule = elimination_schedule(arms.size, arms.range(), epsilon, delta);
    if (options.sample_budget) {
        const std::uint64_t needed = total_sample_count(arms.size, arms.range(), epsilon, delta);
        if (needed > *options.sample_budget) {
            throw PreconditionError("schedule needs " + std::to_string(needed) + " samples, budget is " +
                                    std::to_string(*options.sample_budget));
        }
    }

    EliminationResult result;
    std::vector<std::size_t> survivors(arms.size);
    std::iota(survivors.begin(), survivors.end(), std::size_t{0});

    for (const RoundPlan& plan : schedule) {
        std::vector<double> means(survivors.size());
        auto sample_range = [&](std::size_t begin, std::size_t end) {
            for (std::size_t s = begin; s < end; ++s) {
                Rng rng = substream(options.seed, {plan.round, survivors[s]});
                means[s] = draw_sum(arms, survivors[s], plan.samples_per_arm, rng) /
                           static_cast<double>(plan.samples_per_arm);
            }
        };
        const std::size_t workers =
            options.execution == SamplingExecution::Parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
        if (workers == 1) {
            sample_range(0, survivors.size());
        } else {
            std::vector<std::jthread> threads;
            const std::size_t chunk = (survivors.size() + workers - 1) / workers;
            for (std::size_t begin = 0; begin < survivors.size(); begin += chunk) {
                threads.emplace_back(sample_range, begin, std::min(begin + chunk, survivors.size()));
            }
        }

        std::vector<std::size_t> order(survivors.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
        const std::size_t keep = (survivors.size() + 1) / 2;
        std::vector<bool> kept(survivors.size(), false);
        for (std::size_t i = 0; i < keep; ++i) kept[order[i]] = true;

        RoundTrace round{plan, {}, keep};
        std::vector<std::size_t> next;
        next.reserve(keep);
        for (std::size_t s = 0; s < survivors.size(); ++s) {
            round.arms.push_back({survivors[s], means[s], !kept[s]});
            if (kept[s]) next.push_back(survivors[s]);
        }
        result.trace.total_samples += static_cast<std::uint64_t>(survivors.size()) * plan.samples_per_arm;
        result.trace.rounds.push_back(std::move(round));
        survivors = std::move(next);
    }
    result.best_arm = survivors.front();
    return result;
}

void write_trace_csv(std::ostream& out, const EliminationTrace& trace) {
    out << "round,arm,samples,empirical_mean,eliminated\n";
    const auto precision = out.precision(17);
    for (const auto& round : trace.rounds) {
        for (const auto& arm : round.arms) {
            out << round.plan.round << ',' << arm.arm << ',' << round.plan.samples_per_arm << ','
                << arm.empirical_mean << ',' << (arm.eliminated ? 1 : 0) << '\n';
        }
    }
    out.precision(precision);
}

}  // namespace pac
