#include "pac/environment.hpp"

#include "pac/agent_response.hpp"

#include <algorithm>
#include <memory>
#include <ostream>
#include <random>

namespace pac {

namespace {

/// Hidden per-arm state, precomputed once: the best response never changes
/// for a fixed contract.
struct ArmTable {
    std::vector<Eigen::VectorXd> distributions;  // empty vector for rejection
    std::vector<Eigen::VectorXd> profits;        // pi(j) - w(j)
};

RoundResult draw(const Eigen::VectorXd& distribution, const Eigen::VectorXd& profits, Rng& rng) {
    const double u = uniform01(rng);
    if (distribution.size() == 0) return {};
    const std::size_t outcome = sample_outcome(distribution, u);
    return {outcome, profits(static_cast<Eigen::Index>(outcome - 1))};
}

}  // namespace

std::size_t sample_outcome(const Eigen::VectorXd& distribution, double uniform) {
    double cumulative = 0.0;
    const auto k = static_cast<std::size_t>(distribution.size());
    for (std::size_t j = 0; j < k; ++j) {
        cumulative += distribution(static_cast<Eigen::Index>(j));
        if (uniform < cumulative) return j + 1;
    }
    // Rounding left the total a hair under 1: fall back on the last outcome with mass.
    for (std::size_t j = k; j > 0; --j) {
        if (distribution(static_cast<Eigen::Index>(j - 1)) > 0.0) return j;
    }
    return k;
}

RoundResult play_round(const AgentInstance& agent, const OutcomeModel& outcomes, const Contract& w, Rng& rng) {
    const std::size_t effort = best_response(agent, w).effort;
    if (effort == 0) {
        uniform01(rng);
        return {};
    }
    return draw(agent.distribution(effort), outcomes.values() - w.wages(), rng);
}

RoundLog::RoundLog(std::ostream& out) : out_(out) { out_ << "round,arm,outcome,profit\n"; }

void RoundLog::record(std::size_t arm, const RoundResult& result) {
    std::scoped_lock lock(mutex_);
    out_ << ++rounds_ << ',' << arm << ',' << result.outcome << ',' << result.net_profit << '\n';
}

Environment::Environment(AgentInstance agent, OutcomeModel outcomes)
    : agent_(std::move(agent)), outcomes_(std::move(outcomes)) {
    if (agent_.outcome_count() != outcomes_.outcome_count()) {
        throw InvalidInstance({{"shape_mismatch", "/efforts", "distributions must have one entry per outcome"}});
    }
}

RoundResult Environment::play(const Contract& w, Rng& rng) const { return play_round(agent_, outcomes_, w, rng); }

ArmSet Environment::make_arm_set(const DiscretizedSpace& space, SamplingMode mode, RoundLog* log) const {
    if (space.empty()) throw PreconditionError("discretized space is empty");
    if (mode == SamplingMode::Aggregated && log != nullptr) {
        throw PreconditionError("round logging needs per-round sampling");
    }
    auto table = std::make_shared<ArmTable>();
    table->distributions.reserve(space.size());
    table->profits.reserve(space.size());
    for (const Contract& w : space.contracts()) {
        const std::size_t effort = best_response(agent_, w).effort;
        table->distributions.push_back(effort == 0 ? Eigen::VectorXd() : agent_.distribution(effort));
        table->profits.push_back(outcomes_.values() - w.wages());
    }

    ArmSet arms;
    arms.size = space.size();
    arms.lo = -2.0 * outcomes_.cap();
    arms.hi = outcomes_.cap();
    arms.sample = [table, log](std::size_t arm, Rng& rng) {
        const RoundResult result = draw(table->distributions[arm], table->profits[arm], rng);
        if (log != nullptr) log->record(arm, result);
        return result.net_profit;
    };
    if (mode == SamplingMode::Aggregated) {
        arms.sample_sum = [table](std::size_t arm, std::uint64_t draws, Rng& rng) {
            const Eigen::VectorXd& f = table->distributions[arm];
            if (f.size() == 0) return 0.0;
            const Eigen::VectorXd& profit = table->profits[arm];
            // Multinomial counts via sequential conditional binomials.
            std::uint64_t remaining = draws;
            double mass = 1.0;
            double sum = 0.0;
            for (Eigen::Index j = 0; j < f.size() && remaining > 0; ++j) {
                std::uint64_t count = remaining;
                if (j + 1 < f.size()) {
                    const double p = mass > 0.0 ? std::clamp(f(j) / mass, 0.0, 1.0) : 1.0;
                    count = std::binomial_distribution<std::uint64_t>(remaining, p)(rng);
                }
                sum += static_cast<double>(count) * profit(j);
                remaining -= count;
                mass -= f(j);
            }
            return sum;
        };
    }
    return arms;
}

}  // namespace pac
