#pragma once

#include "pac/bandit.hpp"
#include "pac/contract_space.hpp"
#include "pac/domain.hpp"
#include "pac/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <mutex>

namespace pac {

/// What the principal sees after one round: the outcome (0 when the agent
/// rejected) and her net profit pi(outcome) - w(outcome), or 0 on rejection.
struct RoundResult {
    std::size_t outcome = 0;
    double net_profit = 0.0;
};

/// Inverse-CDF draw of a 1-based outcome from one uniform in [0, 1).
std::size_t sample_outcome(const Eigen::VectorXd& distribution, double uniform);

/// One interaction: the agent best-responds to w, an outcome is drawn from
/// her effort's distribution with exactly one uniform, and only the outcome
/// and profit are returned.
RoundResult play_round(const AgentInstance& agent, const OutcomeModel& outcomes, const Contract& w, Rng& rng);

enum class SamplingMode {
    /// One simulated round per draw.
    PerRound,
    /// Draws for an arm are aggregated through multinomial outcome counts,
    /// which has the same distribution as summing per-round rewards.
    Aggregated,
};

/// Appends (round, arm, outcome, profit) rows; safe to share across threads.
class RoundLog {
public:
    explicit RoundLog(std::ostream& out);
    void record(std::size_t arm, const RoundResult& result);

private:
    std::mutex mutex_;
    std::ostream& out_;
    std::uint64_t rounds_ = 0;
};

/// The principal-facing side of the protocol. The agent is held privately;
/// nothing here returns its utility, efforts, costs or distributions.
class Environment {
public:
    Environment(AgentInstance agent, OutcomeModel outcomes);

    const OutcomeModel& outcomes() const noexcept { return outcomes_; }

    RoundResult play(const Contract& w, Rng& rng) const;

    /// One arm per member of `space`, rewarded by net profit in [-2H, H].
    /// Aggregated mode is unavailable while a round log is attached.
    ArmSet make_arm_set(const DiscretizedSpace& space, SamplingMode mode = SamplingMode::PerRound,
                        RoundLog* log = nullptr) const;

private:
    AgentInstance agent_;
    OutcomeModel outcomes_;
};

}  // namespace pac
