#pragma once

#include "pac/domain.hpp"

#include <cstddef>

namespace pac {

/// Utilities closer than this to the maximum count as tied.
inline constexpr double kTieTolerance = 1e-12;

struct EffortChoice {
    std::size_t effort = 0;  ///< 0 is rejection
    double utility = 0.0;
};

/// U(w, e) = sum_j f_e(j) u(w(j)) - c(e); exactly 0 for e = 0.
double agent_utility(const AgentInstance& agent, const Contract& w, std::size_t effort);

/// U(w, e) for every e in [0, n], index 0 being rejection.
Eigen::VectorXd agent_utilities(const AgentInstance& agent, const Contract& w);

/// Utility-maximizing effort over [0, n]. Among levels within kTieTolerance
/// of the maximum the highest index wins, so an agent indifferent between
/// rejecting and working accepts.
EffortChoice best_response(const AgentInstance& agent, const Contract& w);

/// sum_j f_e(j) (pi(j) - w(j)) for a forced effort level; 0 for e = 0.
double profit_at_effort(const AgentInstance& agent, const OutcomeModel& outcomes, const Contract& w,
                        std::size_t effort);

/// V(w): principal's expected net profit under the agent's best response.
double exact_profit(const AgentInstance& agent, const OutcomeModel& outcomes, const Contract& w);

/// sum_i (f_{e(w1)}(i) - f_{e(w2)}(i)) (u(w1(i)) - u(w2(i))), with the zero
/// vector standing in for the distribution of a rejected contract. Revealed
/// preference makes this nonnegative for every pair.
double grossman_hart_gap(const AgentInstance& agent, const Contract& w1, const Contract& w2);

}  // namespace pac
