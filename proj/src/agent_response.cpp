#include "pac/agent_response.hpp"

#include <string>

namespace pac {

namespace {

void require_matching(const AgentInstance& agent, const Contract& w) {
    if (w.size() != agent.outcome_count()) {
        throw PreconditionError("contract has " + std::to_string(w.size()) + " wages but the instance has " +
                                std::to_string(agent.outcome_count()) + " outcomes");
    }
}

}  // namespace

double agent_utility(const AgentInstance& agent, const Contract& w, std::size_t effort) {
    require_matching(agent, w);
    if (effort > agent.effort_count()) throw std::out_of_range("effort index out of range");
    if (effort == 0) return 0.0;
    const auto row = agent.distributions().row(static_cast<Eigen::Index>(effort - 1));
    return row.dot(agent.utility().apply(w.wages())) - agent.cost(effort);
}

Eigen::VectorXd agent_utilities(const AgentInstance& agent, const Contract& w) {
    require_matching(agent, w);
    Eigen::VectorXd utilities(agent.effort_count() + 1);
    utilities(0) = 0.0;
    utilities.tail(agent.effort_count()) =
        agent.distributions() * agent.utility().apply(w.wages()) - agent.costs();
    return utilities;
}

EffortChoice best_response(const AgentInstance& agent, const Contract& w) {
    const Eigen::VectorXd utilities = agent_utilities(agent, w);
    const double best = utilities.maxCoeff();
    for (Eigen::Index e = utilities.size() - 1; e >= 0; --e) {
        if (utilities(e) >= best - kTieTolerance) return {static_cast<std::size_t>(e), utilities(e)};
    }
    return {};  // unreachable: the maximizer itself qualifies
}

double profit_at_effort(const AgentInstance& agent, const OutcomeModel& outcomes, const Contract& w,
                        std::size_t effort) {
    require_matching(agent, w);
    if (outcomes.outcome_count() != w.size()) throw PreconditionError("outcome model and contract sizes differ");
    if (effort > agent.effort_count()) throw std::out_of_range("effort index out of range");
    if (effort == 0) return 0.0;
    const auto row = agent.distributions().row(static_cast<Eigen::Index>(effort - 1));
    return row.dot(outcomes.values() - w.wages());
}

double exact_profit(const AgentInstance& agent, const OutcomeModel& outcomes, const Contract& w) {
    return profit_at_effort(agent, outcomes, w, best_response(agent, w).effort);
}

double grossman_hart_gap(const AgentInstance& agent, const Contract& w1, const Contract& w2) {
    require_matching(agent, w1);
    require_matching(agent, w2);
    const Eigen::VectorXd f1 = agent.distribution(best_response(agent, w1).effort);
    const Eigen::VectorXd f2 = agent.distribution(best_response(agent, w2).effort);
    const UtilitySpec& u = agent.utility();
    return (f1 - f2).dot(u.apply(w1.wages()) - u.apply(w2.wages()));
}

}  // namespace pac
