#include "pac/oracle.hpp"

#include "pac/agent_response.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace pac {

namespace {

/// Point t of an m-point grid on [lo, hi]; nested refinements reproduce it bit for bit.
double grid_point(double lo, double hi, std::size_t t, std::size_t resolution) {
    return lo + (hi - lo) * (static_cast<double>(t) / static_cast<double>(resolution - 1));
}

void require_resolution(std::size_t resolution) {
    if (resolution < 2) throw PreconditionError("grid resolution must be at least 2");
}

void require_shapes(const AgentInstance& agent, const OutcomeModel& outcomes) {
    if (agent.outcome_count() != outcomes.outcome_count()) {
        throw PreconditionError("agent and outcome model disagree on the number of outcomes");
    }
    if (outcomes.min_wage() > outcomes.cap()) throw PreconditionError("minimum wage exceeds H: W is empty");
}

}  // namespace

double grid_slack(const OutcomeModel& outcomes, double step) {
    return 2.0 * static_cast<double>(outcomes.outcome_count()) * outcomes.cap() * step;
}

GridOptimum grid_optimum(const AgentInstance& agent, const OutcomeModel& outcomes, std::size_t resolution) {
    require_resolution(resolution);
    require_shapes(agent, outcomes);
    const std::size_t k = outcomes.outcome_count();
    const double cap = outcomes.cap();
    const double w0 = outcomes.min_wage();

    double step = (cap - w0) / static_cast<double>(resolution - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        step = std::max(step, (outcomes.value(i + 1) - outcomes.value(i)) / static_cast<double>(resolution - 1));
    }

    Eigen::VectorXd wages(static_cast<Eigen::Index>(k));
    Eigen::VectorXd best_wages = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), w0);
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t evaluated = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t depth) {
        if (depth == k) {
            const Contract w(wages);
            const double profit = exact_profit(agent, outcomes, w);
            ++evaluated;
            if (profit > best) {
                best = profit;
                best_wages = wages;
            }
            return;
        }
        const auto d = static_cast<Eigen::Index>(depth);
        for (std::size_t t = 0; t < resolution; ++t) {
            wages(d) = depth == 0 ? grid_point(w0, cap, t, resolution)
                                  : wages(d - 1) + grid_point(0.0, outcomes.value(depth) - outcomes.value(depth - 1),
                                                              t, resolution);
            if (wages(d) > cap) break;  // increments are nonnegative, so deeper wages only grow
            visit(depth + 1);
        }
    };
    visit(0);

    const bool binds = best_wages.maxCoeff() >= cap - step;
    return GridOptimum{Contract(best_wages), best, step, evaluated, binds};
}

TwoOutcomeShape two_outcome_shape_check(const AgentInstance& agent, const OutcomeModel& outcomes,
                                        std::size_t resolution) {
    if (outcomes.outcome_count() != 2) throw PreconditionError("the two-outcome shape needs k = 2");
    require_resolution(resolution);
    require_shapes(agent, outcomes);
    const double cap = outcomes.cap();
    const double w0 = outcomes.min_wage();
    const double spread = outcomes.value(1) - outcomes.value(0);
    const double step = std::max((cap - w0), spread) / static_cast<double>(resolution - 1);

    TwoOutcomeShape best{0.0, w0, -std::numeric_limits<double>::infinity(), step, false};
    for (std::size_t t = 0; t < resolution; ++t) {
        const double base = grid_point(w0, cap, t, resolution);
        for (std::size_t s = 0; s < resolution; ++s) {
            const double share = grid_point(0.0, 1.0, s, resolution);
            const double top = base + share * spread;
            if (top > cap) break;
            const double profit = exact_profit(agent, outcomes, Contract{base, top});
            if (profit > best.profit) {
                best.share = share;
                best.base_wage = base;
                best.profit = profit;
            }
        }
    }
    best.cap_binds = best.base_wage + best.share * spread >= cap - step;
    return best;
}

RiskNeutralShape risk_neutral_shape_check(const AgentInstance& agent, const OutcomeModel& outcomes,
                                          std::size_t resolution) {
    if (!agent.utility().is_risk_neutral()) throw PreconditionError("the linear shape needs a risk-neutral agent");
    require_resolution(resolution);
    require_shapes(agent, outcomes);
    const double headroom = outcomes.value(0) - outcomes.min_wage();
    if (!(headroom > 0.0)) throw PreconditionError("the linear shape needs w0 < pi(1)");

    RiskNeutralShape best{0.0, -std::numeric_limits<double>::infinity(),
                          headroom / static_cast<double>(resolution - 1), 0};
    for (std::size_t t = 0; t < resolution; ++t) {
        const double alpha = grid_point(0.0, headroom, t, resolution);
        const Eigen::VectorXd wages = outcomes.values().array() - alpha;
        if ((wages.array() < outcomes.min_wage() - 1e-12).any() || (wages.array() > outcomes.cap()).any()) {
            ++best.skipped;
            continue;
        }
        const double profit = exact_profit(agent, outcomes, Contract(wages));
        if (profit > best.profit) {
            best.alpha = alpha;
            best.profit = profit;
        }
    }
    return best;
}

}  // namespace pac
