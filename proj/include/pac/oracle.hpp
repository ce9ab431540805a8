#pragma once

#include "pac/domain.hpp"

#include <cstddef>
#include <cstdint>

namespace pac {

/// Best contract found on a grid, with the grid's largest step h.
struct GridOptimum {
    Contract contract;
    double profit = 0.0;
    double step = 0.0;
    std::uint64_t evaluated = 0;
    /// The maximizer touches w(1) = H or w(k) = H, so the H-bound of the
    /// learnable class is active.
    bool cap_binds = false;
};

/// Lipschitz-style slack used when comparing two grid searches: 2 k H h.
double grid_slack(const OutcomeModel& outcomes, double step);

/// Brute-force optimum over the learnable class. W is parametrized by
/// w(1) on an m-point grid of [w0, H] and each increment d_i on an m-point
/// grid of [0, pi(i+1) - pi(i)]; points with a wage above H are dropped.
/// Grids with m' - 1 a multiple of m - 1 contain the m-point grid, so
/// refining that way never lowers the returned profit. Requires m >= 2 and
/// w0 <= H.
GridOptimum grid_optimum(const AgentInstance& agent, const OutcomeModel& outcomes, std::size_t resolution);

struct TwoOutcomeShape {
    double share = 0.0;  ///< a in w(2) = w(1) + a (pi(2) - pi(1))
    double base_wage = 0.0;
    double profit = 0.0;
    double step = 0.0;
    bool cap_binds = false;
};

/// Searches w(2) = w(1) + a (pi(2) - pi(1)) over (w(1), a) in [w0, H] x [0, 1]
/// with m points per axis, skipping w(2) > H. Requires k = 2.
TwoOutcomeShape two_outcome_shape_check(const AgentInstance& agent, const OutcomeModel& outcomes,
                                        std::size_t resolution);

struct RiskNeutralShape {
    double alpha = 0.0;  ///< w(i) = pi(i) - alpha
    double profit = 0.0;
    double step = 0.0;
    std::uint64_t skipped = 0;  ///< grid points dropped for leaving [w0, H]
};

/// Searches the shape w(i) = pi(i) - alpha with alpha on an m-point grid of
/// [0, pi(1) - w0]. Requires a CRRA(1) agent and w0 < pi(1).
RiskNeutralShape risk_neutral_shape_check(const AgentInstance& agent, const OutcomeModel& outcomes,
                                          std::size_t resolution);

}  // namespace pac
