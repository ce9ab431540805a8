#include "pac/contract_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace pac {

namespace {

constexpr double kSnapTolerance = 1e-9;

void require_eta(std::size_t k, double eta) {
    if (!(eta > 0.0 && eta < max_eta(k))) {
        throw PreconditionError("eta must lie in (0, 1/(4k)) = (0, " + std::to_string(max_eta(k)) + "), got " +
                                std::to_string(eta));
    }
}

/// Largest s with w0 exp(eta s) <= 2H, decided on the decoded value itself.
std::uint64_t largest_total_exponent(double min_wage, double bound, double eta) {
    auto fits = [&](std::uint64_t s) { return min_wage * std::exp(eta * static_cast<double>(s)) <= bound; };
    std::uint64_t s = static_cast<std::uint64_t>(std::floor(std::log(bound / min_wage) / eta));
    while (fits(s + 1)) ++s;
    while (s > 0 && !fits(s)) --s;
    return s;
}

}  // namespace

std::vector<std::uint64_t> CoarseCode::cumulative() const {
    std::vector<std::uint64_t> sums(exponents.size());
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        running += exponents[i];
        sums[i] = running;
    }
    return sums;
}

Contract decode(const CoarseCode& code, double min_wage, double eta) {
    const auto sums = code.cumulative();
    Eigen::VectorXd wages(static_cast<Eigen::Index>(sums.size()));
    for (std::size_t i = 0; i < sums.size(); ++i) {
        wages(static_cast<Eigen::Index>(i)) = min_wage * std::exp(eta * static_cast<double>(sums[i]));
    }
    return Contract(std::move(wages));
}

std::int64_t snapped_ceil(double x) {
    const double nearest = std::nearbyint(x);
    if (std::abs(x - nearest) <= kSnapTolerance) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(x));
}

std::optional<CoarseCode> coarse_code_of(const Contract& w, double min_wage, double eta) {
    CoarseCode code;
    double previous = min_wage;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double steps = std::log(w[i] / previous) / eta;
        const double nearest = std::nearbyint(steps);
        if (nearest < 0.0 || std::abs(steps - nearest) > kSnapTolerance) return std::nullopt;
        code.exponents.push_back(static_cast<std::uint32_t>(nearest));
        previous = w[i];
    }
    const Contract decoded = decode(code, min_wage, eta);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(decoded[i] - w[i]) > kSnapTolerance * w[i]) return std::nullopt;
    }
    return code;
}

bool is_monotone_smooth(const OutcomeModel& outcomes, const Contract& w) {
    if (w.size() != outcomes.outcome_count()) throw PreconditionError("contract and outcome model sizes differ");
    // Absorbs the rounding in w(i) + (pi(i+1) - pi(i)) so boundary contracts stay members.
    const double slack = kSmoothTolerance * std::max(1.0, outcomes.cap());
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const double increment = w[i + 1] - w[i];
        if (increment < -slack || increment > outcomes.value(i + 1) - outcomes.value(i) + slack) return false;
    }
    return true;
}

bool is_bounded(const Contract& w, double min_wage, double bound) {
    return (w.wages().array() >= min_wage).all() && (w.wages().array() <= bound).all();
}

bool in_learnable_class(const OutcomeModel& outcomes, const Contract& w) {
    return is_monotone_smooth(outcomes, w) && is_bounded(w, outcomes.min_wage(), outcomes.cap());
}

double max_eta(std::size_t outcome_count) { return 1.0 / (4.0 * static_cast<double>(outcome_count)); }

double size_bound(const OutcomeModel& outcomes, double eta) {
    const double per_axis =
        static_cast<double>(largest_total_exponent(outcomes.min_wage(), 2.0 * outcomes.cap(), eta)) + 1.0;
    return std::pow(per_axis, static_cast<double>(outcomes.outcome_count()));
}

std::optional<std::size_t> DiscretizedSpace::index_of(const CoarseCode& code) const {
    const auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) return std::nullopt;
    return static_cast<std::size_t>(it - codes_.begin());
}

DiscretizedSpace enumerate_space(const OutcomeModel& outcomes, double eta, const EnumerateOptions& options) {
    const std::size_t k = outcomes.outcome_count();
    require_eta(k, eta);
    const double bound = 2.0 * outcomes.cap();
    if (!(outcomes.min_wage() < bound)) throw PreconditionError("minimum wage must be below 2H");

    DiscretizedSpace space;
    space.eta_ = eta;
    space.bound_ = bound;
    space.min_wage_ = outcomes.min_wage();
    space.max_total_ = largest_total_exponent(outcomes.min_wage(), bound, eta);

    CoarseCode code;
    code.exponents.assign(k, 0);
    Eigen::VectorXd wages(static_cast<Eigen::Index>(k));

    std::function<void(std::size_t, std::uint64_t)> visit = [&](std::size_t depth, std::uint64_t used) {
        if (depth == k) {
            space.codes_.push_back(code);
            space.contracts_.emplace_back(wages);
            return;
        }
        const auto d = static_cast<Eigen::Index>(depth);
        for (std::uint64_t l = 0; used + l <= space.max_total_; ++l) {
            ++space.decode_steps_;
            wages(d) = outcomes.min_wage() * std::exp(eta * static_cast<double>(used + l));
            if (options.prune_monotone_smooth && depth > 0 &&
                wages(d) - wages(d - 1) > outcomes.value(depth) - outcomes.value(depth - 1)) {
                break;  // increments only grow with l
            }
            code.exponents[depth] = static_cast<std::uint32_t>(l);
            visit(depth + 1, used + l);
        }
        code.exponents[depth] = 0;
    };
    visit(0, 0);
    return space;
}

RoundedContract round_to_coarse(const OutcomeModel& outcomes, double eta, const Contract& w) {
    const std::size_t k = outcomes.outcome_count();
    require_eta(k, eta);
    if (w.size() != k) throw PreconditionError("contract and outcome model sizes differ");
    if (!in_learnable_class(outcomes, w)) {
        throw PreconditionError("rounding requires a monotone-smooth contract with w0 <= w(i) <= H");
    }
    CoarseCode code;
    double previous = outcomes.min_wage();
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t l = snapped_ceil(std::log(w[i] / previous) / eta);
        code.exponents.push_back(static_cast<std::uint32_t>(std::max<std::int64_t>(l, 0)));
        previous = w[i];
    }
    Contract rounded = decode(code, outcomes.min_wage(), eta);
    if (!is_bounded(rounded, outcomes.min_wage(), 2.0 * outcomes.cap())) {
        throw std::logic_error("rounded contract escaped the 2H bound");
    }
    return {std::move(code), std::move(rounded)};
}

}  // namespace pac
