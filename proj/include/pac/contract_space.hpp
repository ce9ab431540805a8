#pragma once

#include "pac/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pac {

/// Exponents (l_0, ..., l_{k-1}) of an eta-coarse contract:
/// w(1) = w0 exp(eta l_0), w(i+1) = w(i) exp(eta l_i).
struct CoarseCode {
    std::vector<std::uint32_t> exponents;

    /// s_i = l_0 + ... + l_{i-1}, so that w(i) = w0 exp(eta s_i).
    std::vector<std::uint64_t> cumulative() const;

    friend bool operator==(const CoarseCode&, const CoarseCode&) = default;
    friend auto operator<=>(const CoarseCode&, const CoarseCode&) = default;
};

Contract decode(const CoarseCode& code, double min_wage, double eta);

/// Ceiling that first snaps values within 1e-9 of an integer onto it.
std::int64_t snapped_ceil(double x);

/// The code of w if it is eta-coarse (up to 1e-9 relative error per wage).
std::optional<CoarseCode> coarse_code_of(const Contract& w, double min_wage, double eta);

/// Absolute tolerance (times max(1, H)) on the increment bounds below.
inline constexpr double kSmoothTolerance = 1e-12;

/// 0 <= w(i+1) - w(i) <= pi(i+1) - pi(i) for every consecutive pair.
bool is_monotone_smooth(const OutcomeModel& outcomes, const Contract& w);

/// min_wage <= w(i) <= bound for every i.
bool is_bounded(const Contract& w, double min_wage, double bound);

/// Membership in the learnable class: monotone-smooth and H-bounded.
bool in_learnable_class(const OutcomeModel& outcomes, const Contract& w);

/// Largest eta (exclusive) accepted by the discretization, 1 / (4k).
double max_eta(std::size_t outcome_count);

/// (floor(log(2H / w0) / eta) + 1)^k.
double size_bound(const OutcomeModel& outcomes, double eta);

struct EnumerateOptions {
    /// Keep only members that are themselves monotone-smooth.
    bool prune_monotone_smooth = false;
};

/// The finite arm set: every eta-coarse, 2H-bounded contract, in
/// lexicographic order of its code.
class DiscretizedSpace {
public:
    double eta() const noexcept { return eta_; }
    double bound() const noexcept { return bound_; }
    double min_wage() const noexcept { return min_wage_; }
    /// Largest admissible total exponent s_k.
    std::uint64_t max_total_exponent() const noexcept { return max_total_; }
    std::size_t size() const noexcept { return codes_.size(); }
    bool empty() const noexcept { return codes_.empty(); }

    const std::vector<CoarseCode>& codes() const noexcept { return codes_; }
    const std::vector<Contract>& contracts() const noexcept { return contracts_; }
    const CoarseCode& code(std::size_t i) const { return codes_.at(i); }
    const Contract& contract(std::size_t i) const { return contracts_.at(i); }

    std::optional<std::size_t> index_of(const CoarseCode& code) const;

    /// Number of single-wage decode steps the enumeration performed.
    std::uint64_t decode_steps() const noexcept { return decode_steps_; }

private:
    friend DiscretizedSpace enumerate_space(const OutcomeModel&, double, const EnumerateOptions&);

    double eta_ = 0.0;
    double bound_ = 0.0;
    double min_wage_ = 0.0;
    std::uint64_t max_total_ = 0;
    std::vector<CoarseCode> codes_;
    std::vector<Contract> contracts_;
    std::uint64_t decode_steps_ = 0;
};

/// Depth-first enumeration over exponent vectors. Requires 0 < eta < 1/(4k)
/// and w0 < 2H; throws PreconditionError otherwise.
DiscretizedSpace enumerate_space(const OutcomeModel& outcomes, double eta, const EnumerateOptions& options = {});

struct RoundedContract {
    CoarseCode code;
    Contract contract;
};

/// Rounds a learnable contract up onto the coarse grid:
///   l_0 = ceil(log(w(1) / w0) / eta), l_i = ceil(log(w(i+1) / w(i)) / eta).
/// The result dominates w pointwise and in consecutive ratios, stays below
/// exp(eta i) w(i), and is a member of the eta-coarse space.
RoundedContract round_to_coarse(const OutcomeModel& outcomes, double eta, const Contract& w);

}  // namespace pac
