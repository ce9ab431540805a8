#include "pac/domain.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace pac {

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
    std::ostringstream out;
    out << "invalid instance";
    for (const auto& v : violations) out << "; " << v.path << ": " << v.message;
    return out.str();
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<Violation> violations)
    : std::invalid_argument(join_messages(violations)), violations_(std::move(violations)) {}

OutcomeModel::OutcomeModel(Eigen::VectorXd values, double min_wage)
    : values_(std::move(values)), min_wage_(min_wage) {
    std::vector<Violation> violations;
    if (values_.size() == 0) violations.push_back({"empty_outcomes", "/pi", "at least one outcome is required"});
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_(i)) || values_(i) <= 0.0) {
            violations.push_back({"nonpositive_value", "/pi/" + std::to_string(i), "outcome values must be finite and > 0"});
        }
        if (i > 0 && !(values_(i) > values_(i - 1))) {
            violations.push_back({"not_increasing", "/pi/" + std::to_string(i), "outcome values must be strictly increasing"});
        }
    }
    if (!std::isfinite(min_wage_) || min_wage_ <= 0.0) {
        violations.push_back({"nonpositive_min_wage", "/w0", "minimum wage must be finite and > 0"});
    }
    if (!violations.empty()) throw InvalidInstance(std::move(violations));
}

Contract::Contract(Eigen::VectorXd wages) : wages_(std::move(wages)) {
    if (wages_.size() == 0) throw PreconditionError("contract must have at least one wage");
    for (Eigen::Index i = 0; i < wages_.size(); ++i) {
        if (!std::isfinite(wages_(i)) || wages_(i) <= 0.0) {
            throw PreconditionError("contract wages must be finite and > 0 (entry " + std::to_string(i) + ")");
        }
    }
}

Contract::Contract(std::initializer_list<double> wages)
    : Contract(Eigen::Map<const Eigen::VectorXd>(wages.begin(), static_cast<Eigen::Index>(wages.size()))) {}

UtilitySpec UtilitySpec::crra(double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw PreconditionError("CRRA exponent must lie in (0, 1]");
    return UtilitySpec(UtilityFamily::Crra, rho);
}

UtilitySpec UtilitySpec::log() { return UtilitySpec(UtilityFamily::Log, 0.0); }

double UtilitySpec::derivative(double x) const {
    if (family_ == UtilityFamily::Log) return 1.0 / x;
    return rho_ * std::pow(x, rho_ - 1.0);
}

AgentInstance::AgentInstance(UtilitySpec utility, Eigen::MatrixXd distributions, Eigen::VectorXd costs)
    : utility_(utility), distributions_(std::move(distributions)), costs_(std::move(costs)) {
    std::vector<Violation> violations;
    if (distributions_.rows() == 0) violations.push_back({"no_efforts", "/efforts", "at least one effort level is required"});
    if (distributions_.rows() != costs_.size()) {
        violations.push_back({"shape_mismatch", "/efforts", "one cost per effort distribution is required"});
        throw InvalidInstance(std::move(violations));
    }
    for (Eigen::Index e = 0; e < distributions_.rows(); ++e) {
        const std::string base = "/efforts/" + std::to_string(e);
        if (!std::isfinite(costs_(e)) || costs_(e) < 0.0) {
            violations.push_back({"negative_cost", base + "/cost", "effort cost must be finite and >= 0"});
        }
        const auto row = distributions_.row(e);
        if (!row.allFinite() || (row.array() < 0.0).any()) {
            violations.push_back({"negative_probability", base + "/dist", "probabilities must be finite and >= 0"});
        } else if (std::abs(row.sum() - 1.0) > kProbabilityTolerance) {
            violations.push_back({"not_normalized", base + "/dist", "probabilities must sum to 1"});
        }
    }
    if (violations.empty()) {
        const FosdReport fosd = validate_fosd(distributions_);
        if (!fosd.holds) {
            const auto& v = *fosd.first_violation;
            violations.push_back({"fosd_violation", "/efforts/" + std::to_string(v.higher - 1) + "/dist",
                                  "effort " + std::to_string(v.higher) + " does not dominate effort " +
                                      std::to_string(v.lower) + " at outcome " + std::to_string(v.outcome)});
        }
    }
    if (!violations.empty()) throw InvalidInstance(std::move(violations));
}

Eigen::VectorXd AgentInstance::distribution(std::size_t effort) const {
    if (effort == 0) return Eigen::VectorXd::Zero(distributions_.cols());
    if (effort > effort_count()) throw std::out_of_range("effort index out of range");
    return distributions_.row(static_cast<Eigen::Index>(effort - 1)).transpose();
}

double AgentInstance::cost(std::size_t effort) const {
    if (effort == 0) return 0.0;
    if (effort > effort_count()) throw std::out_of_range("effort index out of range");
    return costs_(static_cast<Eigen::Index>(effort - 1));
}

FosdReport validate_fosd(const Eigen::MatrixXd& distributions) {
    const Eigen::MatrixXd tails = tail_sums(distributions);
    for (Eigen::Index hi = 1; hi < tails.rows(); ++hi) {
        for (Eigen::Index lo = 0; lo < hi; ++lo) {
            for (Eigen::Index j = 0; j < tails.cols(); ++j) {
                if (tails(hi, j) < tails(lo, j) - kProbabilityTolerance) {
                    return {false, FosdViolation{static_cast<std::size_t>(hi + 1), static_cast<std::size_t>(lo + 1),
                                                 static_cast<std::size_t>(j + 1)}};
                }
            }
        }
    }
    return {};
}

FosdReport validate_fosd(const AgentInstance& agent) { return validate_fosd(agent.distributions()); }

bool validate_bra(const UtilitySpec& utility, const std::vector<double>& probe_grid) {
    for (std::size_t i = 0; i < probe_grid.size(); ++i) {
        if (!(probe_grid[i] > 0.0) || (i > 0 && !(probe_grid[i] > probe_grid[i - 1]))) {
            throw PreconditionError("probe grid must be strictly positive and strictly increasing");
        }
    }
    double previous = -std::numeric_limits<double>::infinity();
    for (const double x : probe_grid) {
        const double elasticity = x * utility.derivative(x);
        if (elasticity < previous - 1e-10) return false;
        previous = elasticity;
    }
    return true;
}

bool dominance_expectation_check(const AgentInstance& agent, const Eigen::VectorXd& a) {
    if (static_cast<std::size_t>(a.size()) != agent.outcome_count()) {
        throw PreconditionError("test sequence length must equal the outcome count");
    }
    for (Eigen::Index i = 1; i < a.size(); ++i) {
        if (a(i) < a(i - 1)) throw PreconditionError("test sequence must be nondecreasing");
    }
    // The tolerance scales with the magnitude of a: tail sums are only exact to 1e-12.
    const double tolerance = kProbabilityTolerance * std::max(1.0, a.cwiseAbs().maxCoeff()) * static_cast<double>(a.size());
    const Eigen::VectorXd expectations = agent.distributions() * a;
    for (Eigen::Index hi = 1; hi < expectations.size(); ++hi) {
        for (Eigen::Index lo = 0; lo < hi; ++lo) {
            if (expectations(hi) < expectations(lo) - tolerance) return false;
        }
    }
    return true;
}

}  // namespace pac
