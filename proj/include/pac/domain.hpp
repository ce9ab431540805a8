#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pac {

/// Absolute tolerance for distribution normalization and dominance checks.
inline constexpr double kProbabilityTolerance = 1e-12;

/// Raised when a caller violates an operation's precondition (bad eta,
/// contract outside the admissible class, malformed probe grid, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One failed check of an instance, keyed by a stable code and a JSON-pointer-like path.
struct Violation {
    std::string code;
    std::string path;
    std::string message;
};

/// Raised by constructors and the instance loader. Carries every violation found.
class InvalidInstance : public std::invalid_argument {
public:
    explicit InvalidInstance(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// The principal's side of the problem: strictly increasing outcome values
/// pi(1) < ... < pi(k) = H and the minimum wage w0.
class OutcomeModel {
public:
    OutcomeModel(Eigen::VectorXd values, double min_wage);

    const Eigen::VectorXd& values() const noexcept { return values_; }
    double value(std::size_t outcome) const { return values_(static_cast<Eigen::Index>(outcome)); }
    double cap() const noexcept { return values_(values_.size() - 1); }
    double min_wage() const noexcept { return min_wage_; }
    std::size_t outcome_count() const noexcept { return static_cast<std::size_t>(values_.size()); }

private:
    Eigen::VectorXd values_;
    double min_wage_;
};

/// A wage vector w(1..k); every entry strictly positive and finite.
class Contract {
public:
    explicit Contract(Eigen::VectorXd wages);
    Contract(std::initializer_list<double> wages);

    const Eigen::VectorXd& wages() const noexcept { return wages_; }
    double operator[](std::size_t i) const { return wages_(static_cast<Eigen::Index>(i)); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(wages_.size()); }

    friend bool operator==(const Contract& a, const Contract& b) { return a.wages_ == b.wages_; }

private:
    Eigen::VectorXd wages_;
};

enum class UtilityFamily { Crra, Log };

/// Agent utility over wages, restricted to families whose bounded risk
/// aversion (x * u'(x) nondecreasing) can be checked analytically.
///   Crra(rho): u(x) = x^rho, rho in (0, 1]; rho = 1 is risk neutral.
///   Log:       u(x) = ln(x).
class UtilitySpec {
public:
    static UtilitySpec crra(double rho);
    static UtilitySpec log();

    UtilityFamily family() const noexcept { return family_; }
    double rho() const noexcept { return rho_; }
    bool is_risk_neutral() const noexcept { return family_ == UtilityFamily::Crra && rho_ == 1.0; }

    /// Generic in the scalar so autodiff types can differentiate it.
    template <typename Scalar>
    Scalar value(const Scalar& x) const {
        using std::log;
        using std::pow;
        if (family_ == UtilityFamily::Log) return log(x);
        return pow(x, rho_);
    }

    double derivative(double x) const;

    /// u applied coefficient-wise.
    template <typename Derived>
    Eigen::VectorXd apply(const Eigen::MatrixBase<Derived>& wages) const {
        return wages.unaryExpr([this](double x) { return value(x); });
    }

private:
    UtilitySpec(UtilityFamily family, double rho) : family_(family), rho_(rho) {}

    UtilityFamily family_;
    double rho_;
};

/// Hidden ground truth: utility, and for efforts e = 1..n a cost c(e) and an
/// outcome distribution f_e (row e-1 of `distributions`). The reject level
/// e = 0 is implicit: zero utility for the agent and zero value for the principal.
class AgentInstance {
public:
    /// Throws InvalidInstance unless rows are probability vectors, costs are
    /// nonnegative, and the rows form a first-order stochastic dominance chain.
    AgentInstance(UtilitySpec utility, Eigen::MatrixXd distributions, Eigen::VectorXd costs);

    const UtilitySpec& utility() const noexcept { return utility_; }
    const Eigen::MatrixXd& distributions() const noexcept { return distributions_; }
    const Eigen::VectorXd& costs() const noexcept { return costs_; }
    std::size_t effort_count() const noexcept { return static_cast<std::size_t>(costs_.size()); }
    std::size_t outcome_count() const noexcept { return static_cast<std::size_t>(distributions_.cols()); }

    /// f_e for e in [1, n]; the reject level has the zero vector.
    Eigen::VectorXd distribution(std::size_t effort) const;
    double cost(std::size_t effort) const;

private:
    UtilitySpec utility_;
    Eigen::MatrixXd distributions_;
    Eigen::VectorXd costs_;
};

/// Upper-tail sums T(e, j) = sum_{i >= j} f_e(i), one row per effort.
template <typename Derived>
Eigen::MatrixXd tail_sums(const Eigen::MatrixBase<Derived>& distributions) {
    const Eigen::Index cols = distributions.cols();
    Eigen::MatrixXd tails(distributions.rows(), cols);
    if (cols == 0) return tails;
    tails.col(cols - 1) = distributions.col(cols - 1);
    for (Eigen::Index j = cols - 2; j >= 0; --j) tails.col(j) = tails.col(j + 1) + distributions.col(j);
    return tails;
}

/// (higher effort, lower effort, outcome), all 1-based.
struct FosdViolation {
    std::size_t higher;
    std::size_t lower;
    std::size_t outcome;

    friend bool operator==(const FosdViolation&, const FosdViolation&) = default;
};

struct FosdReport {
    bool holds = true;
    std::optional<FosdViolation> first_violation;
};

/// Checks the tail-sum dominance chain over every ordered pair of effort
/// rows. Pairs are scanned by increasing higher effort, then lower effort,
/// then outcome.
FosdReport validate_fosd(const Eigen::MatrixXd& distributions);
FosdReport validate_fosd(const AgentInstance& agent);

/// x * u'(x) nondecreasing on the probe grid within 1e-10. The grid must be
/// strictly positive and sorted.
bool validate_bra(const UtilitySpec& utility, const std::vector<double>& probe_grid);

/// sum f_e * a >= sum f_e' * a - 1e-12 for every e > e', where a must be
/// nondecreasing (throws PreconditionError otherwise).
bool dominance_expectation_check(const AgentInstance& agent, const Eigen::VectorXd& a);

}  // namespace pac
