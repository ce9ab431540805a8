#pragma once

#include "pac/bandit.hpp"
#include "pac/contract_space.hpp"
#include "pac/environment.hpp"
#include "pac/instance_io.hpp"
#include "pac/oracle.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pac {

/// eta = epsilon / (4 k H): the discretization scale at which the rounding
/// loss 2kH eta equals epsilon / 2.
double learning_eta(double epsilon, std::size_t outcome_count, double cap);

struct LearnConfig {
    double epsilon = 0.1;
    double delta = 0.1;
    std::uint64_t seed = 0;
    /// Replaces epsilon / (4kH); still subject to eta < 1/(4k).
    std::optional<double> eta_override;
    bool prune_monotone_smooth = false;
    SamplingMode sampling = SamplingMode::Aggregated;
    SamplingExecution execution = SamplingExecution::Sequential;
    /// Include wall time in the report (makes reports run-dependent).
    bool record_timing = false;
};

struct RunReport {
    std::string instance_hash;
    LearnConfig config;
    double eta = 0.0;
    bool eta_from_epsilon = true;
    std::size_t outcome_count = 0;
    double cap = 0.0;
    double min_wage = 0.0;
    std::size_t arms = 0;
    std::size_t learned_index = 0;
    CoarseCode learned_code;
    Eigen::VectorXd learned_wages;
    /// V of the learned contract, computed by opening the instance in oracle mode.
    double learned_profit = 0.0;
    std::uint64_t samples_consumed = 0;
    std::uint64_t predicted_budget = 0;
    std::optional<double> wall_seconds;
};

/// Discretize at eta = epsilon / (4kH) (or the override), then run median
/// elimination with (epsilon / 2, delta) against the hidden agent. Throws
/// PreconditionError when eta >= 1/(4k), i.e. when epsilon >= H without an override.
RunReport run_learn(const Instance& instance, const LearnConfig& config, EliminationTrace* trace = nullptr);

nlohmann::json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& document);

struct EvaluationReport {
    std::string instance_hash;
    double epsilon = 0.0;
    double optimal_profit = 0.0;
    Eigen::VectorXd optimal_wages;
    double learned_profit = 0.0;
    double regret = 0.0;  ///< max(0, V* - V(learned))
    double slack = 0.0;   ///< 2 k H h
    bool success = false; ///< regret <= epsilon + slack
    bool cap_binds = false;
    std::size_t resolution = 0;
};

/// Compares a learned contract against the grid optimum over the learnable
/// class. Throws std::runtime_error if the report belongs to another instance.
EvaluationReport run_evaluate(const Instance& instance, const RunReport& report, std::size_t resolution);
EvaluationReport run_evaluate(const Instance& instance, const RunReport& report, const GridOptimum& optimum,
                              std::size_t resolution);

nlohmann::json to_json(const EvaluationReport& report);

struct BatchRow {
    std::uint64_t seed = 0;
    std::size_t learned_index = 0;
    double learned_profit = 0.0;
    double optimal_profit = 0.0;
    double regret = 0.0;
    bool success = false;
    std::uint64_t samples = 0;
};

/// Learn + evaluate for seeds first_seed .. first_seed + count - 1, run
/// concurrently; rows come back in seed order.
std::vector<BatchRow> run_batch(const Instance& instance, const LearnConfig& config, std::uint64_t count,
                                std::size_t resolution);

void write_batch_csv(std::ostream& out, const std::vector<BatchRow>& rows);

/// One JSON object per line: {"index", "code", "wages"}.
void write_space_jsonl(std::ostream& out, const DiscretizedSpace& space);

}  // namespace pac
