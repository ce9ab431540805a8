#include "pac/experiment.hpp"

#include "pac/agent_response.hpp"

#include <chrono>
#include <future>
#include <ostream>
#include <sstream>

namespace pac {

using nlohmann::json;

namespace {

std::vector<double> as_vector(const Eigen::VectorXd& v) { return {v.begin(), v.end()}; }

const char* sampling_name(SamplingMode mode) {
    return mode == SamplingMode::PerRound ? "per-round" : "aggregated";
}

SamplingMode sampling_from_name(const std::string& name) {
    if (name == "per-round") return SamplingMode::PerRound;
    if (name == "aggregated") return SamplingMode::Aggregated;
    throw std::runtime_error("unknown sampling mode " + name);
}

}  // namespace

double learning_eta(double epsilon, std::size_t outcome_count, double cap) {
    return epsilon / (4.0 * static_cast<double>(outcome_count) * cap);
}

RunReport run_learn(const Instance& instance, const LearnConfig& config, EliminationTrace* trace) {
    const auto start = std::chrono::steady_clock::now();
    const OutcomeModel& outcomes = instance.outcomes;
    const std::size_t k = outcomes.outcome_count();
    if (!(config.epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");

    const double eta = config.eta_override.value_or(learning_eta(config.epsilon, k, outcomes.cap()));
    if (!(eta > 0.0 && eta < max_eta(k))) {
        std::ostringstream message;
        message << "eta = " << eta << " violates eta < 1/(4k) = " << max_eta(k);
        if (!config.eta_override) message << "; epsilon must be below H = " << outcomes.cap();
        throw PreconditionError(message.str());
    }

    const DiscretizedSpace space = enumerate_space(outcomes, eta, {config.prune_monotone_smooth});
    const Environment environment(instance.agent, outcomes);
    const ArmSet arms = environment.make_arm_set(space, config.sampling);

    const double target = config.epsilon / 2.0;
    const std::uint64_t budget = total_sample_count(arms.size, arms.range(), target, config.delta);
    EliminationResult result =
        median_elimination(arms, target, config.delta, {config.seed, budget, config.execution});

    RunReport report;
    report.instance_hash = content_hash(to_json(instance));
    report.config = config;
    report.eta = eta;
    report.eta_from_epsilon = !config.eta_override.has_value();
    report.outcome_count = k;
    report.cap = outcomes.cap();
    report.min_wage = outcomes.min_wage();
    report.arms = space.size();
    report.learned_index = result.best_arm;
    report.learned_code = space.code(result.best_arm);
    report.learned_wages = space.contract(result.best_arm).wages();
    report.learned_profit = exact_profit(instance.agent, outcomes, space.contract(result.best_arm));
    report.samples_consumed = result.trace.total_samples;
    report.predicted_budget = budget;
    if (config.record_timing) {
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (trace != nullptr) *trace = std::move(result.trace);
    return report;
}

json to_json(const RunReport& report) {
    json parameters = {{"epsilon", report.config.epsilon},
                       {"delta", report.config.delta},
                       {"seed", report.config.seed},
                       {"eta", report.eta},
                       {"eta_rule", report.eta_from_epsilon ? "epsilon/(4kH)" : "override"},
                       {"eta_matches_rule",
                        report.eta == learning_eta(report.config.epsilon, report.outcome_count, report.cap)},
                       {"bandit_epsilon", report.config.epsilon / 2.0},
                       {"prune_monotone_smooth", report.config.prune_monotone_smooth},
                       {"sampling", sampling_name(report.config.sampling)},
                       {"k", report.outcome_count},
                       {"H", report.cap},
                       {"w0", report.min_wage}};
    json document = {{"report", "learn"},
                     {"instance_hash", report.instance_hash},
                     {"parameters", std::move(parameters)},
                     {"arms", report.arms},
                     {"learned",
                      {{"index", report.learned_index},
                       {"code", report.learned_code.exponents},
                       {"wages", as_vector(report.learned_wages)}}},
                     {"oracle_mode", true},
                     {"learned_profit", report.learned_profit},
                     {"samples_consumed", report.samples_consumed},
                     {"predicted_budget", report.predicted_budget}};
    if (report.wall_seconds) document["wall_seconds"] = *report.wall_seconds;
    return document;
}

RunReport run_report_from_json(const json& document) {
    try {
        if (document.at("report") != "learn") throw std::runtime_error("not a learn report");
        const json& p = document.at("parameters");
        RunReport report;
        report.instance_hash = document.at("instance_hash").get<std::string>();
        report.config.epsilon = p.at("epsilon").get<double>();
        report.config.delta = p.at("delta").get<double>();
        report.config.seed = p.at("seed").get<std::uint64_t>();
        report.eta = p.at("eta").get<double>();
        report.eta_from_epsilon = p.at("eta_rule") == "epsilon/(4kH)";
        if (!report.eta_from_epsilon) report.config.eta_override = report.eta;
        report.config.prune_monotone_smooth = p.at("prune_monotone_smooth").get<bool>();
        report.config.sampling = sampling_from_name(p.at("sampling").get<std::string>());
        report.outcome_count = p.at("k").get<std::size_t>();
        report.cap = p.at("H").get<double>();
        report.min_wage = p.at("w0").get<double>();
        report.arms = document.at("arms").get<std::size_t>();
        const json& learned = document.at("learned");
        report.learned_index = learned.at("index").get<std::size_t>();
        report.learned_code.exponents = learned.at("code").get<std::vector<std::uint32_t>>();
        const auto wages = learned.at("wages").get<std::vector<double>>();
        report.learned_wages = Eigen::Map<const Eigen::VectorXd>(wages.data(), static_cast<Eigen::Index>(wages.size()));
        report.learned_profit = document.at("learned_profit").get<double>();
        report.samples_consumed = document.at("samples_consumed").get<std::uint64_t>();
        report.predicted_budget = document.at("predicted_budget").get<std::uint64_t>();
        if (document.contains("wall_seconds")) report.wall_seconds = document.at("wall_seconds").get<double>();
        return report;
    } catch (const json::exception& error) {
        throw std::runtime_error(std::string("malformed learn report: ") + error.what());
    }
}

EvaluationReport run_evaluate(const Instance& instance, const RunReport& report, std::size_t resolution) {
    return run_evaluate(instance, report, grid_optimum(instance.agent, instance.outcomes, resolution), resolution);
}

EvaluationReport run_evaluate(const Instance& instance, const RunReport& report, const GridOptimum& optimum,
                              std::size_t resolution) {
    EvaluationReport evaluation;
    evaluation.instance_hash = content_hash(to_json(instance));
    if (evaluation.instance_hash != report.instance_hash) {
        throw std::runtime_error("learn report was produced for instance " + report.instance_hash +
                                 ", not " + evaluation.instance_hash);
    }
    evaluation.epsilon = report.config.epsilon;
    evaluation.optimal_profit = optimum.profit;
    evaluation.optimal_wages = optimum.contract.wages();
    evaluation.learned_profit = exact_profit(instance.agent, instance.outcomes, Contract(report.learned_wages));
    evaluation.regret = std::max(0.0, optimum.profit - evaluation.learned_profit);
    evaluation.slack = grid_slack(instance.outcomes, optimum.step);
    evaluation.success = evaluation.regret <= evaluation.epsilon + evaluation.slack;
    evaluation.cap_binds = optimum.cap_binds;
    evaluation.resolution = resolution;
    return evaluation;
}

json to_json(const EvaluationReport& report) {
    return {{"report", "evaluate"},
            {"oracle_mode", true},
            {"instance_hash", report.instance_hash},
            {"epsilon", report.epsilon},
            {"grid_resolution", report.resolution},
            {"optimal_profit", report.optimal_profit},
            {"optimal_wages", as_vector(report.optimal_wages)},
            {"learned_profit", report.learned_profit},
            {"regret", report.regret},
            {"grid_slack", report.slack},
            {"success", report.success},
            {"cap_binds", report.cap_binds}};
}

std::vector<BatchRow> run_batch(const Instance& instance, const LearnConfig& config, std::uint64_t count,
                                std::size_t resolution) {
    const GridOptimum optimum = grid_optimum(instance.agent, instance.outcomes, resolution);
    std::vector<std::future<BatchRow>> pending;
    pending.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        LearnConfig run_config = config;
        run_config.seed = config.seed + i;
        run_config.record_timing = false;
        pending.push_back(std::async(std::launch::async, [&instance, &optimum, run_config, resolution] {
            const RunReport report = run_learn(instance, run_config);
            const EvaluationReport evaluation = run_evaluate(instance, report, optimum, resolution);
            return BatchRow{run_config.seed,    report.learned_index, evaluation.learned_profit,
                            optimum.profit,     evaluation.regret,    evaluation.success,
                            report.samples_consumed};
        }));
    }
    std::vector<BatchRow> rows;
    rows.reserve(count);
    for (auto& future : pending) rows.push_back(future.get());
    return rows;
}

void write_batch_csv(std::ostream& out, const std::vector<BatchRow>& rows) {
    const auto precision = out.precision(17);
    out << "seed,learned_index,learned_profit,optimal_profit,regret,success,samples\n";
    for (const auto& row : rows) {
        out << row.seed << ',' << row.learned_index << ',' << row.learned_profit << ',' << row.optimal_profit << ','
            << row.regret << ',' << (row.success ? 1 : 0) << ',' << row.samples << '\n';
    }
    out.precision(precision);
}

void write_space_jsonl(std::ostream& out, const DiscretizedSpace& space) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << json{{"index", i}, {"code", space.code(i).exponents}, {"wages", as_vector(space.contract(i).wages())}}
                   .dump()
            << '\n';
    }
}

}  // namespace pac
