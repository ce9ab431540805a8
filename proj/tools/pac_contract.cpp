// Command-line harness: generate instances, discretize, learn, benchmark.

#include "pac/experiment.hpp"
#include "pac/oracle.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

constexpr int kExitError = 1;
constexpr int kExitRefused = 2;

/// stdout unless a path is given.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn near-optimal contracts for an unknown agent"};
    app.require_subcommand(1);

    std::string instance_path;
    std::string out_path;
    std::uint64_t seed = 0;
    double epsilon = 0.25;
    double delta = 0.1;
    std::size_t grid = 200;
    std::optional<double> eta_override;
    bool prune = false;
    std::string sampling = "aggregated";

    auto add_learning_flags = [&](CLI::App* cmd) {
        cmd->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
        cmd->add_option("--epsilon", epsilon, "Target accuracy")->check(CLI::PositiveNumber);
        cmd->add_option("--delta", delta, "Failure probability")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--seed", seed, "Random seed");
        cmd->add_option("--eta-override", eta_override, "Discretization scale replacing epsilon/(4kH)");
        cmd->add_flag("--prune-monotone-smooth", prune, "Keep only monotone-smooth arms");
        cmd->add_option("--sampling", sampling, "Reward sampling")
            ->check(CLI::IsMember({"aggregated", "per-round"}));
        cmd->add_option("--out", out_path, "Output file (default stdout)");
    };
    auto learn_config = [&] {
        pac::LearnConfig config;
        config.epsilon = epsilon;
        config.delta = delta;
        config.seed = seed;
        config.eta_override = eta_override;
        config.prune_monotone_smooth = prune;
        config.sampling = sampling == "per-round" ? pac::SamplingMode::PerRound : pac::SamplingMode::Aggregated;
        return config;
    };

    // generate
    std::size_t outcomes = 2;
    std::size_t efforts = 2;
    std::string family = "crra";
    double rho = 0.5;
    double cap = 2.0;
    auto* generate = app.add_subcommand("generate", "Write a random valid instance");
    generate->add_option("-k,--outcomes", outcomes, "Number of outcomes")->check(CLI::PositiveNumber);
    generate->add_option("-n,--efforts", efforts, "Number of effort levels")->check(CLI::PositiveNumber);
    generate->add_option("--seed", seed, "Random seed");
    generate->add_option("--utility", family, "Utility family")->check(CLI::IsMember({"crra", "log"}));
    generate->add_option("--rho", rho, "CRRA exponent in (0, 1]");
    generate->add_option("--cap", cap, "Top outcome value H")->check(CLI::PositiveNumber);
    generate->add_option("--out", out_path, "Output file (default stdout)");

    // discretize
    auto* discretize = app.add_subcommand("discretize", "Emit the coarse contract space as JSON lines");
    discretize->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    discretize->add_option("--epsilon", epsilon, "Target accuracy, sets eta = epsilon/(4kH)");
    discretize->add_option("--eta-override", eta_override, "Discretization scale");
    discretize->add_flag("--prune-monotone-smooth", prune, "Keep only monotone-smooth members");
    discretize->add_option("--out", out_path, "Output file (default stdout)");

    auto* learn = app.add_subcommand("learn", "Run median elimination over the coarse space");
    add_learning_flags(learn);
    std::string trace_path;
    bool timing = false;
    learn->add_option("--trace", trace_path, "Write the elimination trace as CSV");
    learn->add_flag("--timing", timing, "Record wall time in the report");

    auto* oracle = app.add_subcommand("oracle", "Grid-search the best learnable contract");
    oracle->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    oracle->add_option("--grid", grid, "Points per axis")->check(CLI::Range(2, 100000));
    oracle->add_option("--out", out_path, "Output file (default stdout)");

    std::string report_path;
    auto* evaluate = app.add_subcommand("evaluate", "Regret of a learned contract against the grid oracle");
    evaluate->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--report", report_path, "Learn report JSON")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--grid", grid, "Points per axis")->check(CLI::Range(2, 100000));
    evaluate->add_option("--out", out_path, "Output file (default stdout)");

    std::uint64_t seeds = 20;
    auto* batch = app.add_subcommand("batch", "Learn and evaluate over consecutive seeds, CSV out");
    add_learning_flags(batch);
    batch->add_option("--seeds", seeds, "Number of seeds, starting at --seed")->check(CLI::PositiveNumber);
    batch->add_option("--grid", grid, "Points per axis")->check(CLI::Range(2, 100000));

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            pac::GeneratorOptions options;
            options.outcomes = outcomes;
            options.efforts = efforts;
            options.seed = seed;
            options.cap = cap;
            options.utility = family == "log" ? pac::UtilitySpec::log() : pac::UtilitySpec::crra(rho);
            Output out(out_path);
            out.stream() << pac::to_json(pac::generate_instance(options)).dump(2) << '\n';
            return 0;
        }

        const pac::Instance instance = pac::load_instance(instance_path);
        Output out(out_path);

        if (discretize->parsed()) {
            const std::size_t k = instance.outcomes.outcome_count();
            const double eta = eta_override.value_or(pac::learning_eta(epsilon, k, instance.outcomes.cap()));
            pac::write_space_jsonl(out.stream(), pac::enumerate_space(instance.outcomes, eta, {prune}));
        } else if (learn->parsed()) {
            pac::LearnConfig config = learn_config();
            config.record_timing = timing;
            pac::EliminationTrace trace;
            const pac::RunReport report = pac::run_learn(instance, config, trace_path.empty() ? nullptr : &trace);
            std::cerr << "arms " << report.arms << ", budget " << report.predicted_budget << " samples\n";
            out.stream() << pac::to_json(report).dump(2) << '\n';
            if (!trace_path.empty()) {
                std::ofstream trace_out(trace_path);
                pac::write_trace_csv(trace_out, trace);
            }
        } else if (oracle->parsed()) {
            const pac::GridOptimum optimum = pac::grid_optimum(instance.agent, instance.outcomes, grid);
            const auto& w = optimum.contract.wages();
            out.stream() << nlohmann::json{{"report", "oracle"},
                                           {"oracle_mode", true},
                                           {"grid_resolution", grid},
                                           {"optimal_wages", std::vector<double>(w.begin(), w.end())},
                                           {"optimal_profit", optimum.profit},
                                           {"grid_step", optimum.step},
                                           {"grid_slack", pac::grid_slack(instance.outcomes, optimum.step)},
                                           {"evaluated", optimum.evaluated},
                                           {"cap_binds", optimum.cap_binds}}
                                .dump(2)
                         << '\n';
        } else if (evaluate->parsed()) {
            const pac::RunReport report = pac::run_report_from_json(read_json(report_path));
            out.stream() << pac::to_json(pac::run_evaluate(instance, report, grid)).dump(2) << '\n';
        } else if (batch->parsed()) {
            const pac::LearnConfig config = learn_config();
            const double eta = config.eta_override.value_or(
                pac::learning_eta(epsilon, instance.outcomes.outcome_count(), instance.outcomes.cap()));
            const pac::DiscretizedSpace space = pac::enumerate_space(instance.outcomes, eta, {prune});
            std::cerr << "arms " << space.size() << ", budget per seed "
                      << pac::total_sample_count(space.size(), 3.0 * instance.outcomes.cap(), epsilon / 2.0, delta)
                      << " samples\n";
            pac::write_batch_csv(out.stream(), pac::run_batch(instance, config, seeds, grid));
        }
    } catch (const pac::InvalidInstance& error) {
        std::cout << pac::violation_report(error).dump(2) << '\n';
        return kExitError;
    } catch (const pac::PreconditionError& error) {
        std::cerr << "refused: " << error.what() << '\n';
        return kExitRefused;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitError;
    }
    return 0;
}
