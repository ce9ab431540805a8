// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include "pac/agent_response.hpp"
#include "pac/bandit.hpp"
#include "pac/contract_space.hpp"
#include "pac/environment.hpp"
#include "pac/experiment.hpp"
#include "pac/oracle.hpp"
#include "support.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace pac;

namespace {

constexpr std::size_t kCorpusInstances = 500;
constexpr std::size_t kContractsPerInstance = 20;
constexpr double kRegretTolerance = 1e-9;
constexpr double kGapTolerance = -1e-12;
constexpr std::size_t kGhTriples = 10'000;
constexpr std::size_t kSizeCombinations = 100;
constexpr double kDecodeConstant = 4.0;
constexpr double kEndToEndEpsilon = 0.25;
constexpr double kEndToEndDelta = 0.1;
constexpr std::uint64_t kEndToEndSeeds = 40;
constexpr std::size_t kEndToEndGrid = 400;
constexpr double kEndToEndSuccess = 0.9;
constexpr std::size_t kBenchArms = 10;
constexpr double kBenchEpsilon = 0.1;
constexpr double kBenchDelta = 0.1;
constexpr std::uint64_t kBenchRuns = 200;
constexpr double kConfidence = 0.99;
constexpr std::size_t kShapeInstances = 50;
constexpr std::size_t kShapeGrid = 200;
constexpr std::uint64_t kFidelityRounds = 100'000;
constexpr double kMeanSigmas = 4.0;

struct Outcome {
    bool pass;
    std::string detail;
};

std::vector<double> corpus_etas(std::size_t k) { return {0.01, 0.05, max_eta(k) - 1e-6}; }

Outcome regret_under_rounding() {
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::size_t from_rejection = 0;
    double worst = -1e300;
    for (std::uint64_t seed = 0; seed < kCorpusInstances; ++seed) {
        const Instance instance = testing::random_instance(seed);
        const auto& outcomes = instance.outcomes;
        const double k = static_cast<double>(outcomes.outcome_count());
        Rng rng = substream(seed, {1});
        for (std::size_t c = 0; c < kContractsPerInstance; ++c) {
            const Contract w = testing::random_learnable_contract(outcomes, rng);
            const double before = exact_profit(instance.agent, outcomes, w);
            const bool rejected = best_response(instance.agent, w).effort == 0;
            for (const double eta : corpus_etas(outcomes.outcome_count())) {
                const RoundedContract rounded = round_to_coarse(outcomes, eta, w);
                const double after = exact_profit(instance.agent, outcomes, rounded.contract);
                const double excess = before - after - 2.0 * k * outcomes.cap() * eta;
                worst = std::max(worst, excess);
                ++checks;
                if (excess > kRegretTolerance) {
                    ++violations;
                    from_rejection += rejected ? 1 : 0;
                }
            }
        }
    }
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "%zu checks, %zu violations (%zu where w is rejected and the rounded contract is not), max excess %.3e",
                  checks, violations, from_rejection, worst);
    return {violations == 0, detail};
}

Outcome effort_monotonicity() {
    std::size_t checks = 0;
    std::size_t violations = 0;
    for (std::uint64_t seed = 0; seed < kCorpusInstances; ++seed) {
        const Instance instance = testing::random_instance(seed);
        const auto& outcomes = instance.outcomes;
        Rng rng = substream(seed, {1});
        for (std::size_t c = 0; c < kContractsPerInstance; ++c) {
            const Contract w = testing::random_learnable_contract(outcomes, rng);
            const std::size_t effort = best_response(instance.agent, w).effort;
            for (const double eta : corpus_etas(outcomes.outcome_count())) {
                const RoundedContract rounded = round_to_coarse(outcomes, eta, w);
                ++checks;
                if (best_response(instance.agent, rounded.contract).effort < effort) ++violations;
            }
        }
    }
    return {violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) + " violations"};
}

Outcome grossman_hart() {
    Rng rng = substream(3);
    double worst = 1e300;
    for (std::size_t t = 0; t < kGhTriples; ++t) {
        const Instance instance = testing::random_instance(100'000 + t);
        const std::size_t k = instance.outcomes.outcome_count();
        const double lo = instance.outcomes.min_wage();
        const double hi = 2.0 * instance.outcomes.cap();
        const Contract w1 = testing::random_contract(k, lo, hi, rng);
        const Contract w2 = testing::random_contract(k, lo, hi, rng);
        worst = std::min(worst, grossman_hart_gap(instance.agent, w1, w2));
    }
    char detail[120];
    std::snprintf(detail, sizeof detail, "%zu triples, min gap %.3e", kGhTriples, worst);
    return {worst >= kGapTolerance, detail};
}

Outcome discretization_size() {
    Rng rng = substream(4);
    std::size_t failures = 0;
    double worst_ratio = 0.0;
    std::size_t largest = 0;
    for (std::size_t c = 0; c < kSizeCombinations; ++c) {
        const std::size_t k = 1 + c % 4;
        Eigen::VectorXd pi(static_cast<Eigen::Index>(k));
        double running = 0.0;
        for (auto& v : pi) v = running += 0.1 + uniform01(rng);
        const double cap = pi(pi.size() - 1);
        const double w0 = cap * (0.05 + 0.9 * uniform01(rng));
        // Keep the total exponent small enough that k = 4 stays enumerable.
        const double spread = std::log(2.0 * cap / w0);
        const double eta_floor = spread / (k == 4 ? 40.0 : 150.0);
        const double eta = eta_floor + (max_eta(k) - eta_floor) * uniform01(rng);
        if (!(eta < max_eta(k))) continue;
        const OutcomeModel outcomes(pi, w0);
        const auto bound = std::pow(std::floor(spread / eta) + 1.0, static_cast<double>(k));
        for (const bool prune : {false, true}) {
            const DiscretizedSpace space = enumerate_space(outcomes, eta, {prune});
            const double size = static_cast<double>(space.size());
            largest = std::max(largest, space.size());
            const double ratio = static_cast<double>(space.decode_steps()) / (static_cast<double>(k) * size);
            worst_ratio = std::max(worst_ratio, ratio);
            if (size > bound || ratio > kDecodeConstant) ++failures;
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "%zu combinations x {full, pruned}, %zu failures, max steps/(k M) %.3f, largest M %zu",
                  kSizeCombinations, failures, worst_ratio, largest);
    return {failures == 0, detail};
}

Outcome end_to_end() {
    const Instance a = testing::instance_a();
    LearnConfig config;
    config.epsilon = kEndToEndEpsilon;
    config.delta = kEndToEndDelta;
    config.seed = 1;
    const double eta = learning_eta(config.epsilon, 2, a.outcomes.cap());
    const DiscretizedSpace space = enumerate_space(a.outcomes, eta);
    const std::uint64_t budget = total_sample_count(space.size(), 3.0 * a.outcomes.cap(), config.epsilon / 2.0, config.delta);
    std::printf("  instance A: eta = %.6f, |W_eta| = %zu arms, budget per run = %llu samples\n", eta, space.size(),
                static_cast<unsigned long long>(budget));
    std::fflush(stdout);

    const auto rows = run_batch(a, config, kEndToEndSeeds, kEndToEndGrid);
    std::size_t successes = 0;
    double worst = 0.0;
    bool budget_ok = true;
    for (const auto& row : rows) {
        successes += row.success ? 1 : 0;
        worst = std::max(worst, row.regret);
        budget_ok = budget_ok && row.samples == budget;
    }
    const double fraction = static_cast<double>(successes) / static_cast<double>(rows.size());
    const double slack = grid_slack(a.outcomes, (a.outcomes.cap() - a.outcomes.min_wage()) / (kEndToEndGrid - 1.0));
    char detail[200];
    std::snprintf(detail, sizeof detail, "%zu/%zu runs within eps + slack (%.4f + %.4f), max regret %.4f, optimum %.6f",
                  successes, rows.size(), kEndToEndEpsilon, slack, worst, rows.front().optimal_profit);
    return {fraction >= kEndToEndSuccess && budget_ok, detail};
}

Outcome median_elimination_pac() {
    // One arm at 0.7, nine at 0.7 - 2 eps.
    std::vector<double> means(kBenchArms, 0.7 - 2.0 * kBenchEpsilon);
    const std::size_t best = 6;
    means[best] = 0.7;
    ArmSet arms;
    arms.size = kBenchArms;
    arms.lo = 0.0;
    arms.hi = 1.0;
    arms.sample = [means](std::size_t arm, Rng& rng) { return uniform01(rng) < means[arm] ? 1.0 : 0.0; };
    const std::uint64_t closed_form = total_sample_count(kBenchArms, 1.0, kBenchEpsilon, kBenchDelta);

    std::uint64_t failures = 0;
    bool halving = true;
    bool totals = true;
    for (std::uint64_t seed = 0; seed < kBenchRuns; ++seed) {
        const auto result = median_elimination(arms, kBenchEpsilon, kBenchDelta, {.seed = seed});
        if (means[result.best_arm] < means[best] - kBenchEpsilon) ++failures;
        std::uint64_t counted = 0;
        for (const auto& round : result.trace.rounds) {
            halving = halving && round.survivors_after == (round.plan.survivors + 1) / 2;
            counted += round.plan.survivors * round.plan.samples_per_arm;
        }
        totals = totals && counted == closed_form && result.trace.total_samples == closed_form;
    }
    // Reject "failure rate <= delta" when P(X >= failures | p = delta) < 1 - confidence.
    const boost::math::binomial_distribution<double> null_model(static_cast<double>(kBenchRuns), kBenchDelta);
    const double p_value = failures == 0 ? 1.0 : boost::math::cdf(boost::math::complement(null_model, failures - 1.0));
    char detail[200];
    std::snprintf(detail, sizeof detail, "%llu/%llu failures (p = %.3g), halving %s, totals %s (%llu samples/run)",
                  static_cast<unsigned long long>(failures), static_cast<unsigned long long>(kBenchRuns), p_value,
                  halving ? "ok" : "broken", totals ? "exact" : "mismatch", static_cast<unsigned long long>(closed_form));
    return {p_value >= 1.0 - kConfidence && halving && totals, detail};
}

Instance risk_neutral_instance(std::uint64_t seed) {
    Rng rng = substream(seed, {7});
    GeneratorOptions options;
    options.outcomes = 2 + rng() % 3;
    options.efforts = 1 + rng() % 4;
    options.utility = UtilitySpec::crra(1.0);
    options.cap = 1.0 + 2.0 * uniform01(rng);
    options.min_wage_fraction = 0.05 + 0.5 * uniform01(rng);
    options.seed = rng();
    const Instance base = generate_instance(options);
    // Costs no lower than E_e[pi] - pi(1) + w0 keep the optimal fixed-margin contract above w0.
    const auto& outcomes = base.outcomes;
    const Eigen::VectorXd expected = base.agent.distributions() * outcomes.values();
    Eigen::VectorXd costs(expected.size());
    double floor = 0.0;
    for (Eigen::Index e = 0; e < expected.size(); ++e) {
        floor = std::max(floor, expected(e) - outcomes.value(0) + outcomes.min_wage() + 0.3 * uniform01(rng));
        costs(e) = floor;
    }
    return Instance{outcomes, AgentInstance(UtilitySpec::crra(1.0), base.agent.distributions(), costs)};
}

Outcome shape_searches() {
    std::size_t two_failures = 0;
    std::size_t neutral_failures = 0;
    double worst_two = 0.0;
    double worst_neutral = 0.0;
    for (std::uint64_t seed = 0; seed < kShapeInstances; ++seed) {
        Rng rng = substream(seed, {8});
        GeneratorOptions options;
        options.outcomes = 2;
        options.efforts = 1 + rng() % 4;
        options.utility = testing::utility_for(rng() % 4);
        options.cap = 0.5 + 3.0 * uniform01(rng);
        options.min_wage_fraction = 0.05 + 0.5 * uniform01(rng);
        options.seed = rng();
        const Instance instance = generate_instance(options);
        const GridOptimum grid = grid_optimum(instance.agent, instance.outcomes, kShapeGrid);
        const TwoOutcomeShape shape = two_outcome_shape_check(instance.agent, instance.outcomes, kShapeGrid);
        const double gap = std::abs(shape.profit - grid.profit);
        const double slack = grid_slack(instance.outcomes, std::max(grid.step, shape.step));
        worst_two = std::max(worst_two, gap / slack);
        if (gap > slack) ++two_failures;
    }
    for (std::uint64_t seed = 0; seed < kShapeInstances; ++seed) {
        const Instance instance = risk_neutral_instance(seed);
        const std::size_t m = instance.outcomes.outcome_count() == 4 ? 30 : 60;
        const GridOptimum grid = grid_optimum(instance.agent, instance.outcomes, m);
        const RiskNeutralShape shape = risk_neutral_shape_check(instance.agent, instance.outcomes, 4 * kShapeGrid);
        const double gap = std::abs(shape.profit - grid.profit);
        const double slack = grid_slack(instance.outcomes, std::max(grid.step, shape.step));
        worst_neutral = std::max(worst_neutral, gap / slack);
        if (gap > slack) ++neutral_failures;
    }
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "two-outcome %zu/%zu mismatches (max gap/slack %.3f), risk-neutral %zu/%zu mismatches (max gap/slack %.3f)",
                  two_failures, kShapeInstances, worst_two, neutral_failures, kShapeInstances, worst_neutral);
    return {two_failures == 0 && neutral_failures == 0, detail};
}

struct FidelityCase {
    Instance instance;
    Contract contract;
};

Outcome environment_fidelity() {
    Eigen::MatrixXd f(3, 3);
    f << 0.5, 0.3, 0.2,
         0.3, 0.4, 0.3,
         0.1, 0.3, 0.6;
    std::vector<FidelityCase> cases;
    cases.push_back({testing::instance_a(), Contract{0.25, 0.64}});
    cases.push_back({Instance{OutcomeModel(Eigen::Vector3d(1.0, 2.0, 3.5), 0.2),
                              AgentInstance(UtilitySpec::log(), f, Eigen::Vector3d(0.0, 0.05, 0.12))},
                     Contract{1.5, 2.2, 3.0}});

    const double critical_limit = 1.0 - kConfidence;
    bool pass = true;
    std::string detail;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& [instance, contract] = cases[c];
        const Environment environment(instance.agent, instance.outcomes);
        const std::size_t effort = best_response(instance.agent, contract).effort;
        const Eigen::VectorXd dist = instance.agent.distribution(effort);
        const std::size_t k = instance.outcomes.outcome_count();

        std::vector<std::uint64_t> counts(k + 1, 0);
        Rng rng = substream(8, {c});
        double sum = 0.0;
        for (std::uint64_t r = 0; r < kFidelityRounds; ++r) {
            const RoundResult result = environment.play(contract, rng);
            ++counts[result.outcome];
            sum += result.net_profit;
        }

        double statistic = 0.0;
        std::size_t cells = 0;
        bool impossible = effort == 0 ? counts[0] != kFidelityRounds : counts[0] != 0;
        for (std::size_t i = 0; i < k; ++i) {
            const double expected = dist(static_cast<Eigen::Index>(i)) * static_cast<double>(kFidelityRounds);
            if (expected == 0.0) {
                impossible = impossible || counts[i + 1] != 0;
                continue;
            }
            const double diff = static_cast<double>(counts[i + 1]) - expected;
            statistic += diff * diff / expected;
            ++cells;
        }
        const double p_value =
            cells > 1 ? boost::math::cdf(boost::math::complement(
                            boost::math::chi_squared_distribution<double>(static_cast<double>(cells - 1)), statistic))
                      : 1.0;

        const Eigen::VectorXd margin = instance.outcomes.values() - contract.wages();
        const double mean = dist.dot(margin);
        const double variance = dist.dot(margin.cwiseProduct(margin)) - mean * mean;
        const double sigma = std::sqrt(variance / static_cast<double>(kFidelityRounds));
        const double exact = exact_profit(instance.agent, instance.outcomes, contract);
        const double z = sigma > 0.0 ? std::abs(sum / kFidelityRounds - exact) / sigma : 0.0;

        pass = pass && !impossible && p_value >= critical_limit && z <= kMeanSigmas;
        char line[160];
        std::snprintf(line, sizeof line, "%scase %zu: effort %zu, chi2 = %.3f (df %zu, p = %.3f), mean off by %.2f sigma",
                      c == 0 ? "" : "; ", c + 1, effort, statistic, cells == 0 ? 0 : cells - 1, p_value, z);
        detail += line;
    }
    return {pass, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"regret bound under rounding", regret_under_rounding},
        {"effort monotonicity under rounding", effort_monotonicity},
        {"Grossman-Hart inequality", grossman_hart},
        {"discretization size and construction cost", discretization_size},
        {"end-to-end learning on instance A", end_to_end},
        {"median elimination PAC bench", median_elimination_pac},
        {"shape searches vs grid oracle", shape_searches},
        {"environment fidelity", environment_fidelity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        const Outcome outcome = criteria[i].second();
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu. %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        failed += outcome.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
