#include "pac/instance_io.hpp"

#include "pac/rng.hpp"

#include <openssl/sha.h>

#include <array>
#include <cmath>
#include <fstream>
#include <optional>

namespace pac {

using nlohmann::json;

namespace {

std::optional<double> number_at(const json& parent, const char* key, const std::string& path,
                                std::vector<Violation>& violations) {
    if (!parent.contains(key)) {
        violations.push_back({"missing_field", path + "/" + key, "required field is missing"});
        return std::nullopt;
    }
    if (!parent.at(key).is_number()) {
        violations.push_back({"wrong_type", path + "/" + key, "expected a number"});
        return std::nullopt;
    }
    return parent.at(key).get<double>();
}

std::optional<Eigen::VectorXd> vector_at(const json& parent, const char* key, const std::string& path,
                                         std::vector<Violation>& violations) {
    if (!parent.contains(key)) {
        violations.push_back({"missing_field", path + "/" + key, "required field is missing"});
        return std::nullopt;
    }
    const json& node = parent.at(key);
    if (!node.is_array()) {
        violations.push_back({"wrong_type", path + "/" + key, "expected an array of numbers"});
        return std::nullopt;
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number()) {
            violations.push_back({"wrong_type", path + "/" + key + "/" + std::to_string(i), "expected a number"});
            return std::nullopt;
        }
        values(static_cast<Eigen::Index>(i)) = node[i].get<double>();
    }
    return values;
}

std::optional<UtilitySpec> utility_at(const json& document, std::vector<Violation>& violations) {
    if (!document.contains("utility") || !document.at("utility").is_object()) {
        violations.push_back({"missing_field", "/utility", "utility object is required"});
        return std::nullopt;
    }
    const json& node = document.at("utility");
    const std::string family = node.value("family", "");
    if (family == "log") return UtilitySpec::log();
    if (family == "crra") {
        const auto rho = number_at(node, "rho", "/utility", violations);
        if (!rho) return std::nullopt;
        if (!(*rho > 0.0 && *rho <= 1.0)) {
            violations.push_back({"bra_violation", "/utility/rho", "CRRA exponent must lie in (0, 1]"});
            return std::nullopt;
        }
        return UtilitySpec::crra(*rho);
    }
    violations.push_back({"unknown_family", "/utility/family", "family must be \"crra\" or \"log\""});
    return std::nullopt;
}

void absorb(std::vector<Violation>& into, const InvalidInstance& error) {
    into.insert(into.end(), error.violations().begin(), error.violations().end());
}

}  // namespace

Instance parse_instance(const json& document) {
    std::vector<Violation> violations;
    if (!document.is_object()) throw InvalidInstance({{"wrong_type", "", "instance must be a JSON object"}});

    const auto pi = vector_at(document, "pi", "", violations);
    const auto w0 = number_at(document, "w0", "", violations);
    const auto utility = utility_at(document, violations);

    std::optional<OutcomeModel> outcomes;
    if (pi) {
        // Without w0, a placeholder still lets pi be checked.
        try {
            outcomes.emplace(*pi, w0.value_or(1.0));
        } catch (const InvalidInstance& error) {
            absorb(violations, error);
        }
    }

    Eigen::MatrixXd distributions;
    Eigen::VectorXd costs;
    bool efforts_ok = false;
    if (!document.contains("efforts") || !document.at("efforts").is_array()) {
        violations.push_back({"missing_field", "/efforts", "efforts array is required"});
    } else {
        const json& efforts = document.at("efforts");
        efforts_ok = true;
        const auto k = pi ? pi->size() : Eigen::Index{0};
        distributions.resize(static_cast<Eigen::Index>(efforts.size()), k);
        costs.resize(static_cast<Eigen::Index>(efforts.size()));
        for (std::size_t e = 0; e < efforts.size(); ++e) {
            const std::string path = "/efforts/" + std::to_string(e);
            if (!efforts[e].is_object()) {
                violations.push_back({"wrong_type", path, "effort must be an object"});
                efforts_ok = false;
                continue;
            }
            const auto cost = number_at(efforts[e], "cost", path, violations);
            const auto dist = vector_at(efforts[e], "dist", path, violations);
            if (!cost || !dist) {
                efforts_ok = false;
                continue;
            }
            if (dist->size() != k) {
                violations.push_back({"shape_mismatch", path + "/dist", "distribution length must equal len(pi)"});
                efforts_ok = false;
                continue;
            }
            costs(static_cast<Eigen::Index>(e)) = *cost;
            distributions.row(static_cast<Eigen::Index>(e)) = dist->transpose();
        }
    }

    std::optional<AgentInstance> agent;
    if (utility && efforts_ok && pi) {
        try {
            agent.emplace(*utility, distributions, costs);
        } catch (const InvalidInstance& error) {
            absorb(violations, error);
        }
    }
    if (!violations.empty()) throw InvalidInstance(std::move(violations));
    return Instance{std::move(*outcomes), std::move(*agent)};
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path.string());
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& error) {
        throw InvalidInstance({{"malformed_json", "", error.what()}});
    }
    return parse_instance(document);
}

json to_json(const UtilitySpec& utility) {
    if (utility.family() == UtilityFamily::Log) return {{"family", "log"}};
    return {{"family", "crra"}, {"rho", utility.rho()}};
}

json to_json(const Instance& instance) {
    const auto& pi = instance.outcomes.values();
    json efforts = json::array();
    for (std::size_t e = 1; e <= instance.agent.effort_count(); ++e) {
        const Eigen::VectorXd f = instance.agent.distribution(e);
        efforts.push_back({{"cost", instance.agent.cost(e)}, {"dist", std::vector<double>(f.begin(), f.end())}});
    }
    return {{"pi", std::vector<double>(pi.begin(), pi.end())},
            {"w0", instance.outcomes.min_wage()},
            {"utility", to_json(instance.agent.utility())},
            {"efforts", std::move(efforts)}};
}

std::string content_hash(const json& document) {
    const std::string canonical = document.dump();
    std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
    SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), digest.data());
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * digest.size());
    for (const unsigned char byte : digest) {
        hex.push_back(kHex[byte >> 4]);
        hex.push_back(kHex[byte & 0x0f]);
    }
    return hex;
}

json violation_report(const InvalidInstance& error) {
    json violations = json::array();
    for (const auto& v : error.violations()) {
        violations.push_back({{"code", v.code}, {"path", v.path}, {"message", v.message}});
    }
    return {{"valid", false}, {"violations", std::move(violations)}};
}

Instance generate_instance(const GeneratorOptions& options) {
    if (options.outcomes == 0 || options.efforts == 0) throw PreconditionError("k and n must be at least 1");
    if (!(options.cap > 0.0)) throw PreconditionError("cap must be positive");
    if (!(options.min_wage_fraction > 0.0)) throw PreconditionError("minimum wage fraction must be positive");
    if (!(options.max_shift >= 0.0 && options.max_shift <= 1.0)) throw PreconditionError("max shift must lie in [0, 1]");

    Rng rng = substream(options.seed, {0x696e7374616e6365ULL});
    const auto k = static_cast<Eigen::Index>(options.outcomes);
    const auto n = static_cast<Eigen::Index>(options.efforts);

    Eigen::VectorXd pi(k);
    double running = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        running += 0.2 + uniform01(rng);
        pi(i) = running;
    }
    pi *= options.cap / running;
    pi(k - 1) = options.cap;
    const double w0 = options.min_wage_fraction * pi(0);

    Eigen::MatrixXd distributions(n, k);
    Eigen::RowVectorXd f(k);
    for (Eigen::Index j = 0; j < k; ++j) f(j) = -std::log(1.0 - uniform01(rng));
    f /= f.sum();
    distributions.row(0) = f;
    for (Eigen::Index e = 1; e < n; ++e) {
        for (Eigen::Index j = k - 2; j >= 0; --j) {
            const double moved = options.max_shift * uniform01(rng) * f(j);
            f(j) -= moved;
            f(j + 1) += moved;
        }
        f /= f.sum();
        distributions.row(e) = f;
    }

    const UtilitySpec& u = options.utility;
    const double scale = 0.5 * (u.value(options.cap) - u.value(w0)) / static_cast<double>(n);
    Eigen::VectorXd costs(n);
    double cost = 0.0;
    for (Eigen::Index e = 0; e < n; ++e) {
        cost += scale * uniform01(rng);
        costs(e) = cost;
    }
    return Instance{OutcomeModel(pi, w0), AgentInstance(u, distributions, costs)};
}

}  // namespace pac
