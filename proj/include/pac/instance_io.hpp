#pragma once

#include "pac/domain.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace pac {

/// A complete problem: the principal's outcome model and the hidden agent.
struct Instance {
    OutcomeModel outcomes;
    AgentInstance agent;
};

/// Reads the instance schema
///   {"pi": [...], "w0": x, "utility": {"family": "crra", "rho": r} | {"family": "log"},
///    "efforts": [{"cost": c, "dist": [...]}, ...]}
/// and runs every validator. All problems found are reported together
/// through InvalidInstance.
Instance parse_instance(const nlohmann::json& document);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json to_json(const Instance& instance);
nlohmann::json to_json(const UtilitySpec& utility);

/// Hex SHA-256 of the compact, key-sorted serialization.
std::string content_hash(const nlohmann::json& document);

/// {"valid": false, "violations": [{"code", "path", "message"}, ...]}
nlohmann::json violation_report(const InvalidInstance& error);

struct GeneratorOptions {
    std::size_t outcomes = 2;
    std::size_t efforts = 2;
    std::uint64_t seed = 0;
    UtilitySpec utility = UtilitySpec::crra(0.5);
    double cap = 2.0;
    /// w0 as a fraction of pi(1).
    double min_wage_fraction = 0.1;
    /// Upper limit on the fraction of an outcome's mass moved one step up per effort level.
    double max_shift = 0.6;
};

/// Random valid instance: strictly increasing pi with pi(k) = cap, a
/// dominance chain built by moving mass from each outcome to the next one
/// up, and nondecreasing costs scaled to the agent's utility range.
/// Identical options give identical instances.
Instance generate_instance(const GeneratorOptions& options);

}  // namespace pac
