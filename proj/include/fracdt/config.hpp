#pragma once

#include "fracdt/lacunary.hpp"
#include "fracdt/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fracdt {

using Json = nlohmann::json;

class ConfigError : public Error {
public:
    using Error::Error;
};

const std::vector<std::string>& experiment_ids();
bool is_experiment(const std::string& id);

/// Full default configuration of an experiment; every accepted key appears here.
Json default_config(const std::string& id);

struct ExperimentConfig {
    std::string id;
    std::uint64_t seed = 0;
    /// Defaults merged with the user file.
    Json doc;
    /// Directory of the config file; relative paths resolve against it.
    std::filesystem::path base_dir;

    const Json& section(const std::string& name) const;
};

/// Merges `user` over the defaults of its "experiment" and rejects unknown
/// keys and type mismatches.
ExperimentConfig parse_config(const Json& user, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);
/// Hash of the merged document (compact dump) and the seed.
std::string config_hash(const ExperimentConfig& cfg);

Grid grid_from(const Json& j);

/// {type: geometric | perturbed | list, lambda, j_min, j_max, base, terms}.
LacunarySequence sequence_from(const Json& j);

/// {type: ones | zeros | random | alternating | power | alternating_power | list,
///  amplitude, s, values} over the index range of seq.
WeightSequence weights_from(const Json& j, const LacunarySequence& seq, std::mt19937_64& rng);

double number(const Json& j, const std::string& key);
long integer(const Json& j, const std::string& key);
std::vector<double> numbers(const Json& j, const std::string& key);

}  // namespace fracdt
