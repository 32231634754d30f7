#include "fracdt/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace fracdt {

namespace {

const char* kCommon = R"({
  "experiment": "",
  "seed": 20240917,
  "golden_dir": "goldens",
  "spread_factor": 50.0
})";

const std::map<std::string, const char*>& defaults_table() {
    static const std::map<std::string, const char*> table{
        {"l2_bound", R"({
  "grid": {"dim": 1, "extent": 64.0, "points": 1024},
  "alphas": [0.3, 0.5, 0.75, 1.0],
  "sequence": {"type": "geometric", "lambda": 2.0, "j_min": -12, "j_max": 12, "base": 1.0, "terms": []},
  "weights": {"type": "random", "amplitude": 1.0, "s": 1.0, "values": []},
  "trials": 200,
  "tolerance": 1e-10
})"},
        {"kernel_bounds", R"({
  "cases": [
    {"alpha": 0.3, "dim": 1, "points": 65536, "points_per_scale": 128.0},
    {"alpha": 0.5, "dim": 1, "points": 16384, "points_per_scale": 32.0},
    {"alpha": 0.75, "dim": 1, "points": 4096, "points_per_scale": 16.0},
    {"alpha": 1.0, "dim": 1, "points": 1024, "points_per_scale": 16.0},
    {"alpha": 0.5, "dim": 2, "points": 1024, "points_per_scale": 16.0},
    {"alpha": 0.75, "dim": 2, "points": 512, "points_per_scale": 8.0},
    {"alpha": 1.0, "dim": 2, "points": 256, "points_per_scale": 8.0}
  ],
  "t": {"min": 0.01, "max": 10.0, "count": 7},
  "interior": 0.25,
  "tolerances": {"periodization": 1e-3, "resolution": 1e-10},
  "oracle": {"alpha": 0.5, "dim": 1, "expected": 0.63661977236758134, "tolerance": 1e-4}
})"},
        {"cz_bounds", R"({
  "grid": {"dim": 1, "extent": 65536.0, "points": 1048576},
  "alpha": 0.5,
  "sequence": {"type": "geometric", "lambda": 1.0905077326652577, "j_min": 0, "j_max": 101, "base": 0.5, "terms": []},
  "weights": {"type": "random", "amplitude": 1.0, "s": 1.0, "values": []},
  "widths": [1, 2, 5, 10, 20, 50, 100],
  "n1": 0,
  "min_radius_cells": 4.0,
  "interior": 0.25,
  "tolerances": {"periodization": 1e-3, "resolution": 1e-10}
})"},
        {"cotlar", R"({
  "grid": {"dim": 1, "extent": 64.0, "points": 2048},
  "alpha": 0.5,
  "sequence": {"type": "geometric", "lambda": 1.5, "j_min": -33, "j_max": 33, "base": 1.0, "terms": []},
  "weights": {"type": "random", "amplitude": 1.0, "s": 1.0, "values": []},
  "horizons": [4, 8, 16, 32],
  "q": 2.0,
  "trials": 10,
  "bandwidth": 32,
  "numerator": "inclusive",
  "spread_factor": 10.0
})"},
        {"weak_type", R"({
  "grid": {"dim": 1, "extent": 8192.0, "points": 131072},
  "alpha": 0.5,
  "sequence": {"type": "geometric", "lambda": 2.0, "j_min": -40, "j_max": 40, "base": 1.0, "terms": []},
  "weights": {"type": "random", "amplitude": 1.0, "s": 1.0, "values": []},
  "horizon": {"m0": 4, "m_max": 32, "tol": 1e-6},
  "sigma": {"start_fraction": 0.1, "decades": 3.0, "count": 13},
  "betas": [0.0, -0.5],
  "spike_at": 0.0
})"},
        {"weighted_lp", R"({
  "grid": {"dim": 1, "extent": 256.0, "points": 16384},
  "alpha": 0.5,
  "sequence": {"type": "geometric", "lambda": 2.0, "j_min": -30, "j_max": 30, "base": 1.0, "terms": []},
  "weights": {"type": "random", "amplitude": 1.0, "s": 1.0, "values": []},
  "horizon": {"m0": 4, "m_max": 16, "tol": 1e-6},
  "cases": [
    {"p": 2.0, "beta": 0.0},
    {"p": 2.0, "beta": 0.5},
    {"p": 2.0, "beta": -0.5},
    {"p": 1.5, "beta": 0.25},
    {"p": 3.0, "beta": 1.0}
  ],
  "scales": [0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
  "center": 0.0
})"},
        {"bmo_check", R"({
  "grid": {"dim": 1, "extent": 64.0, "points": 4096},
  "alpha": 0.5,
  "sequence": {"type": "geometric", "lambda": 2.0, "j_min": -20, "j_max": 20, "base": 1.0, "terms": []},
  "weights": {"type": "random", "amplitude": 1.0, "s": 1.0, "values": []},
  "widths": [1, 2, 4, 8, 16, 32],
  "function": "square_wave"
})"},
        {"local_growth", R"({
  "grid": {"dim": 1, "extent": 8.0, "points": 131072},
  "alpha": 0.5,
  "sequence": {"type": "geometric", "lambda": 2.0, "j_min": -80, "j_max": 80, "base": 1.0, "terms": []},
  "weights": {"type": "alternating_power", "amplitude": 1.0, "s": 1.0, "values": []},
  "cases": [
    {"p": 1.0, "s": 1.5},
    {"p": 2.0, "s": 0.55}
  ],
  "function": "annuli",
  "annulus_ratio": 2.0,
  "r": {"min_exp": -10, "max_exp": -1},
  "horizon": {"m0": 8, "m_max": 64, "tol": 1e-6},
  "spread_factor": 10.0,
  "growth": {"p": 2.0, "target": 0.5, "tolerance": 0.2}
})"},
        {"convergence", R"({
  "alphas": [0.25, 0.5, 0.75],
  "report_only": [0.5],
  "lambda": 1.189207115002721,
  "weights": {"type": "ones", "amplitude": 1.0, "s": 1.0, "values": []},
  "a_term": {"grid": {"dim": 1, "extent": 8192.0, "points": 65536}, "s_min": 4.0, "s_max": 100.0},
  "b_term": {"grid": {"dim": 1, "extent": 16.0, "points": 65536}, "s_min": 0.004, "s_max": 0.1},
  "slope_tolerance": 0.25
})"},
        {"lacunary_equiv", R"({
  "grid": {"dim": 1, "extent": 64.0, "points": 1024},
  "alphas": [0.3, 0.5, 0.75, 1.0],
  "lambda": {"min": 1.2, "max": 3.0},
  "gap_factor": {"max": 20.0},
  "length": {"min": 3, "max": 12},
  "trials": 100,
  "tolerance": 1e-10
})"},
    };
    return table;
}

bool same_kind(const Json& def, const Json& user) {
    if (def.is_number_integer()) return user.is_number_integer();
    if (def.is_number()) return user.is_number();
    if (def.is_boolean()) return user.is_boolean();
    if (def.is_string()) return user.is_string();
    if (def.is_array()) return user.is_array();
    if (def.is_object()) return user.is_object();
    return true;
}

void merge_into(Json& target, const Json& user, const std::string& path) {
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!target.contains(it.key())) throw ConfigError("unknown key '" + key + "'");
        Json& def = target[it.key()];
        if (!same_kind(def, it.value())) throw ConfigError("wrong type for '" + key + "'");
        if (def.is_object()) {
            merge_into(def, it.value(), key);
            continue;
        }
        if (def.is_array() && !def.empty() && def.front().is_object()) {
            // Arrays of records: each element is checked against the first default record.
            const Json proto = def.front();
            Json out = Json::array();
            for (std::size_t i = 0; i < it.value().size(); ++i) {
                if (!it.value()[i].is_object()) throw ConfigError("wrong type for '" + key + "'");
                Json rec = proto;
                merge_into(rec, it.value()[i], key + "[" + std::to_string(i) + "]");
                out.push_back(rec);
            }
            def = out;
            continue;
        }
        if (def.is_array() && !def.empty()) {
            for (const auto& e : it.value())
                if (!same_kind(def.front(), e) && !(def.front().is_number() && e.is_number()))
                    throw ConfigError("wrong element type in '" + key + "'");
        }
        def = it.value();
    }
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids{"l2_bound", "kernel_bounds", "cz_bounds",   "cotlar",      "weak_type",
                                              "weighted_lp", "bmo_check", "local_growth", "convergence", "lacunary_equiv"};
    return ids;
}

bool is_experiment(const std::string& id) {
    const auto& ids = experiment_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Json default_config(const std::string& id) {
    const auto& table = defaults_table();
    const auto it = table.find(id);
    if (it == table.end()) throw ConfigError("unknown experiment '" + id + "'");
    Json doc = Json::parse(kCommon);
    doc.merge_patch(Json::parse(it->second));
    doc["experiment"] = id;
    return doc;
}

const Json& ExperimentConfig::section(const std::string& name) const {
    if (!doc.contains(name)) throw ConfigError("missing section '" + name + "'");
    return doc.at(name);
}

ExperimentConfig parse_config(const Json& user, const std::filesystem::path& base_dir) {
    if (!user.is_object()) throw ConfigError("config must be a JSON object");
    if (!user.contains("experiment") || !user.at("experiment").is_string())
        throw ConfigError("config needs a string 'experiment'");
    const std::string id = user.at("experiment").get<std::string>();
    if (!is_experiment(id)) throw ConfigError("unknown experiment '" + id + "'");
    ExperimentConfig cfg;
    cfg.id = id;
    cfg.doc = default_config(id);
    merge_into(cfg.doc, user, "");
    const Json& seed = cfg.doc.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        throw ConfigError("seed must be a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();
    cfg.base_dir = base_dir;
    if (!(number(cfg.doc, "spread_factor") >= 1.0)) throw ConfigError("spread_factor must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    Json user;
    try {
        user = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(user, path.parent_path());
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string config_hash(const ExperimentConfig& cfg) {
    Json d = cfg.doc;
    d["seed"] = cfg.seed;
    return hex64(fnv1a(d.dump()));
}

double number(const Json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError("expected a number at '" + key + "'");
    return j.at(key).get<double>();
}

long integer(const Json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) throw ConfigError("expected an integer at '" + key + "'");
    return j.at(key).get<long>();
}

std::vector<double> numbers(const Json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError("expected an array at '" + key + "'");
    std::vector<double> out;
    for (const auto& e : j.at(key)) {
        if (!e.is_number()) throw ConfigError("expected numbers in '" + key + "'");
        out.push_back(e.get<double>());
    }
    return out;
}

Grid grid_from(const Json& j) {
    const long points = integer(j, "points");
    if (points <= 0) throw ConfigError("grid.points must be positive");
    try {
        return make_grid(static_cast<int>(integer(j, "dim")), number(j, "extent"), static_cast<std::size_t>(points));
    } catch (const Error& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

LacunarySequence sequence_from(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    const double lambda = number(j, "lambda");
    const long j_min = integer(j, "j_min");
    try {
        if (type == "geometric") return geometric_sequence(lambda, j_min, integer(j, "j_max"), number(j, "base"));
        if (type == "perturbed")
            return perturbed_geometric_sequence(lambda, j_min, integer(j, "j_max"), number(j, "base"));
        if (type == "list") return validate_lacunary(numbers(j, "terms"), lambda, j_min);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("sequence: ") + e.what());
    }
    throw ConfigError("unknown sequence type '" + type + "'");
}

WeightSequence weights_from(const Json& j, const LacunarySequence& seq, std::mt19937_64& rng) {
    const std::string type = j.at("type").get<std::string>();
    const double amp = number(j, "amplitude");
    const double s = number(j, "s");
    std::vector<double> v;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (long k = seq.j_min(); k <= seq.j_max(); ++k) {
        const double decay = std::pow(1.0 + std::abs(static_cast<double>(k)), -s);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        if (type == "ones") v.push_back(amp);
        else if (type == "zeros") v.push_back(0.0);
        else if (type == "random") v.push_back(amp * unit(rng));
        else if (type == "alternating") v.push_back(amp * sign);
        else if (type == "power") v.push_back(amp * decay);
        else if (type == "alternating_power") v.push_back(amp * sign * decay);
        else if (type == "list") break;
        else throw ConfigError("unknown weights type '" + type + "'");
    }
    if (type == "list") {
        v = numbers(j, "values");
        if (v.size() != seq.size()) throw ConfigError("weights.values must have one entry per sequence term");
    }
    return WeightSequence(std::move(v), seq.j_min());
}

}  // namespace fracdt
