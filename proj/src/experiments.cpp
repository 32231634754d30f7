#include "fracdt/experiments.hpp"

#include "experiment_util.hpp"

#include <cmath>
#include <map>

namespace fracdt {

namespace detail {

SampledField random_field(const Grid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    SampledField f(grid);
    for (double& v : f.values) v = normal(rng);
    return f;
}

SampledField random_band_limited(const Grid& grid, long bandwidth, std::mt19937_64& rng) {
    SpectralField s = forward(random_field(grid, rng));
    const std::size_t m = grid.points;
    for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
        const long k1 = grid.signed_wavenumber(grid.dim == 1 ? k : k / m);
        const long k2 = grid.dim == 1 ? 0 : grid.signed_wavenumber(k % m);
        if (std::abs(k1) > bandwidth || std::abs(k2) > bandwidth || grid.is_nyquist(k)) s.coeffs[k] = 0.0;
    }
    SampledField f = inverse(s);
    const double peak = f.max_abs();
    if (peak > 0.0) f *= 1.0 / peak;
    return f;
}

double alpha_from(const Json& doc, const std::string& key) {
    const double a = number(doc, key);
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError(key + " must lie in (0, 1]");
    return a;
}

WindowMode mode_from(const std::string& s) {
    if (s == "strict") return WindowMode::strict;
    if (s == "inclusive") return WindowMode::inclusive;
    throw ConfigError("window mode must be 'strict' or 'inclusive', got '" + s + "'");
}

TransformSpec transform_from(const Json& doc, double alpha, std::mt19937_64& rng) {
    LacunarySequence seq = sequence_from(doc.at("sequence"));
    WeightSequence w = weights_from(doc.at("weights"), seq, rng);
    return TransformSpec(alpha, std::move(seq), std::move(w));
}

Report start_report(const ExperimentConfig& cfg) {
    Report r;
    r.experiment = cfg.id;
    r.provenance = {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}};
    return r;
}

void add_bound_table(Report& r, const std::string& name, const std::string& parameter, const BoundReport& b) {
    Table& t = r.table(name, {parameter, "sup_ratio"});
    for (const auto& e : b.sweep) t.add({e.parameter, e.sup_ratio});
}

std::string describe(const BoundReport& b) {
    return to_string(b.bound_id) + ": sup " + format_double(b.sup_ratio) + ", spread " + format_double(b.spread) +
           " at parameter " + format_double(b.argmax_parameter);
}

void validate_l2_bound(const ExperimentConfig&);
void validate_kernel_bounds(const ExperimentConfig&);
void validate_cz_bounds(const ExperimentConfig&);
void validate_cotlar(const ExperimentConfig&);
void validate_weak_type(const ExperimentConfig&);
void validate_weighted_lp(const ExperimentConfig&);
void validate_bmo_check(const ExperimentConfig&);
void validate_local_growth(const ExperimentConfig&);
void validate_convergence(const ExperimentConfig&);
void validate_lacunary_equiv(const ExperimentConfig&);

}  // namespace detail

namespace {

struct Entry {
    Report (*run)(const ExperimentConfig&);
    void (*validate)(const ExperimentConfig&);
};

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> table{
        {"l2_bound", {run_l2_bound, detail::validate_l2_bound}},
        {"kernel_bounds", {run_kernel_bounds, detail::validate_kernel_bounds}},
        {"cz_bounds", {run_cz_bounds, detail::validate_cz_bounds}},
        {"cotlar", {run_cotlar, detail::validate_cotlar}},
        {"weak_type", {run_weak_type, detail::validate_weak_type}},
        {"weighted_lp", {run_weighted_lp, detail::validate_weighted_lp}},
        {"bmo_check", {run_bmo_check, detail::validate_bmo_check}},
        {"local_growth", {run_local_growth, detail::validate_local_growth}},
        {"convergence", {run_convergence, detail::validate_convergence}},
        {"lacunary_equiv", {run_lacunary_equiv, detail::validate_lacunary_equiv}},
    };
    return table;
}

const Entry& entry(const std::string& id) {
    const auto it = registry().find(id);
    if (it == registry().end()) throw ConfigError("unknown experiment '" + id + "'");
    return it->second;
}

}  // namespace

void validate_experiment(const ExperimentConfig& cfg) {
    try {
        entry(cfg.id).validate(cfg);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(cfg.id + ": " + e.what());
    }
}

Report run_experiment(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    return entry(cfg.id).run(cfg);
}

Report run_and_write(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.seed) cfg.seed = *opts.seed;
    Report r = run_experiment(cfg);
    if (opts.use_golden) {
        std::filesystem::path dir = cfg.doc.at("golden_dir").get<std::string>();
        if (dir.is_relative()) dir = cfg.base_dir / dir;
        apply_golden(r, dir / (cfg.id + ".json"), opts.golden);
    }
    write_report(r, opts.out_dir / cfg.id);
    return r;
}

}  // namespace fracdt
