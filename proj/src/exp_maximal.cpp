// Runners built on the maximal operator T*_M and the analysis module: the
// Cotlar ratio, weak type (1,1), weighted L^p and the BMO bound.

#include "fracdt/analysis.hpp"
#include "fracdt/experiments.hpp"
#include "fracdt/stats.hpp"

#include "experiment_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracdt {

namespace detail {

namespace {

struct Horizon {
    long m0 = 1, m_max = 1;
    double tol = 1e-6;
};

Horizon horizon_from(const Json& j, const TransformSpec& spec) {
    Horizon h{integer(j, "m0"), integer(j, "m_max"), number(j, "tol")};
    if (h.m0 < 1 || h.m_max < h.m0) throw ConfigError("horizon needs 1 <= m0 <= m_max");
    if (h.m_max > max_horizon(spec))
        throw ConfigError("horizon m_max " + std::to_string(h.m_max) + " exceeds the sequence range (max " +
                          std::to_string(max_horizon(spec)) + ")");
    if (!(h.tol > 0.0)) throw ConfigError("horizon tol must be positive");
    return h;
}

SampledField spike(const Grid& grid, double at) {
    SampledField f(grid);
    const double h = grid.spacing();
    const auto i = static_cast<std::size_t>(std::llround((at + 0.5 * grid.extent) / h));
    if (i >= grid.points) throw ConfigError("spike_at lies outside the grid");
    const std::size_t flat = grid.dim == 1 ? i : i * grid.points + grid.points / 2;
    f[flat] = 1.0 / grid.cell();
    return f;
}

struct CotlarParams {
    Grid grid;
    double alpha, q;
    std::vector<long> horizons;
    long trials, bandwidth;
    WindowMode mode;
};

CotlarParams parse_cotlar(const ExperimentConfig& cfg) {
    const Json& d = cfg.doc;
    CotlarParams p{grid_from(d.at("grid")), alpha_from(d), number(d, "q"), {}, integer(d, "trials"),
                   integer(d, "bandwidth"), mode_from(d.at("numerator").get<std::string>())};
    if (!(p.q > 1.0)) throw ConfigError("q must exceed 1");
    if (p.trials < 1) throw ConfigError("trials must be positive");
    if (p.bandwidth < 0 || p.bandwidth >= static_cast<long>(p.grid.points / 2))
        throw ConfigError("bandwidth must lie in [0, points/2)");
    std::mt19937_64 rng(cfg.seed);
    const TransformSpec spec = transform_from(d, p.alpha, rng);
    for (double m : numbers(d, "horizons")) {
        check_horizon(spec, {static_cast<long>(m)});
        p.horizons.push_back(static_cast<long>(m));
    }
    if (p.horizons.empty()) throw ConfigError("horizons must be non-empty");
    return p;
}

struct WeakParams {
    Grid grid;
    double alpha;
    Horizon horizon;
    double start_fraction, decades;
    long count;
    std::vector<PowerWeight> weights;
    double spike_at;
};

WeakParams parse_weak(const ExperimentConfig& cfg) {
    const Json& d = cfg.doc;
    WeakParams p;
    p.grid = grid_from(d.at("grid"));
    p.alpha = alpha_from(d);
    std::mt19937_64 rng(cfg.seed);
    const TransformSpec spec = transform_from(d, p.alpha, rng);
    p.horizon = horizon_from(d.at("horizon"), spec);
    const Json& s = d.at("sigma");
    p.start_fraction = number(s, "start_fraction");
    p.decades = number(s, "decades");
    p.count = integer(s, "count");
    if (!(p.start_fraction > 0.0) || !(p.decades > 0.0) || p.count < 2) throw ConfigError("invalid sigma sweep");
    for (double b : numbers(d, "betas")) {
        const PowerWeight w = make_power_weight(b, 1.0, p.grid.dim);
        if (!w.admissible) throw ConfigError("beta " + format_double(b) + " is not an A_1 power weight");
        p.weights.push_back(w);
    }
    p.spike_at = number(d, "spike_at");
    spike(p.grid, p.spike_at);
    return p;
}

struct WeightedParams {
    Grid grid;
    double alpha;
    Horizon horizon;
    std::vector<PowerWeight> weights;
    std::vector<double> scales;
    double center;
};

WeightedParams parse_weighted(const ExperimentConfig& cfg) {
    const Json& d = cfg.doc;
    WeightedParams p;
    p.grid = grid_from(d.at("grid"));
    p.alpha = alpha_from(d);
    std::mt19937_64 rng(cfg.seed);
    const TransformSpec spec = transform_from(d, p.alpha, rng);
    p.horizon = horizon_from(d.at("horizon"), spec);
    for (const auto& c : d.at("cases")) {
        const double pp = number(c, "p");
        if (!(pp > 1.0) || std::isinf(pp)) throw ConfigError("weighted_lp needs 1 < p < inf");
        const PowerWeight w = make_power_weight(number(c, "beta"), pp, p.grid.dim);
        if (!w.admissible)
            throw ConfigError("beta " + format_double(w.beta) + " is not an A_p power weight for p = " + format_double(pp));
        p.weights.push_back(w);
    }
    p.scales = numbers(d, "scales");
    if (p.scales.empty()) throw ConfigError("scales must be non-empty");
    for (double r : p.scales)
        if (!(r >= p.grid.spacing()) || r > 0.25 * p.grid.extent)
            throw ConfigError("scales must lie in [h, L/4]");
    p.center = number(d, "center");
    return p;
}

struct BmoParams {
    Grid grid;
    double alpha;
    std::vector<long> widths;
};

BmoParams parse_bmo(const ExperimentConfig& cfg, std::optional<TransformSpec>& spec) {
    const Json& d = cfg.doc;
    BmoParams p{grid_from(d.at("grid")), alpha_from(d), {}};
    std::mt19937_64 rng(cfg.seed);
    spec.emplace(transform_from(d, p.alpha, rng));
    if (d.at("function").get<std::string>() != "square_wave") throw ConfigError("bmo_check supports function 'square_wave'");
    for (double w : numbers(d, "widths")) {
        const long wi = static_cast<long>(w);
        if (wi < 1) throw ConfigError("widths must be positive");
        check_window(*spec, {-wi / 2, -wi / 2 + wi - 1}, WindowMode::inclusive);
        p.widths.push_back(wi);
    }
    if (p.widths.empty()) throw ConfigError("widths must be non-empty");
    return p;
}

}  // namespace

void validate_cotlar(const ExperimentConfig& cfg) { parse_cotlar(cfg); }
void validate_weak_type(const ExperimentConfig& cfg) { parse_weak(cfg); }
void validate_weighted_lp(const ExperimentConfig& cfg) { parse_weighted(cfg); }
void validate_bmo_check(const ExperimentConfig& cfg) {
    std::optional<TransformSpec> spec;
    parse_bmo(cfg, spec);
}

}  // namespace detail

using namespace detail;

Report run_cotlar(const ExperimentConfig& cfg) {
    const CotlarParams p = parse_cotlar(cfg);
    const double spread_factor = number(cfg.doc, "spread_factor");
    Report r = start_report(cfg);
    auto rng = rng_for(cfg);
    Table& trials = r.table("trials", {"trial", "M", "sup_ratio", "violations"});
    std::vector<double> sup_by_m(p.horizons.size(), 0.0);
    std::size_t violations = 0;
    for (long i = 0; i < p.trials; ++i) {
        const TransformSpec spec = transform_from(cfg.doc, p.alpha, rng);
        const SampledField f = random_band_limited(p.grid, p.bandwidth, rng);
        if (i == 0) r.boundary_decay = boundary_decay(f);
        for (std::size_t k = 0; k < p.horizons.size(); ++k) {
            const CotlarField c = cotlar_ratio(f, spec, p.horizons[k], p.q, p.mode);
            trials.add({static_cast<double>(i), static_cast<double>(p.horizons[k]), c.sup(),
                        static_cast<double>(c.violations)});
            violations += c.violations;
            if (c.sup() > sup_by_m[k]) {
                sup_by_m[k] = c.sup();
                r.witnesses["M" + std::to_string(p.horizons[k])] = {{"trial", i}};
            }
        }
    }
    Table& hz = r.table("horizons", {"M", "sup_ratio"});
    for (std::size_t k = 0; k < p.horizons.size(); ++k) {
        hz.add({static_cast<double>(p.horizons[k]), sup_by_m[k]});
        r.scalar("sup_ratio_M" + std::to_string(p.horizons[k]), sup_by_m[k], true);
    }
    const double sp = spread(sup_by_m);
    const bool finite = std::all_of(sup_by_m.begin(), sup_by_m.end(), [](double v) { return std::isfinite(v); });
    r.scalar("sup_ratio", *std::max_element(sup_by_m.begin(), sup_by_m.end()));
    r.scalar("spread", sp);
    r.scalar("violations", static_cast<double>(violations));
    r.verdict("no_violations", violations == 0, std::to_string(violations) + " nodes with vanishing denominator");
    r.verdict("cotlar_stable", finite && sp <= spread_factor,
              "spread of per-M sups " + format_double(sp) + " (limit " + format_double(spread_factor) + ")");
    return r;
}

Report run_weak_type(const ExperimentConfig& cfg) {
    const WeakParams p = parse_weak(cfg);
    const double spread_factor = number(cfg.doc, "spread_factor");
    Report r = start_report(cfg);
    auto rng = rng_for(cfg);
    const TransformSpec spec = transform_from(cfg.doc, p.alpha, rng);
    const SampledField f = spike(p.grid, p.spike_at);
    const StabilizedMaximal ts = stabilized_maximal(f, spec, p.horizon.m0, p.horizon.m_max, p.horizon.tol);
    Table& hist = r.table("horizon_history", {"M", "relative_change"});
    for (const auto& [m, ch] : ts.history) hist.add({static_cast<double>(m), ch});
    r.boundary_decay = boundary_decay(ts.field);
    const double peak = ts.field.max_abs();
    r.scalar("peak", peak, true);
    if (!ts.converged) r.verdict("horizon_stabilized", Status::inconclusive, "T*_M did not stabilize in M");
    for (std::size_t b = 0; b < p.weights.size(); ++b) {
        const PowerWeight& w = p.weights[b];
        const double fnorm = lp_norm(f, 1.0, w);
        Table& t = r.table("beta" + std::to_string(b), {"sigma", "level", "ratio"});
        std::vector<double> ratios;
        for (long k = 0; k < p.count; ++k) {
            const double sigma =
                p.start_fraction * peak * std::pow(10.0, -p.decades * static_cast<double>(k) / static_cast<double>(p.count - 1));
            const double level = distribution_level(ts.field, sigma, w);
            const double ratio = fnorm > 0.0 ? sigma * level / fnorm : 0.0;
            t.add({sigma, level, ratio});
            ratios.push_back(ratio);
        }
        const double sp = spread(ratios);
        const double sup = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
        const std::string tag = "beta" + std::to_string(b);
        r.scalar(tag + "_sup_ratio", sup, true);
        r.scalar(tag + "_spread", sp);
        r.verdict(tag + "_weak_type", std::isfinite(sup) && sp <= spread_factor,
                  "beta " + format_double(w.beta) + ": sup sigma*level/||f|| " + format_double(sup) + ", spread " +
                      format_double(sp));
    }
    return r;
}

Report run_weighted_lp(const ExperimentConfig& cfg) {
    const WeightedParams p = parse_weighted(cfg);
    const double spread_factor = number(cfg.doc, "spread_factor");
    Report r = start_report(cfg);
    auto rng = rng_for(cfg);
    const TransformSpec spec = transform_from(cfg.doc, p.alpha, rng);
    std::vector<SampledField> fs, tfs;
    bool converged = true;
    for (double s : p.scales) {
        const double c = p.center;
        fs.push_back(sample(p.grid, [c, s](const Point& x) { return std::hypot(x[0] - c, x[1]) <= s ? 1.0 : 0.0; }));
        const StabilizedMaximal ts = stabilized_maximal(fs.back(), spec, p.horizon.m0, p.horizon.m_max, p.horizon.tol);
        converged = converged && ts.converged;
        r.boundary_decay = std::max(r.boundary_decay, boundary_decay(ts.field));
        tfs.push_back(ts.field);
    }
    if (!converged) r.verdict("horizon_stabilized", Status::inconclusive, "T*_M did not stabilize in M for every scale");
    for (std::size_t c = 0; c < p.weights.size(); ++c) {
        const PowerWeight& w = p.weights[c];
        const std::string tag = "case" + std::to_string(c);
        Table& t = r.table(tag, {"scale", "norm_f", "norm_tstar", "ratio"});
        std::vector<double> ratios;
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const double nf = lp_norm(fs[k], w.p, w), nt = lp_norm(tfs[k], w.p, w);
            const double ratio = nf > 0.0 ? nt / nf : 0.0;
            t.add({p.scales[k], nf, nt, ratio});
            ratios.push_back(ratio);
        }
        const double sp = spread(ratios);
        const double sup = *std::max_element(ratios.begin(), ratios.end());
        r.scalar(tag + "_sup_ratio", sup, true);
        r.scalar(tag + "_spread", sp);
        r.verdict(tag + "_bounded", std::isfinite(sup) && sp <= spread_factor,
                  "p " + format_double(w.p) + ", beta " + format_double(w.beta) + ": sup " + format_double(sup) +
                      ", spread " + format_double(sp));
    }
    return r;
}

Report run_bmo_check(const ExperimentConfig& cfg) {
    std::optional<TransformSpec> spec;
    const BmoParams p = parse_bmo(cfg, spec);
    const double spread_factor = number(cfg.doc, "spread_factor");
    Report r = start_report(cfg);
    const double L = p.grid.extent;
    const SampledField f = sample(p.grid, [L](const Point& x) {
        const double s = std::sin(2.0 * std::numbers::pi * x[0] / L);
        return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    });
    r.boundary_decay = boundary_decay(f);
    const double finf = f.max_abs();
    Table& t = r.table("widths", {"width", "bmo", "ratio"});
    std::vector<double> ratios;
    for (long w : p.widths) {
        const Window win{-w / 2, -w / 2 + w - 1};
        const double b = bmo_norm(differential_transform(f, *spec, win, WindowMode::inclusive));
        const double ratio = finf > 0.0 ? b / finf : 0.0;
        t.add({static_cast<double>(w), b, ratio});
        ratios.push_back(ratio);
    }
    const double sp = spread(ratios);
    const double sup = *std::max_element(ratios.begin(), ratios.end());
    r.scalar("sup_ratio", sup, true);
    r.scalar("spread", sp);
    r.verdict("bmo_bounded", std::isfinite(sup) && sp <= spread_factor,
              "sup ||T_N f||_BMO/||f||_inf " + format_double(sup) + ", spread " + format_double(sp));
    return r;
}

}  // namespace fracdt
