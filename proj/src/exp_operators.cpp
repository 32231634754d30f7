// Runners that exercise single operators: the uniform L2 bound, the kernel
// majorants, the CZ bounds of K_N and the refinement equivalence.

#include "fracdt/analysis.hpp"
#include "fracdt/experiments.hpp"
#include "fracdt/stats.hpp"

#include "experiment_util.hpp"

#include <algorithm>
#include <cmath>

namespace fracdt {

namespace detail {

namespace {

std::vector<double> alphas_from(const Json& doc) {
    auto a = numbers(doc, "alphas");
    if (a.empty()) throw ConfigError("alphas must be non-empty");
    for (double x : a)
        if (!(x > 0.0 && x <= 1.0)) throw ConfigError("every alpha must lie in (0, 1]");
    return a;
}

long positive(const Json& doc, const std::string& key) {
    const long v = integer(doc, key);
    if (v <= 0) throw ConfigError(key + " must be positive");
    return v;
}

struct L2Params {
    Grid grid;
    std::vector<double> alphas;
    long trials = 0;
    double tol = 0.0;
};

L2Params parse_l2(const ExperimentConfig& cfg) {
    const Json& d = cfg.doc;
    L2Params p{grid_from(d.at("grid")), alphas_from(d), positive(d, "trials"), number(d, "tolerance")};
    std::mt19937_64 rng(cfg.seed);
    const TransformSpec spec = transform_from(d, p.alphas.front(), rng);
    if (spec.seq.size() < 3) throw ConfigError("sequence needs at least 3 terms for a strict window");
    return p;
}

struct KernelCase {
    double alpha;
    int dim;
    std::size_t points;
    double pps;
};

struct KernelParams {
    std::vector<KernelCase> cases;
    std::vector<double> t;
    double interior;
    KernelTolerances tol;
    double oracle_alpha, oracle_expected, oracle_tol;
    int oracle_dim;
};

KernelParams parse_kernel(const ExperimentConfig& cfg) {
    const Json& d = cfg.doc;
    KernelParams p;
    for (const auto& c : d.at("cases")) {
        KernelCase k{alpha_from(c), static_cast<int>(integer(c, "dim")), static_cast<std::size_t>(positive(c, "points")),
                     number(c, "points_per_scale")};
        make_grid(k.dim, 1.0, k.points);
        if (!(k.pps > 0.0)) throw ConfigError("points_per_scale must be positive");
        p.cases.push_back(k);
    }
    if (p.cases.empty()) throw ConfigError("kernel_bounds needs at least one case");
    const Json& t = d.at("t");
    const double lo = number(t, "min"), hi = number(t, "max");
    const long count = positive(t, "count");
    if (!(lo > 0.0 && hi >= lo)) throw ConfigError("t sweep needs 0 < min <= max");
    p.t = geometric_sweep(lo, hi, static_cast<int>(count));
    p.interior = number(d, "interior");
    p.tol = {number(d.at("tolerances"), "periodization"), number(d.at("tolerances"), "resolution")};
    const Json& o = d.at("oracle");
    p.oracle_alpha = number(o, "alpha");
    p.oracle_dim = static_cast<int>(integer(o, "dim"));
    p.oracle_expected = number(o, "expected");
    p.oracle_tol = number(o, "tolerance");
    for (const auto& k : p.cases)
        for (double tv : p.t) {
            const Grid g = self_similar_grid(k.alpha, k.dim, tv, k.points, k.pps);
            const GridDiagnostic diag = diagnose({k.alpha, k.dim, tv}, g, p.tol);
            if (!diag.passed)
                throw ConfigError("kernel case alpha=" + format_double(k.alpha) + " dim=" + std::to_string(k.dim) +
                                  " fails the grid diagnostic (periodization " + format_double(diag.periodization) +
                                  ", resolution " + format_double(diag.resolution) + ")");
        }
    return p;
}

struct CzParams {
    Grid grid;
    double alpha;
    std::vector<Window> family;
    CzOptions opts;
};

CzParams parse_cz(const ExperimentConfig& cfg, std::mt19937_64& rng, std::optional<TransformSpec>& spec) {
    const Json& d = cfg.doc;
    CzParams p{grid_from(d.at("grid")), alpha_from(d), {}, {}};
    spec.emplace(transform_from(d, p.alpha, rng));
    const long n1 = integer(d, "n1");
    for (double w : numbers(d, "widths")) {
        if (!(w >= 1.0) || w != std::floor(w)) throw ConfigError("widths must be positive integers");
        const Window win{n1, n1 + static_cast<long>(w) - 1};
        check_window(*spec, win, WindowMode::inclusive);
        p.family.push_back(win);
    }
    if (p.family.empty()) throw ConfigError("widths must be non-empty");
    p.opts.spread_factor = number(d, "spread_factor");
    p.opts.min_radius_cells = number(d, "min_radius_cells");
    p.opts.interior = number(d, "interior");
    p.opts.tol = {number(d.at("tolerances"), "periodization"), number(d.at("tolerances"), "resolution")};
    return p;
}

struct EquivParams {
    Grid grid;
    std::vector<double> alphas;
    double lambda_min, lambda_max, gap_max;
    long len_min, len_max, trials;
    double tol;
};

EquivParams parse_equiv(const ExperimentConfig& cfg) {
    const Json& d = cfg.doc;
    EquivParams p{grid_from(d.at("grid")),
                  alphas_from(d),
                  number(d.at("lambda"), "min"),
                  number(d.at("lambda"), "max"),
                  number(d.at("gap_factor"), "max"),
                  integer(d.at("length"), "min"),
                  integer(d.at("length"), "max"),
                  positive(d, "trials"),
                  number(d, "tolerance")};
    if (!(p.lambda_min > 1.0 && p.lambda_max >= p.lambda_min)) throw ConfigError("lambda range needs 1 < min <= max");
    if (!(p.gap_max >= 1.0)) throw ConfigError("gap_factor.max must be >= 1");
    if (p.len_min < 2 || p.len_max < p.len_min) throw ConfigError("length range needs 2 <= min <= max");
    return p;
}

}  // namespace

void validate_l2_bound(const ExperimentConfig& cfg) { parse_l2(cfg); }
void validate_kernel_bounds(const ExperimentConfig& cfg) { parse_kernel(cfg); }
void validate_cz_bounds(const ExperimentConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::optional<TransformSpec> spec;
    parse_cz(cfg, rng, spec);
}
void validate_lacunary_equiv(const ExperimentConfig& cfg) { parse_equiv(cfg); }

}  // namespace detail

using namespace detail;

Report run_l2_bound(const ExperimentConfig& cfg) {
    const L2Params p = parse_l2(cfg);
    Report r = start_report(cfg);
    auto rng = rng_for(cfg);
    Table& t = r.table("trials", {"trial", "alpha", "n1", "n2", "v_inf", "ratio"});
    double worst = 0.0, worst_ratio = 0.0;
    long violations = 0;
    Json witness;
    for (long i = 0; i < p.trials; ++i) {
        const double alpha = p.alphas[std::uniform_int_distribution<std::size_t>(0, p.alphas.size() - 1)(rng)];
        const TransformSpec spec = transform_from(cfg.doc, alpha, rng);
        const long lo = spec.seq.j_min(), hi = spec.seq.j_max() - 1;
        const long n1 = std::uniform_int_distribution<long>(lo, hi - 1)(rng);
        const long n2 = std::uniform_int_distribution<long>(n1 + 1, hi)(rng);
        const SampledField f = random_field(p.grid, rng);
        const SampledField tf = differential_transform(f, spec, {n1, n2});
        const double ratio = lp_norm(tf, 2.0) / lp_norm(f, 2.0);
        const double vinf = spec.weights.norm_linf();
        t.add({static_cast<double>(i), alpha, static_cast<double>(n1), static_cast<double>(n2), vinf, ratio});
        const double normalized = vinf > 0.0 ? ratio / vinf : ratio;
        if (ratio > vinf + p.tol) {
            ++violations;
            if (violations == 1)
                witness = {{"trial", i}, {"alpha", alpha}, {"n1", n1}, {"n2", n2}, {"weights", spec.weights.values()},
                           {"ratio", ratio}, {"seed", cfg.seed}};
        }
        if (normalized > worst) {
            worst = normalized;
            r.witnesses["sup"] = {{"trial", i}, {"alpha", alpha}, {"n1", n1}, {"n2", n2}};
        }
        worst_ratio = std::max(worst_ratio, ratio);
    }
    if (violations > 0) r.witnesses["violation"] = witness;
    r.scalar("sup_ratio", worst_ratio, true);
    r.scalar("sup_ratio_over_v_inf", worst, true);
    r.scalar("violations", static_cast<double>(violations));
    r.boundary_decay = 0.0;
    r.verdict("l2_uniform", violations == 0,
              std::to_string(violations) + " of " + std::to_string(p.trials) +
                  " trials exceed ||v||_inf + " + format_double(p.tol) + " (table trials: ratio vs v_inf)");
    return r;
}

Report run_kernel_bounds(const ExperimentConfig& cfg) {
    const KernelParams p = parse_kernel(cfg);
    const double spread_factor = number(cfg.doc, "spread_factor");
    Report r = start_report(cfg);
    BoundOptions opts;
    opts.spread_factor = spread_factor;
    opts.interior = p.interior;
    opts.tol = p.tol;
    Table& cases = r.table("cases", {"case", "alpha", "dim", "bound", "sup_ratio", "spread", "min_relative"});
    bool all_stable = true;
    std::optional<double> oracle;
    for (std::size_t c = 0; c < p.cases.size(); ++c) {
        const KernelCase& k = p.cases[c];
        const auto reps = check_kernel_bounds_scaled(k.alpha, k.dim, p.t, k.points, k.pps, opts);
        const std::string tag = "case" + std::to_string(c);
        for (std::size_t b = 0; b < reps.size(); ++b) {
            add_bound_table(r, tag + "_" + to_string(reps[b].bound_id), "t", reps[b]);
            cases.add({static_cast<double>(c), k.alpha, static_cast<double>(k.dim), static_cast<double>(b),
                       reps[b].sup_ratio, reps[b].spread, reps[b].min_relative.value_or(0.0)});
            if (!reps[b].stable) {
                all_stable = false;
                r.witnesses[tag + "_" + to_string(reps[b].bound_id)] = describe(reps[b]);
            }
        }
        if (k.alpha == p.oracle_alpha && k.dim == p.oracle_dim && !oracle) oracle = reps[0].sup_ratio;
        const double tmax = p.t.back();
        const Grid g = self_similar_grid(k.alpha, k.dim, tmax, k.points, k.pps);
        r.boundary_decay = std::max(r.boundary_decay, boundary_decay(kernel_numeric({k.alpha, k.dim, tmax}, g, p.tol)));
    }
    r.verdict("kernel_bounds_stable", all_stable,
              "every bound finite with spread <= " + format_double(spread_factor) + " over the t sweep");
    if (oracle) {
        r.scalar("oracle_sup_ratio", *oracle, true);
        r.verdict("oracle", std::abs(*oracle - p.oracle_expected) <= p.oracle_tol,
                  "size bound sup " + format_double(*oracle) + " vs " + format_double(p.oracle_expected) + " +- " +
                      format_double(p.oracle_tol));
    }
    return r;
}

Report run_cz_bounds(const ExperimentConfig& cfg) {
    auto rng = rng_for(cfg);
    std::optional<TransformSpec> spec;
    const CzParams p = parse_cz(cfg, rng, spec);
    Report r = start_report(cfg);
    const auto reps = check_cz_bounds(*spec, p.family, p.grid, p.opts);
    add_bound_table(r, "czsize", "width", reps[0]);
    add_bound_table(r, "czgrad", "width", reps[1]);
    for (const auto& b : reps) {
        r.scalar(to_string(b.bound_id) + "_sup", b.sup_ratio, true);
        r.scalar(to_string(b.bound_id) + "_spread", b.spread);
        r.witnesses[to_string(b.bound_id)] = {{"width", b.argmax_parameter}, {"y", b.argmax_x[0]}};
        r.verdict(to_string(b.bound_id) + "_stable", b.stable, describe(b));
    }
    r.boundary_decay = boundary_decay(transform_kernel(*spec, p.family.back(), p.grid, WindowMode::inclusive, p.opts.tol));
    return r;
}

Report run_lacunary_equiv(const ExperimentConfig& cfg) {
    const EquivParams p = parse_equiv(cfg);
    Report r = start_report(cfg);
    auto rng = rng_for(cfg);
    std::uniform_real_distribution<double> unit(0.0, 1.0), sym(-1.0, 1.0);
    Table& t = r.table("trials", {"trial", "lambda", "length", "refined_length", "min_ratio_over_lambda",
                                  "max_ratio_over_lambda_sq", "residual"});
    long ratio_bad = 0, residual_bad = 0, preserve_bad = 0;
    double worst = 0.0;
    for (long i = 0; i < p.trials; ++i) {
        const double lambda = p.lambda_min + (p.lambda_max - p.lambda_min) * unit(rng);
        const long len = std::uniform_int_distribution<long>(p.len_min, p.len_max)(rng);
        const long j_min = std::uniform_int_distribution<long>(-len + 1, 0)(rng);
        std::vector<double> terms{std::exp(sym(rng))};
        for (long k = 1; k < len; ++k) terms.push_back(terms.back() * lambda * std::pow(p.gap_max, unit(rng)));
        std::vector<double> v(static_cast<std::size_t>(len));
        for (double& x : v) x = sym(rng);
        const LacunarySequence a = validate_lacunary(terms, lambda, j_min);
        const WeightSequence w(v, j_min);
        const RefinementResult ref = refine(a, w);

        const double lo = ref.eta.min_ratio() / lambda, hi = ref.eta.max_ratio() / (lambda * lambda);
        if (lo < 1.0 - 1e-12 || hi > 1.0 + 1e-12) ++ratio_bad;
        for (long j = a.j_min(); j <= a.j_max(); ++j)
            if (ref.eta.at(ref.refined_index(j)) != a.at(j)) ++preserve_bad;
        if (ref.omega.norm_linf() != w.norm_linf()) ++preserve_bad;

        const double alpha = p.alphas[std::uniform_int_distribution<std::size_t>(0, p.alphas.size() - 1)(rng)];
        const long n1 = std::uniform_int_distribution<long>(a.j_min(), a.j_max() - 1)(rng);
        const long n2 = std::uniform_int_distribution<long>(n1, a.j_max() - 1)(rng);
        const SampledField f = random_field(p.grid, rng);
        const double res = transform_equivalence_check(f, TransformSpec(alpha, a, w), {n1, n2}, ref);
        if (!(res <= p.tol)) ++residual_bad;
        if (res > worst) {
            worst = res;
            r.witnesses["sup_residual"] = {{"trial", i}, {"terms", terms}, {"weights", v}, {"n1", n1}, {"n2", n2}};
        }
        t.add({static_cast<double>(i), lambda, static_cast<double>(len), static_cast<double>(ref.eta.size()), lo, hi,
               res});
    }
    r.scalar("sup_residual", worst);
    r.verdict("ratios_in_range", ratio_bad == 0,
              std::to_string(ratio_bad) + " refined sequences with a ratio outside [lambda, lambda^2]");
    r.verdict("terms_preserved", preserve_bad == 0, std::to_string(preserve_bad) + " preservation failures");
    r.verdict("equivalence", residual_bad == 0,
              std::to_string(residual_bad) + " trials with residual > " + format_double(p.tol));
    return r;
}

}  // namespace fracdt
