#include "fracdt/kernels.hpp"

#include "fracdt/kernel_cache.hpp"
#include "fracdt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fracdt {

namespace {

using SymbolFn = std::function<std::complex<double>(const Frequency&)>;

SampledField invert_symbol(const Grid& grid, SymbolFn fn, const std::string& label) {
    static thread_local Grid last_grid{};
    static thread_local SpectralField delta_hat{};
    if (!(last_grid == grid) || delta_hat.coeffs.empty()) {
        delta_hat = forward(unit_delta(grid));
        last_grid = grid;
    }
    return inverse(apply_symbol(delta_hat, Multiplier{std::move(fn), label}));
}

double radius(const Point& x) { return std::hypot(x[0], x[1]); }

}  // namespace

void validate(const KernelSpec& spec) {
    check_heat_params(spec.t, spec.alpha);
    if (spec.dim != 1 && spec.dim != 2) throw Error("unsupported dimension " + std::to_string(spec.dim));
}

double kernel_scale(double t, double alpha) { return std::pow(t, 0.5 / alpha); }

double kernel_closed_form(const KernelSpec& spec, const Point& x) {
    validate(spec);
    const double r2 = x[0] * x[0] + (spec.dim == 2 ? x[1] * x[1] : 0.0);
    const double n = spec.dim;
    if (spec.alpha == 1.0) {
        const double v = std::pow(4.0 * std::numbers::pi * spec.t, -0.5 * n) * std::exp(-r2 / (4.0 * spec.t));
        return v < 1e-300 ? 0.0 : v;
    }
    if (spec.alpha == 0.5) {
        const double c = spec.dim == 1 ? 1.0 / std::numbers::pi : 0.5 / std::numbers::pi;
        return c * spec.t / std::pow(spec.t * spec.t + r2, 0.5 * (n + 1.0));
    }
    throw Error("no closed form for alpha = " + std::to_string(spec.alpha) + "; use kernel_numeric");
}

GridDiagnostic diagnose(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol) {
    validate(spec);
    GridDiagnostic d;
    const double quarter = 0.25 * grid.extent;
    if (spec.alpha == 1.0) {
        d.periodization = std::exp(-quarter * quarter / (4.0 * spec.t));
    } else {
        const double s = kernel_scale(spec.t, spec.alpha);
        d.periodization = std::pow(s / (s + quarter), spec.dim + 2.0 * spec.alpha);
    }
    const double nyquist = std::numbers::pi / grid.spacing();
    d.resolution = std::exp(-spec.t * std::pow(nyquist, 2.0 * spec.alpha));
    d.passed = d.periodization <= tol.periodization && d.resolution <= tol.resolution;
    return d;
}

void require_resolved(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol) {
    if (spec.dim != grid.dim) throw Error("kernel dimension does not match grid");
    const GridDiagnostic d = diagnose(spec, grid, tol);
    if (d.periodization > tol.periodization)
        throw PeriodizationError("boundary-decay diagnostic failed: " + std::to_string(d.periodization) + " > " +
                                 std::to_string(tol.periodization) + " (extent too small for t)");
    if (d.resolution > tol.resolution)
        throw PeriodizationError("resolution diagnostic failed: symbol at Nyquist is " +
                                 std::to_string(d.resolution) + " (spacing too coarse for t)");
}

Grid self_similar_grid(double alpha, int dim, double t, std::size_t points, double points_per_scale) {
    const double h = kernel_scale(t, alpha) / points_per_scale;
    return make_grid(dim, h * static_cast<double>(points), points);
}

SampledField kernel_numeric(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol,
                            const KernelCache* cache) {
    require_resolved(spec, grid, tol);
    if (cache != nullptr) {
        if (auto hit = cache->load("kernel", spec, grid)) return *std::move(hit);
    }
    const double t = spec.t, a = spec.alpha;
    SampledField k = invert_symbol(
        grid, [t, a](const Frequency& xi) { return std::complex<double>(std::exp(-t * fractional_power(xi, a)), 0.0); },
        "kernel");
    if (cache != nullptr) cache->store("kernel", spec, k);
    return k;
}

SampledField kernel_time_derivative(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol) {
    require_resolved(spec, grid, tol);
    const double t = spec.t, a = spec.alpha;
    return invert_symbol(
        grid,
        [t, a](const Frequency& xi) {
            const double p = fractional_power(xi, a);
            return std::complex<double>(-p * std::exp(-t * p), 0.0);
        },
        "dt kernel");
}

std::vector<SampledField> kernel_gradient(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol) {
    require_resolved(spec, grid, tol);
    const double t = spec.t, a = spec.alpha;
    std::vector<SampledField> out;
    for (int j = 0; j < grid.dim; ++j) {
        out.push_back(invert_symbol(
            grid,
            [t, a, j](const Frequency& xi) {
                return std::complex<double>(0.0, xi[static_cast<std::size_t>(j)] * std::exp(-t * fractional_power(xi, a)));
            },
            "grad kernel"));
    }
    return out;
}

std::vector<SampledField> kernel_time_gradient(const KernelSpec& spec, const Grid& grid,
                                               const KernelTolerances& tol) {
    require_resolved(spec, grid, tol);
    const double t = spec.t, a = spec.alpha;
    std::vector<SampledField> out;
    for (int j = 0; j < grid.dim; ++j) {
        out.push_back(invert_symbol(
            grid,
            [t, a, j](const Frequency& xi) {
                const double p = fractional_power(xi, a);
                return std::complex<double>(0.0, -p * xi[static_cast<std::size_t>(j)] * std::exp(-t * p));
            },
            "dt grad kernel"));
    }
    return out;
}

SampledField magnitude(const std::vector<SampledField>& components) {
    SampledField out(components.front().grid);
    for (const auto& c : components)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
    for (double& v : out.values) v = std::sqrt(v);
    return out;
}

std::string to_string(BoundId id) {
    switch (id) {
        case BoundId::size_i: return "size_i";
        case BoundId::dt_ii: return "dt_ii";
        case BoundId::grad_iii: return "grad_iii";
        case BoundId::dtgrad_iv: return "dtgrad_iv";
        case BoundId::czsize: return "czsize";
        case BoundId::czgrad: return "czgrad";
    }
    return "unknown";
}

void finalize(BoundReport& report, double spread_factor) {
    std::vector<double> sups, params;
    for (const auto& e : report.sweep) {
        sups.push_back(e.sup_ratio);
        params.push_back(e.parameter);
    }
    report.spread = spread(sups);
    report.stable = std::isfinite(report.spread) && report.spread <= spread_factor &&
                    std::all_of(sups.begin(), sups.end(), [](double v) { return std::isfinite(v); });
    report.trend = 0.0;
    if (sups.size() >= 2 && std::all_of(sups.begin(), sups.end(), [](double v) { return v > 0.0; }) &&
        std::all_of(params.begin(), params.end(), [](double v) { return v > 0.0; }))
        report.trend = loglog_slope(params, sups, 1.0);
}

namespace {

struct RatioMax {
    double value = 0.0;
    Point x{};
};

// Sup over the interior of field * weight(|x|).
template <class Weight>
RatioMax sup_ratio(const SampledField& field, double interior, Weight weight) {
    RatioMax best;
    const double limit = interior * field.grid.extent;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Point x = field.grid.node(i);
        const double r = radius(x);
        if (r > limit) continue;
        const double v = std::abs(field[i]) * weight(r);
        if (v > best.value) best = {v, x};
    }
    return best;
}

void record(BoundReport& rep, double t, const RatioMax& m) {
    rep.sweep.push_back({t, m.value});
    if (m.value > rep.sup_ratio || rep.sweep.size() == 1) {
        rep.sup_ratio = m.value;
        rep.argmax_parameter = t;
        rep.argmax_x = m.x;
    }
}

void evaluate_bounds_at(std::array<BoundReport, 4>& reps, double alpha, int dim, double t, const Grid& grid,
                        const BoundOptions& opts) {
    const KernelSpec spec{alpha, dim, t};
    const double n = dim;
    const double s = kernel_scale(t, alpha);
    const double size_exp = n + 2.0 * alpha;

    const SampledField k = kernel_numeric(spec, grid, opts.tol);
    record(reps[0], t, sup_ratio(k, opts.interior, [&](double r) { return std::pow(s + r, size_exp) / t; }));
    const double rel = k.min() / k.max_abs();
    reps[0].min_relative = reps[0].min_relative ? std::min(*reps[0].min_relative, rel) : rel;

    const SampledField dk = kernel_time_derivative(spec, grid, opts.tol);
    record(reps[1], t, sup_ratio(dk, opts.interior, [&](double r) { return std::pow(s + r, size_exp); }));

    const SampledField gk = magnitude(kernel_gradient(spec, grid, opts.tol));
    record(reps[2], t, sup_ratio(gk, opts.interior, [&](double r) { return std::pow(s + r, n + 1.0); }));

    const SampledField dgk = magnitude(kernel_time_gradient(spec, grid, opts.tol));
    record(reps[3], t, sup_ratio(dgk, opts.interior, [&](double r) { return std::pow(s + r, size_exp + 1.0); }));
}

std::array<BoundReport, 4> empty_reports() {
    std::array<BoundReport, 4> reps;
    reps[0].bound_id = BoundId::size_i;
    reps[1].bound_id = BoundId::dt_ii;
    reps[2].bound_id = BoundId::grad_iii;
    reps[3].bound_id = BoundId::dtgrad_iv;
    return reps;
}

}  // namespace

std::array<BoundReport, 4> check_kernel_bounds(double alpha, int dim, const std::vector<double>& t_sweep,
                                               const Grid& grid, const BoundOptions& opts) {
    auto reps = empty_reports();
    for (double t : t_sweep) evaluate_bounds_at(reps, alpha, dim, t, grid, opts);
    for (auto& r : reps) finalize(r, opts.spread_factor);
    return reps;
}

std::array<BoundReport, 4> check_kernel_bounds_scaled(double alpha, int dim, const std::vector<double>& t_sweep,
                                                      std::size_t points, double points_per_scale,
                                                      const BoundOptions& opts) {
    auto reps = empty_reports();
    for (double t : t_sweep)
        evaluate_bounds_at(reps, alpha, dim, t, self_similar_grid(alpha, dim, t, points, points_per_scale), opts);
    for (auto& r : reps) finalize(r, opts.spread_factor);
    return reps;
}

}  // namespace fracdt
