#include "fracdt/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdt {

namespace {

std::vector<double> symbol_powers(const Grid& grid, double alpha) {
    std::vector<double> p(grid.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = fractional_power(grid.frequency(k), alpha);
    return p;
}

// m_N at every frequency node.
std::vector<double> window_symbol(const TransformSpec& spec, Window n, const std::vector<double>& powers) {
    std::vector<double> sym(powers.size(), 0.0);
    std::vector<double> a, v;
    for (long j = n.n1; j <= n.n2 + 1; ++j) a.push_back(spec.seq.at(j));
    for (long j = n.n1; j <= n.n2; ++j) v.push_back(spec.weights.at(j));
    for (std::size_t k = 0; k < powers.size(); ++k) {
        const double p = powers[k];
        double prev = std::exp(-a[0] * p);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double next = std::exp(-a[i + 1] * p);
            s += v[i] * (next - prev);
            prev = next;
        }
        sym[k] = s;
    }
    return sym;
}

SampledField invert_real(const SpectralField& base, const std::vector<double>& sym) {
    SpectralField s{base.grid, base.coeffs};
    for (std::size_t k = 0; k < sym.size(); ++k) s.coeffs[k] *= sym[k];
    return inverse(s);
}

SampledField invert_derivative(const SpectralField& base, const std::vector<double>& sym, int axis) {
    SpectralField s{base.grid, base.coeffs};
    for (std::size_t k = 0; k < sym.size(); ++k) {
        if (base.grid.is_nyquist(k)) {
            s.coeffs[k] = 0.0;
            continue;
        }
        const double xi = base.grid.frequency(k)[static_cast<std::size_t>(axis)];
        s.coeffs[k] *= std::complex<double>(0.0, xi * sym[k]);
    }
    return inverse(s);
}

void require_grid_match(const SampledField& f) {
    if (!f.finite()) throw Error("input field has non-finite values");
}

}  // namespace

TransformSpec::TransformSpec(double a, LacunarySequence s, WeightSequence w)
    : alpha(a), seq(std::move(s)), weights(std::move(w)) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
    if (!weights.aligned_with(seq)) throw Error("weights are not aligned with the sequence indices");
}

void check_window(const TransformSpec& spec, Window n, WindowMode mode) {
    if (mode == WindowMode::strict ? !(n.n1 < n.n2) : !(n.n1 <= n.n2))
        throw std::out_of_range("invalid window (" + std::to_string(n.n1) + ", " + std::to_string(n.n2) +
                                "): need N1 < N2");
    if (n.n1 < spec.seq.j_min() || n.n2 + 1 > spec.seq.j_max())
        throw std::out_of_range("window (" + std::to_string(n.n1) + ", " + std::to_string(n.n2) +
                                ") outside sequence range [" + std::to_string(spec.seq.j_min()) + ", " +
                                std::to_string(spec.seq.j_max()) + "]");
}

long max_horizon(const TransformSpec& spec) { return std::min(-spec.seq.j_min(), spec.seq.j_max() - 1); }

void check_horizon(const TransformSpec& spec, MaximalHorizon h) {
    if (h.m < 1) throw std::out_of_range("horizon must be >= 1");
    if (h.m > max_horizon(spec))
        throw std::out_of_range("horizon " + std::to_string(h.m) + " exceeds sequence range");
}

double transform_symbol(const TransformSpec& spec, Window n, const Frequency& xi) {
    const double p = fractional_power(xi, spec.alpha);
    double s = 0.0;
    for (long j = n.n1; j <= n.n2; ++j)
        s += spec.weights.at(j) * (std::exp(-spec.seq.at(j + 1) * p) - std::exp(-spec.seq.at(j) * p));
    return s;
}

Multiplier transform_multiplier(const TransformSpec& spec, Window n, WindowMode mode) {
    check_window(spec, n, mode);
    return {[spec, n](const Frequency& xi) { return std::complex<double>(transform_symbol(spec, n, xi), 0.0); },
            "T_(" + std::to_string(n.n1) + "," + std::to_string(n.n2) + ")"};
}

SampledField differential_transform(const SampledField& f, const TransformSpec& spec, Window n, WindowMode mode) {
    check_window(spec, n, mode);
    require_grid_match(f);
    return invert_real(forward(f), window_symbol(spec, n, symbol_powers(f.grid, spec.alpha)));
}

double transform_multiplier_bound(const TransformSpec& spec, Window n, const Grid& grid, WindowMode mode) {
    check_window(spec, n, mode);
    const auto sym = window_symbol(spec, n, symbol_powers(grid, spec.alpha));
    double r = 0.0;
    for (double s : sym) r = std::max(r, std::abs(s));
    return r;
}

SampledField transform_kernel(const TransformSpec& spec, Window n, const Grid& grid, WindowMode mode,
                              const KernelTolerances& tol) {
    check_window(spec, n, mode);
    const KernelSpec smallest{spec.alpha, grid.dim, spec.seq.at(n.n1)};
    const GridDiagnostic d = diagnose(smallest, grid, tol);
    if (d.resolution > tol.resolution)
        throw PeriodizationError("time a_N1 = " + std::to_string(smallest.t) + " not resolved by the grid");
    return invert_real(forward(unit_delta(grid)), window_symbol(spec, n, symbol_powers(grid, spec.alpha)));
}

std::vector<SampledField> transform_kernel_gradient(const TransformSpec& spec, Window n, const Grid& grid,
                                                    WindowMode mode, const KernelTolerances& tol) {
    check_window(spec, n, mode);
    const KernelSpec smallest{spec.alpha, grid.dim, spec.seq.at(n.n1)};
    if (diagnose(smallest, grid, tol).resolution > tol.resolution)
        throw PeriodizationError("time a_N1 = " + std::to_string(smallest.t) + " not resolved by the grid");
    const auto base = forward(unit_delta(grid));
    const auto sym = window_symbol(spec, n, symbol_powers(grid, spec.alpha));
    std::vector<SampledField> out;
    for (int axis = 0; axis < grid.dim; ++axis) out.push_back(invert_derivative(base, sym, axis));
    return out;
}

std::array<BoundReport, 2> check_cz_bounds(const TransformSpec& spec, const std::vector<Window>& family,
                                           const Grid& grid, const CzOptions& opts) {
    std::array<BoundReport, 2> reps;
    reps[0].bound_id = BoundId::czsize;
    reps[1].bound_id = BoundId::czgrad;
    const auto base = forward(unit_delta(grid));
    const auto powers = symbol_powers(grid, spec.alpha);
    const double r_min = opts.min_radius_cells * grid.spacing();
    const double r_max = opts.interior * grid.extent;
    const double n = grid.dim;

    for (const Window& w : family) {
        check_window(spec, w, WindowMode::inclusive);
        const KernelSpec smallest{spec.alpha, grid.dim, spec.seq.at(w.n1)};
        if (diagnose(smallest, grid, opts.tol).resolution > opts.tol.resolution)
            throw PeriodizationError("time a_N1 = " + std::to_string(smallest.t) + " not resolved by the grid");
        const auto sym = window_symbol(spec, w, powers);
        const SampledField k = invert_real(base, sym);
        std::vector<SampledField> g;
        for (int axis = 0; axis < grid.dim; ++axis) g.push_back(invert_derivative(base, sym, axis));
        const SampledField gm = magnitude(g);

        double best_k = 0.0, best_g = 0.0;
        Point at_k{}, at_g{};
        for (std::size_t i = 0; i < k.size(); ++i) {
            const Point y = grid.node(i);
            const double r = std::hypot(y[0], y[1]);
            if (r < r_min || r > r_max) continue;
            const double vk = std::abs(k[i]) * std::pow(r, n);
            const double vg = gm[i] * std::pow(r, n + 1.0);
            if (vk > best_k) best_k = vk, at_k = y;
            if (vg > best_g) best_g = vg, at_g = y;
        }
        const double width = static_cast<double>(w.width());
        reps[0].sweep.push_back({width, best_k});
        reps[1].sweep.push_back({width, best_g});
        if (best_k >= reps[0].sup_ratio) reps[0].sup_ratio = best_k, reps[0].argmax_parameter = width, reps[0].argmax_x = at_k;
        if (best_g >= reps[1].sup_ratio) reps[1].sup_ratio = best_g, reps[1].argmax_parameter = width, reps[1].argmax_x = at_g;
    }
    for (auto& r : reps) finalize(r, opts.spread_factor);
    return reps;
}

SampledField maximal_transform(const SampledField& f, const TransformSpec& spec, MaximalHorizon h, WindowMode mode) {
    check_horizon(spec, h);
    require_grid_match(f);
    const Grid& grid = f.grid;
    const std::size_t size = f.size();
    const auto base = forward(f);
    const auto powers = symbol_powers(grid, spec.alpha);
    const long lag = mode == WindowMode::strict ? 2 : 1;

    // S_k for k = -M-1 .. M; only the last `lag` prefix sums are pending
    // admission into the running extrema.
    std::vector<double> s_cur(size, 0.0);
    std::vector<std::vector<double>> pending;  // pending[0] oldest
    pending.push_back(s_cur);                  // S_{-M-1} = 0
    std::vector<double> hi(size), lo(size), out(size, 0.0);
    bool any_admitted = false;

    std::vector<double> sym(size);
    for (long b = -h.m; b <= h.m; ++b) {
        const double v = spec.weights.at(b), a0 = spec.seq.at(b), a1 = spec.seq.at(b + 1);
        for (std::size_t k = 0; k < size; ++k) sym[k] = v * (std::exp(-a1 * powers[k]) - std::exp(-a0 * powers[k]));
        const SampledField d = invert_real(base, sym);
        for (std::size_t i = 0; i < size; ++i) s_cur[i] += d[i];

        // Admit S_{b-lag}: pairs (a, b) with a <= b - lag.
        if (static_cast<long>(pending.size()) >= lag) {
            const auto& admit = pending.front();
            if (!any_admitted) {
                hi = admit;
                lo = admit;
                any_admitted = true;
            } else {
                for (std::size_t i = 0; i < size; ++i) {
                    hi[i] = std::max(hi[i], admit[i]);
                    lo[i] = std::min(lo[i], admit[i]);
                }
            }
            pending.erase(pending.begin());
        }
        if (any_admitted) {
            for (std::size_t i = 0; i < size; ++i)
                out[i] = std::max(out[i], std::max(s_cur[i] - lo[i], hi[i] - s_cur[i]));
        }
        pending.push_back(s_cur);
    }
    return SampledField(grid, std::move(out));
}

StabilizedMaximal stabilized_maximal(const SampledField& f, const TransformSpec& spec, long m0, long m_max,
                                     double tol, WindowMode mode) {
    StabilizedMaximal r;
    long m = std::max(1L, m0);
    r.field = maximal_transform(f, spec, {m}, mode);
    r.horizon = m;
    r.history.push_back({m, HUGE_VAL});
    while (2 * m <= m_max) {
        m *= 2;
        SampledField next = maximal_transform(f, spec, {m}, mode);
        const double scale = std::max(next.max_abs(), 1e-300);
        const double change = max_diff(next, r.field) / scale;
        r.history.push_back({m, change});
        r.field = std::move(next);
        r.horizon = m;
        if (change <= tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

double transform_equivalence_check(const SampledField& f, const TransformSpec& spec, Window n,
                                   const RefinementResult& refinement) {
    check_window(spec, n, WindowMode::inclusive);
    const auto [n1r, n2r] = refinement.window_map(n.n1, n.n2);
    const TransformSpec refined(spec.alpha, refinement.eta, refinement.omega);
    const SampledField lhs = differential_transform(f, spec, n, WindowMode::inclusive);
    const SampledField rhs = differential_transform(f, refined, {n1r, n2r}, WindowMode::inclusive);
    const double scale = f.max_abs();
    return scale == 0.0 ? max_diff(lhs, rhs) : max_diff(lhs, rhs) / scale;
}

}  // namespace fracdt
