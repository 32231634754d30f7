#include "fracdt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracdt {

namespace {

struct Offset {
    long d1 = 0;
    long d2 = 0;
};

std::vector<Offset> ball_offsets(const Grid& grid, double r) {
    const double h = grid.spacing();
    const long reach = std::min(static_cast<long>(std::floor(r / h * (1.0 + 1e-12))),
                                static_cast<long>(grid.points / 2) - 1);
    const double r2 = (r / h) * (r / h) * (1.0 + 1e-12);
    std::vector<Offset> out;
    if (grid.dim == 1) {
        for (long d = -reach; d <= reach; ++d) out.push_back({d, 0});
        return out;
    }
    for (long d1 = -reach; d1 <= reach; ++d1)
        for (long d2 = -reach; d2 <= reach; ++d2)
            if (static_cast<double>(d1 * d1 + d2 * d2) <= r2) out.push_back({d1, d2});
    return out;
}

std::size_t wrap(long i, std::size_t m) {
    const long mm = static_cast<long>(m);
    return static_cast<std::size_t>(((i % mm) + mm) % mm);
}

std::size_t shifted(const Grid& grid, std::size_t flat, Offset d) {
    const std::size_t m = grid.points;
    if (grid.dim == 1) return wrap(static_cast<long>(flat) + d.d1, m);
    const long i1 = static_cast<long>(flat / m), i2 = static_cast<long>(flat % m);
    return wrap(i1 + d.d1, m) * m + wrap(i2 + d.d2, m);
}

// Mean of |x|^beta over the square [-a, a]^n.
double origin_cell_average(double beta, int dim, double h) {
    const double a = 0.5 * h;
    if (dim == 1) return std::pow(a, beta) / (beta + 1.0);
    // 8 triangles in polar form: int_0^{pi/4} int_0^{a/cos} r^{beta+1} dr dtheta.
    const int steps = 2000;
    const double top = 0.25 * std::numbers::pi;
    double s = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double th = top * k / steps;
        const double wk = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        s += wk * std::pow(std::cos(th), -(beta + 2.0));
    }
    s *= top / (3.0 * steps);
    return 8.0 * std::pow(a, beta + 2.0) / (beta + 2.0) * s / (4.0 * a * a);
}

void require_admissible(const std::optional<PowerWeight>& w, const Grid& grid) {
    if (!w) return;
    if (!w->admissible) throw Error("power weight |x|^" + std::to_string(w->beta) + " is not admissible");
    if (w->dim != grid.dim) throw Error("weight dimension does not match grid");
}

}  // namespace

PowerWeight make_power_weight(double beta, double p, int dim) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("weight class needs 1 <= p < inf");
    if (dim != 1 && dim != 2) throw Error("unsupported dimension " + std::to_string(dim));
    const double n = dim;
    const bool ok = p == 1.0 ? (beta > -n && beta <= 0.0) : (beta > -n && beta < n * (p - 1.0));
    return {beta, p, dim, ok};
}

SampledField weight_field(const PowerWeight& w, const Grid& grid) {
    SampledField out = sample(grid, [&](const Point& x) {
        const double r = std::hypot(x[0], x[1]);
        return r == 0.0 ? 0.0 : std::pow(r, w.beta);
    });
    out[grid.origin()] = origin_cell_average(w.beta, grid.dim, grid.spacing());
    return out;
}

double lp_norm(const SampledField& f, double p, const std::optional<PowerWeight>& w) {
    if (!(p >= 1.0)) throw Error("lp_norm needs p >= 1");
    require_admissible(w, f.grid);
    if (std::isinf(p)) return f.max_abs();
    const SampledField wt = w ? weight_field(*w, f.grid) : SampledField(f.grid, std::vector<double>(f.size(), 1.0));
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * wt[i];
    return std::pow(s * f.grid.cell(), 1.0 / p);
}

std::vector<double> dyadic_radii(const Grid& grid) {
    std::vector<double> r{0.0};
    const double h = grid.spacing();
    for (double x = h; x <= 0.25 * grid.extent * (1.0 + 1e-12); x *= 2.0) r.push_back(x);
    return r;
}

MaximalParams default_maximal_params(const Grid& grid, double q) { return {q, dyadic_radii(grid)}; }

SampledField ball_average(const SampledField& f, double r) {
    if (r <= 0.0) return f;
    const auto offs = ball_offsets(f.grid, r);
    SampledField ker(f.grid);
    const double w = 1.0 / static_cast<double>(offs.size());
    for (const auto& d : offs) ker[shifted(f.grid, 0, d)] += w;
    SpectralField fh = forward(f);
    const SpectralField kh = forward(ker);
    for (std::size_t k = 0; k < fh.coeffs.size(); ++k) fh.coeffs[k] *= kh.coeffs[k].real();
    return inverse(fh);
}

SampledField hl_maximal(const SampledField& f, const MaximalParams& params) {
    if (!(params.q >= 1.0)) throw Error("maximal function needs q >= 1");
    if (params.radii.empty()) throw Error("maximal function needs at least one radius");
    SampledField pw(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) pw[i] = std::pow(std::abs(f[i]), params.q);
    SampledField best(f.grid);
    for (double r : params.radii) {
        const SampledField avg = ball_average(pw, r);
        for (std::size_t i = 0; i < f.size(); ++i) best[i] = std::max(best[i], std::max(avg[i], 0.0));
    }
    for (double& v : best.values) v = std::pow(v, 1.0 / params.q);
    return best;
}

SampledField hl_maximal(const SampledField& f, double q) { return hl_maximal(f, default_maximal_params(f.grid, q)); }

SampledField mean_oscillation(const SampledField& f, double r) {
    SampledField out(f.grid);
    if (r <= 0.0) return out;
    const auto offs = ball_offsets(f.grid, r);
    const SampledField mean = ball_average(f, r);
    const double w = 1.0 / static_cast<double>(offs.size());
    for (std::size_t c = 0; c < f.size(); ++c) {
        double s = 0.0;
        for (const auto& d : offs) s += std::abs(f[shifted(f.grid, c, d)] - mean[c]);
        out[c] = s * w;
    }
    return out;
}

SampledField sharp_maximal(const SampledField& f, const std::vector<double>& radii) {
    SampledField out(f.grid);
    for (double r : radii) {
        if (r <= 0.0) continue;
        const SampledField osc = mean_oscillation(f, r);
        const auto offs = ball_offsets(f.grid, r);
        for (std::size_t x = 0; x < f.size(); ++x) {
            double m = out[x];
            for (const auto& d : offs) m = std::max(m, osc[shifted(f.grid, x, d)]);
            out[x] = m;
        }
    }
    return out;
}

SampledField sharp_maximal(const SampledField& f) { return sharp_maximal(f, dyadic_radii(f.grid)); }

double bmo_norm(const SampledField& f, const std::vector<double>& radii) {
    // Every ball centre contains itself, so the max of f^# is the max oscillation.
    double best = 0.0;
    for (double r : radii)
        if (r > 0.0) best = std::max(best, mean_oscillation(f, r).max_abs());
    return best;
}

double bmo_norm(const SampledField& f) { return bmo_norm(f, dyadic_radii(f.grid)); }

double distribution_level(const SampledField& f, double sigma, const std::optional<PowerWeight>& w) {
    if (!(sigma > 0.0)) throw Error("distribution level needs sigma > 0");
    require_admissible(w, f.grid);
    const SampledField wt = w ? weight_field(*w, f.grid) : SampledField(f.grid, std::vector<double>(f.size(), 1.0));
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f[i]) > sigma) s += wt[i];
    return s * f.grid.cell();
}

CotlarField cotlar_ratio(const SampledField& f, const TransformSpec& spec, long m, double q, WindowMode numerator_mode,
                         std::optional<double> eps) {
    if (!(q > 1.0) || std::isinf(q)) throw Error("Cotlar ratio needs 1 < q < inf");
    const double e = eps.value_or(1e-14 * f.max_abs());
    CotlarField out;
    out.numerator = maximal_transform(f, spec, {m}, numerator_mode);
    const SampledField full = differential_transform(f, spec, {-m, m}, WindowMode::inclusive);
    out.denominator = hl_maximal(full, 1.0);
    out.denominator += hl_maximal(f, q);
    out.ratio = SampledField(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double num = out.numerator[i], den = out.denominator[i];
        if (den < e || den == 0.0) {
            if (num >= e && num > 0.0) ++out.violations;
            continue;
        }
        out.ratio[i] = num / den;
    }
    return out;
}

}  // namespace fracdt
