#include "fracdt/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace fracdt {

namespace {

// FFTW's planner is not thread-safe; execution on fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

void fft_inplace(std::vector<std::complex<double>>& data, const Grid& grid, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int m = static_cast<int>(grid.points);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = grid.dim == 1 ? fftw_plan_dft_1d(m, buf, buf, sign, FFTW_ESTIMATE)
                             : fftw_plan_dft_2d(m, m, buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

double Grid::cell() const {
    const double h = spacing();
    return dim == 1 ? h : h * h;
}

Point Grid::node(std::size_t flat) const {
    if (dim == 1) return {coordinate(flat), 0.0};
    return {coordinate(flat / points), coordinate(flat % points)};
}

std::size_t Grid::origin() const {
    const std::size_t c = points / 2;
    return dim == 1 ? c : c * points + c;
}

long Grid::signed_wavenumber(std::size_t k) const {
    const auto m = static_cast<long>(points);
    const auto kk = static_cast<long>(k);
    return kk < m / 2 ? kk : kk - m;
}

bool Grid::is_nyquist(std::size_t flat) const {
    if (dim == 1) return flat == points / 2;
    return flat / points == points / 2 || flat % points == points / 2;
}

Frequency Grid::frequency(std::size_t flat) const {
    const double base = 2.0 * std::numbers::pi / extent;
    if (dim == 1) return {base * static_cast<double>(signed_wavenumber(flat)), 0.0};
    return {base * static_cast<double>(signed_wavenumber(flat / points)),
            base * static_cast<double>(signed_wavenumber(flat % points))};
}

Grid make_grid(int dim, double extent, std::size_t points) {
    if (dim != 1 && dim != 2) throw Error("unsupported dimension " + std::to_string(dim));
    if (!(extent > 0.0) || !std::isfinite(extent)) throw Error("grid extent must be positive");
    if (points < 16 || !is_power_of_two(points))
        throw Error("unsupported resolution " + std::to_string(points) + ": need a power of two >= 16");
    return Grid{dim, extent, points};
}

SampledField::SampledField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw Error("sample count does not match grid");
}

double SampledField::max_abs() const {
    double r = 0.0;
    for (double v : values) r = std::max(r, std::abs(v));
    return r;
}

double SampledField::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double SampledField::min() const { return *std::min_element(values.begin(), values.end()); }
double SampledField::max() const { return *std::max_element(values.begin(), values.end()); }

bool SampledField::finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

SampledField& SampledField::operator+=(const SampledField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

SampledField& SampledField::operator-=(const SampledField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

SampledField& SampledField::operator*=(double s) {
    for (double& v : values) v *= s;
    return *this;
}

SampledField operator+(SampledField a, const SampledField& b) { return a += b; }
SampledField operator-(SampledField a, const SampledField& b) { return a -= b; }
SampledField operator*(double s, SampledField a) { return a *= s; }

double max_diff(const SampledField& a, const SampledField& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) r = std::max(r, std::abs(a.values[i] - b.values[i]));
    return r;
}

SampledField sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
    SampledField f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn(grid.node(i));
    return f;
}

SampledField unit_delta(const Grid& grid) {
    SampledField f(grid);
    f[grid.origin()] = 1.0 / grid.cell();
    return f;
}

SpectralField forward(const SampledField& f) {
    SpectralField s{f.grid, std::vector<std::complex<double>>(f.size())};
    for (std::size_t i = 0; i < f.size(); ++i) s.coeffs[i] = {f.values[i], 0.0};
    fft_inplace(s.coeffs, f.grid, FFTW_FORWARD);
    return s;
}

SampledField inverse(const SpectralField& s, double residue_tol) {
    std::vector<std::complex<double>> buf = s.coeffs;
    const double n = static_cast<double>(buf.size());
    double scale = 0.0;
    for (const auto& c : buf) scale += std::abs(c);
    scale /= n;
    fft_inplace(buf, s.grid, FFTW_BACKWARD);
    SampledField out(s.grid);
    double residue = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out.values[i] = buf[i].real() / n;
        residue = std::max(residue, std::abs(buf[i].imag()) / n);
    }
    if (residue > residue_tol * scale && residue > 0.0)
        throw ImaginaryResidueError("imaginary residue " + std::to_string(residue / scale) +
                                    " exceeds tolerance: symbol is not conjugate-symmetric");
    return out;
}

SampledField transform_roundtrip(const SampledField& f) { return inverse(forward(f)); }

SpectralField apply_symbol(const SpectralField& s, const Multiplier& mu) {
    SpectralField out{s.grid, s.coeffs};
    for (std::size_t k = 0; k < out.coeffs.size(); ++k) {
        std::complex<double> sym = mu.symbol(s.grid.frequency(k));
        if (s.grid.is_nyquist(k)) sym = {sym.real(), 0.0};
        out.coeffs[k] *= sym;
    }
    return out;
}

SampledField apply_multiplier(const SampledField& f, const Multiplier& mu, double residue_tol) {
    return inverse(apply_symbol(forward(f), mu), residue_tol);
}

double fractional_power(const Frequency& xi, double alpha) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (alpha == 1.0) return r2;
    if (r2 == 0.0) return 0.0;
    return std::pow(r2, alpha);
}

void check_heat_params(double t, double alpha) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error("semigroup time must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
}

Multiplier heat_multiplier(double t, double alpha) {
    check_heat_params(t, alpha);
    return {[t, alpha](const Frequency& xi) { return std::complex<double>(std::exp(-t * fractional_power(xi, alpha)), 0.0); },
            "heat(t=" + std::to_string(t) + ",alpha=" + std::to_string(alpha) + ")"};
}

SampledField heat_semigroup(const SampledField& f, double t, double alpha) {
    return apply_multiplier(f, heat_multiplier(t, alpha));
}

double boundary_decay(const SampledField& f) {
    const double peak = f.max_abs();
    if (peak == 0.0) return 0.0;
    const double quarter = 0.25 * f.grid.extent;
    double edge = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point x = f.grid.node(i);
        if (std::hypot(x[0], x[1]) >= quarter) edge = std::max(edge, std::abs(f.values[i]));
    }
    return edge / peak;
}

}  // namespace fracdt
