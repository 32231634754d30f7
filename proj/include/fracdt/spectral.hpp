#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an inverse transform leaves a non-negligible imaginary part,
/// i.e. the applied symbol was not conjugate-symmetric.
class ImaginaryResidueError : public Error {
public:
    using Error::Error;
};

using Point = std::array<double, 2>;
using Frequency = std::array<double, 2>;

/**
 * Periodized uniform grid on [-L/2, L/2)^n, n in {1, 2}.
 *
 * Node i along an axis sits at -L/2 + i*h. Spectral data is kept in FFT
 * order: index k maps to the signed wavenumber k (k < m/2) or k - m
 * (k >= m/2), so index m/2 is the Nyquist node -m/2.
 */
struct Grid {
    int dim = 1;
    double extent = 1.0;
    std::size_t points = 16;

    double spacing() const { return extent / static_cast<double>(points); }
    std::size_t size() const { return dim == 1 ? points : points * points; }
    /// Cell volume h^n.
    double cell() const;

    double coordinate(std::size_t i) const { return -0.5 * extent + static_cast<double>(i) * spacing(); }
    Point node(std::size_t flat) const;
    /// Flat index of the node at the origin.
    std::size_t origin() const;

    long signed_wavenumber(std::size_t k) const;
    bool is_nyquist(std::size_t flat) const;
    Frequency frequency(std::size_t flat) const;

    bool operator==(const Grid&) const = default;
};

Grid make_grid(int dim, double extent, std::size_t points);

/// Real samples at grid nodes, row-major for n = 2 (first coordinate slowest).
struct SampledField {
    Grid grid;
    std::vector<double> values;

    SampledField() = default;
    explicit SampledField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    SampledField(const Grid& g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double max_abs() const;
    double mean() const;
    double min() const;
    double max() const;
    bool finite() const;

    SampledField& operator+=(const SampledField& o);
    SampledField& operator-=(const SampledField& o);
    SampledField& operator*=(double s);
};

SampledField operator+(SampledField a, const SampledField& b);
SampledField operator-(SampledField a, const SampledField& b);
SampledField operator*(double s, SampledField a);

/// max |a - b| over the grid.
double max_diff(const SampledField& a, const SampledField& b);

/// Samples fn at every node.
SampledField sample(const Grid& grid, const std::function<double(const Point&)>& fn);

/// Discrete delta at the origin scaled by h^{-n} (unit mass).
SampledField unit_delta(const Grid& grid);

/// Transform coefficients in FFT order.
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeffs;
};

struct Multiplier {
    std::function<std::complex<double>(const Frequency&)> symbol;
    std::string label;
};

/// Default bound on the relative imaginary residue of an inverse transform.
inline constexpr double kDefaultResidueTol = 1e-10;

SpectralField forward(const SampledField& f);

/// Inverse transform; throws ImaginaryResidueError when max |Im| exceeds
/// residue_tol times the coefficient scale (1/size) * sum |c_k|.
SampledField inverse(const SpectralField& s, double residue_tol = kDefaultResidueTol);

SampledField transform_roundtrip(const SampledField& f);

/// Pointwise product with the symbol. At Nyquist nodes only the real part
/// of the symbol is used.
SpectralField apply_symbol(const SpectralField& s, const Multiplier& mu);

SampledField apply_multiplier(const SampledField& f, const Multiplier& mu,
                              double residue_tol = kDefaultResidueTol);

/// |xi|^{2 alpha}, with the alpha = 1 case kept exact.
double fractional_power(const Frequency& xi, double alpha);

Multiplier heat_multiplier(double t, double alpha);

/// e^{-t(-Delta)^alpha} f. Requires t > 0 and 0 < alpha <= 1.
SampledField heat_semigroup(const SampledField& f, double t, double alpha);

void check_heat_params(double t, double alpha);

/// max |f| over nodes with |x| >= L/4, relative to max |f|. Zero for f = 0.
double boundary_decay(const SampledField& f);

}  // namespace fracdt
