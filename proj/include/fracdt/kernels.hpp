#pragma once

#include "fracdt/spectral.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fracdt {

class KernelCache;

/// Raised when a grid cannot represent a kernel without visible
/// periodization or spectral truncation.
class PeriodizationError : public Error {
public:
    using Error::Error;
};

struct KernelSpec {
    double alpha = 1.0;
    int dim = 1;
    double t = 1.0;
};

void validate(const KernelSpec& spec);

/// Natural length scale t^{1/(2 alpha)} of the kernel at time t.
double kernel_scale(double t, double alpha);

/// Free-space kernel for alpha = 1 (Gauss-Weierstrass) and alpha = 1/2
/// (Poisson). Any other alpha throws; use kernel_numeric.
double kernel_closed_form(const KernelSpec& spec, const Point& x);

struct KernelTolerances {
    /// Upper limit on the majorant decay (s / (s + L/4))^{n+2alpha} at |x| = L/4
    /// (Gaussian decay exp(-(L/4)^2/4t) at alpha = 1).
    double periodization = 1e-3;
    /// Upper limit on the symbol value at the Nyquist frequency.
    double resolution = 1e-10;
};

struct GridDiagnostic {
    double periodization = 0.0;
    double resolution = 0.0;
    bool passed = true;
};

GridDiagnostic diagnose(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol = {});

/// Throws PeriodizationError when the diagnostic fails.
void require_resolved(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol = {});

/// Grid with spacing t^{1/(2alpha)} / points_per_scale and `points` nodes per axis,
/// so that kernels at different t are sampled at identical scaled positions.
Grid self_similar_grid(double alpha, int dim, double t, std::size_t points, double points_per_scale);

/// Kernel of e^{-t(-Delta)^alpha} on the periodized grid, by spectral inversion
/// of the discrete delta.
SampledField kernel_numeric(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol = {},
                            const KernelCache* cache = nullptr);

/// d/dt of the kernel: symbol -|xi|^{2alpha} e^{-t|xi|^{2alpha}}.
SampledField kernel_time_derivative(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol = {});

/// Spatial gradient, one field per dimension: symbols i xi_j e^{-t|xi|^{2alpha}}.
std::vector<SampledField> kernel_gradient(const KernelSpec& spec, const Grid& grid, const KernelTolerances& tol = {});

/// d/dt of the spatial gradient.
std::vector<SampledField> kernel_time_gradient(const KernelSpec& spec, const Grid& grid,
                                               const KernelTolerances& tol = {});

/// Pointwise Euclidean norm of a vector field.
SampledField magnitude(const std::vector<SampledField>& components);

enum class BoundId { size_i, dt_ii, grad_iii, dtgrad_iv, czsize, czgrad };

std::string to_string(BoundId id);

struct SweepEntry {
    double parameter = 0.0;  // t for kernel bounds, window width for CZ bounds
    double sup_ratio = 0.0;
};

struct BoundReport {
    BoundId bound_id = BoundId::size_i;
    double sup_ratio = 0.0;
    double argmax_parameter = 0.0;
    Point argmax_x{};
    std::vector<SweepEntry> sweep;
    bool stable = true;
    double spread = 1.0;
    /// Least-squares slope of log(per-sweep sup) against log(parameter).
    double trend = 0.0;
    /// For size_i: min kernel value over the grid relative to the peak.
    std::optional<double> min_relative;
};

struct BoundOptions {
    double spread_factor = 50.0;
    /// Ratios are evaluated where |x| <= interior * L (periodization-free zone).
    double interior = 0.25;
    KernelTolerances tol{};
};

/// Fills sup/argmax/stability from the per-parameter sweep.
void finalize(BoundReport& report, double spread_factor);

/// The four heat-kernel bounds (i)-(iv) on a fixed grid.
std::array<BoundReport, 4> check_kernel_bounds(double alpha, int dim, const std::vector<double>& t_sweep,
                                               const Grid& grid, const BoundOptions& opts = {});

/// Same bounds, each t evaluated on self_similar_grid(alpha, dim, t, points, points_per_scale).
std::array<BoundReport, 4> check_kernel_bounds_scaled(double alpha, int dim, const std::vector<double>& t_sweep,
                                                      std::size_t points, double points_per_scale,
                                                      const BoundOptions& opts = {});

}  // namespace fracdt
