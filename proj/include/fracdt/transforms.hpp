#pragma once

#include "fracdt/kernels.hpp"
#include "fracdt/lacunary.hpp"
#include "fracdt/spectral.hpp"

#include <array>
#include <vector>

namespace fracdt {

/// Index window N = (N1, N2) of a partial sum T_N.
struct Window {
    long n1 = 0;
    long n2 = 1;
    long width() const { return n2 - n1 + 1; }
};

/// strict: N1 < N2 as in the definition of T_N and T*.
/// inclusive: N1 <= N2, admitting single-term windows.
enum class WindowMode { strict, inclusive };

struct TransformSpec {
    double alpha = 0.5;
    LacunarySequence seq;
    WeightSequence weights;

    TransformSpec(double alpha, LacunarySequence seq, WeightSequence weights);
};

/// Truncation horizon M of T*_M: windows with -M <= N1 < N2 <= M.
struct MaximalHorizon {
    long m = 1;
};

/// Throws std::out_of_range when N is not a valid window for the sequence.
void check_window(const TransformSpec& spec, Window n, WindowMode mode = WindowMode::strict);
void check_horizon(const TransformSpec& spec, MaximalHorizon h);

/// m_N(xi) = sum_j v_j (e^{-a_{j+1}|xi|^{2a}} - e^{-a_j|xi|^{2a}}).
double transform_symbol(const TransformSpec& spec, Window n, const Frequency& xi);

Multiplier transform_multiplier(const TransformSpec& spec, Window n, WindowMode mode = WindowMode::strict);

/// T_N f applied as one fused multiplier.
SampledField differential_transform(const SampledField& f, const TransformSpec& spec, Window n,
                                    WindowMode mode = WindowMode::strict);

/// sup over the grid's frequency nodes of |m_N(xi)|.
double transform_multiplier_bound(const TransformSpec& spec, Window n, const Grid& grid,
                                  WindowMode mode = WindowMode::strict);

/// K_N sampled on the grid. Requires the smallest time a_{N1} to be resolved.
SampledField transform_kernel(const TransformSpec& spec, Window n, const Grid& grid,
                              WindowMode mode = WindowMode::strict, const KernelTolerances& tol = {});

/// grad K_N via the symbols i xi_j m_N(xi).
std::vector<SampledField> transform_kernel_gradient(const TransformSpec& spec, Window n, const Grid& grid,
                                                    WindowMode mode = WindowMode::strict,
                                                    const KernelTolerances& tol = {});

struct CzOptions {
    double spread_factor = 50.0;
    /// Excised neighbourhood of the origin, in grid cells.
    double min_radius_cells = 4.0;
    double interior = 0.25;
    KernelTolerances tol{};
};

/// Size and smoothness sups |K_N(y)||y|^n and |grad K_N(y)||y|^{n+1} over a
/// family of (inclusive) windows; sweep parameter is the window width.
std::array<BoundReport, 2> check_cz_bounds(const TransformSpec& spec, const std::vector<Window>& family,
                                           const Grid& grid, const CzOptions& opts = {});

/// T*_M f = sup over windows inside [-M, M] of |T_N f|, by prefix sums and
/// running extrema: T_{(N1,N2)} = S_{N2} - S_{N1-1}.
SampledField maximal_transform(const SampledField& f, const TransformSpec& spec, MaximalHorizon h,
                               WindowMode mode = WindowMode::strict);

struct StabilizedMaximal {
    SampledField field;
    long horizon = 0;
    bool converged = false;
    /// (M, relative max-norm change from the previous M).
    std::vector<std::pair<long, double>> history;
};

/// Doubles M from m0 until the max-norm change is <= tol (relative) or M
/// would exceed m_max.
StabilizedMaximal stabilized_maximal(const SampledField& f, const TransformSpec& spec, long m0, long m_max,
                                     double tol = 1e-6, WindowMode mode = WindowMode::strict);

/// Largest horizon M with [-M, M+1] inside the sequence index range.
long max_horizon(const TransformSpec& spec);

/// ||T_N f - T~_{N'} f||_inf / ||f||_inf for the refined pair (eta, omega).
double transform_equivalence_check(const SampledField& f, const TransformSpec& spec, Window n,
                                   const RefinementResult& refinement);

}  // namespace fracdt
