#pragma once

#include "fracdt/spectral.hpp"
#include "fracdt/transforms.hpp"

#include <optional>
#include <vector>

namespace fracdt {

/// Power weight |x|^beta of class A_p. For p = 1 the A_1 range -n < beta <= 0
/// applies, otherwise -n < beta < n(p - 1).
struct PowerWeight {
    double beta = 0.0;
    double p = 2.0;
    int dim = 1;
    bool admissible = true;
};

PowerWeight make_power_weight(double beta, double p, int dim);

/// Weight at every node; the origin node gets the mean of |x|^beta over its cell.
SampledField weight_field(const PowerWeight& w, const Grid& grid);

/// Riemann-sum (sum |f|^p w h^n)^{1/p}; p = inf gives max |f|.
double lp_norm(const SampledField& f, double p, const std::optional<PowerWeight>& w = std::nullopt);

struct MaximalParams {
    double q = 1.0;
    /// Ball radii; 0 is the single-node ball.
    std::vector<double> radii;
};

/// 0, h, 2h, 4h, ... up to L/4.
std::vector<double> dyadic_radii(const Grid& grid);
MaximalParams default_maximal_params(const Grid& grid, double q = 1.0);

/// Mean of f over the discrete ball of radius r centred at every node (torus).
SampledField ball_average(const SampledField& f, double r);

/// Centred M_q f = (M |f|^q)^{1/q} over the configured radii.
SampledField hl_maximal(const SampledField& f, const MaximalParams& params);
SampledField hl_maximal(const SampledField& f, double q = 1.0);

/// Mean oscillation (1/|B|) sum_B |f - f_B| for the ball of radius r at every centre.
SampledField mean_oscillation(const SampledField& f, double r);

/// f^#(x): sup over discrete balls containing x of the mean oscillation.
SampledField sharp_maximal(const SampledField& f, const std::vector<double>& radii);
SampledField sharp_maximal(const SampledField& f);
double bmo_norm(const SampledField& f, const std::vector<double>& radii);
double bmo_norm(const SampledField& f);

/// Weighted measure of {|f| > sigma}.
double distribution_level(const SampledField& f, double sigma, const std::optional<PowerWeight>& w = std::nullopt);

struct CotlarField {
    SampledField ratio;
    SampledField numerator;
    SampledField denominator;
    /// Nodes where the denominator vanishes but the numerator does not.
    std::size_t violations = 0;
    double sup() const { return ratio.max_abs(); }
};

/// T*_M f / (M(T_{(-M,M)} f) + M_q f). The denominator uses the inclusive
/// window (-M, M); eps defaults to 1e-14 ||f||_inf.
CotlarField cotlar_ratio(const SampledField& f, const TransformSpec& spec, long m, double q,
                         WindowMode numerator_mode = WindowMode::inclusive, std::optional<double> eps = std::nullopt);

}  // namespace fracdt
