#pragma once

#include "fracdt/config.hpp"
#include "fracdt/kernels.hpp"
#include "fracdt/report.hpp"
#include "fracdt/transforms.hpp"

#include <random>
#include <string>

namespace fracdt::detail {

inline std::mt19937_64 rng_for(const ExperimentConfig& cfg) { return std::mt19937_64(cfg.seed); }

/// Independent standard normal samples.
SampledField random_field(const Grid& grid, std::mt19937_64& rng);

/// Real trigonometric polynomial with random coefficients up to the given
/// wavenumber per axis, normalised to max |f| = 1.
SampledField random_band_limited(const Grid& grid, long bandwidth, std::mt19937_64& rng);

double alpha_from(const Json& doc, const std::string& key = "alpha");
WindowMode mode_from(const std::string& s);

/// Sequence and weights sections of the document.
TransformSpec transform_from(const Json& doc, double alpha, std::mt19937_64& rng);

Report start_report(const ExperimentConfig& cfg);

/// One row per sweep entry: parameter, sup_ratio.
void add_bound_table(Report& r, const std::string& name, const std::string& parameter, const BoundReport& b);

std::string describe(const BoundReport& b);

}  // namespace fracdt::detail
