#pragma once

#include "fracdt/config.hpp"
#include "fracdt/report.hpp"

#include <filesystem>
#include <functional>
#include <optional>

namespace fracdt {

/// Checks every referenced parameter of the experiment without running it.
void validate_experiment(const ExperimentConfig& cfg);

/// Runs the experiment named by cfg.id and returns its report (nothing written).
Report run_experiment(const ExperimentConfig& cfg);

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;
    GoldenMode golden = GoldenMode::check;
    bool use_golden = true;
};

/// Runs, applies the golden regression and writes <out_dir>/<id>/.
Report run_and_write(ExperimentConfig cfg, const RunOptions& opts);

Report run_l2_bound(const ExperimentConfig& cfg);
Report run_kernel_bounds(const ExperimentConfig& cfg);
Report run_cz_bounds(const ExperimentConfig& cfg);
Report run_cotlar(const ExperimentConfig& cfg);
Report run_weak_type(const ExperimentConfig& cfg);
Report run_weighted_lp(const ExperimentConfig& cfg);
Report run_bmo_check(const ExperimentConfig& cfg);
Report run_local_growth(const ExperimentConfig& cfg);
Report run_convergence(const ExperimentConfig& cfg);
Report run_lacunary_equiv(const ExperimentConfig& cfg);

}  // namespace fracdt
