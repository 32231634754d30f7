#pragma once

#include "fracdt/kernels.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace fracdt {

/// On-disk kernel tables, one CSV file per (quantity, alpha, n, t, L, m).
///
/// Files hold (x, value) rows (x1, x2, value in 2-d) with 17 significant
/// digits. Entries are written once through a temporary file and renamed into
/// place, so concurrent readers only ever see complete files.
class KernelCache {
public:
    explicit KernelCache(std::filesystem::path dir);

    /// Cache rooted at $FRACDT_CACHE_DIR, if set and non-empty.
    static std::optional<KernelCache> from_env();

    std::filesystem::path path_for(const std::string& quantity, const KernelSpec& spec, const Grid& grid) const;

    std::optional<SampledField> load(const std::string& quantity, const KernelSpec& spec, const Grid& grid) const;
    void store(const std::string& quantity, const KernelSpec& spec, const SampledField& field) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

}  // namespace fracdt
