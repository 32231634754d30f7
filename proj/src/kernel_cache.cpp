#include "fracdt/kernel_cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace fracdt {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

KernelCache::KernelCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::optional<KernelCache> KernelCache::from_env() {
    const char* env = std::getenv("FRACDT_CACHE_DIR");
    if (env == nullptr || *env == '\0') return std::nullopt;
    return KernelCache(env);
}

std::filesystem::path KernelCache::path_for(const std::string& quantity, const KernelSpec& spec,
                                            const Grid& grid) const {
    std::string name = quantity + "_a" + g17(spec.alpha) + "_n" + std::to_string(spec.dim) + "_t" + g17(spec.t) +
                       "_L" + g17(grid.extent) + "_m" + std::to_string(grid.points) + ".csv";
    return dir_ / name;
}

std::optional<SampledField> KernelCache::load(const std::string& quantity, const KernelSpec& spec,
                                              const Grid& grid) const {
    std::ifstream in(path_for(quantity, spec, grid));
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    SampledField f(grid);
    std::size_t i = 0;
    while (std::getline(in, line) && i < f.size()) {
        const auto pos = line.rfind(',');
        if (pos == std::string::npos) return std::nullopt;
        f[i++] = std::strtod(line.c_str() + pos + 1, nullptr);
    }
    if (i != f.size()) return std::nullopt;
    return f;
}

void KernelCache::store(const std::string& quantity, const KernelSpec& spec, const SampledField& field) const {
    const auto target = path_for(quantity, spec, field.grid);
    if (std::filesystem::exists(target)) return;
    std::ostringstream tmp_name;
    tmp_name << target.filename().string() << ".tmp." << std::this_thread::get_id();
    const auto tmp = dir_ / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary);
        out << (field.grid.dim == 1 ? "x,value\n" : "x1,x2,value\n");
        for (std::size_t i = 0; i < field.size(); ++i) {
            const Point x = field.grid.node(i);
            out << g17(x[0]) << ',';
            if (field.grid.dim == 2) out << g17(x[1]) << ',';
            out << g17(field[i]) << '\n';
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace fracdt
