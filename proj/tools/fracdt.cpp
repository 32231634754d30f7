#include "fracdt/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace fracdt;

int main(int argc, char** argv) {
    CLI::App app{"Fractional heat-semigroup differential transform experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment");
    std::string id, config_path, out_dir = "out";
    std::uint64_t seed = 0;
    bool golden_update = false, no_golden = false;
    run->add_option("experiment", id, "Experiment id (see 'fracdt list')")->required();
    run->add_option("--config", config_path, "JSON config file; defaults are used when omitted");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
    run->add_flag("--golden-update", golden_update, "Rewrite the golden file from this run");
    run->add_flag("--no-golden", no_golden, "Skip the golden regression");

    auto* list = app.add_subcommand("list", "List experiment ids");

    auto* validate = app.add_subcommand("validate-config", "Check a config file without running it");
    std::string validate_path;
    validate->add_option("path", validate_path)->required()->check(CLI::ExistingFile);

    auto* defaults = app.add_subcommand("default-config", "Print the default config of an experiment");
    std::string default_id;
    defaults->add_option("experiment", default_id)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& e : experiment_ids()) std::cout << e << "\n";
            return 0;
        }
        if (defaults->parsed()) {
            std::cout << default_config(default_id).dump(2) << "\n";
            return 0;
        }
        if (validate->parsed()) {
            const ExperimentConfig cfg = load_config(validate_path);
            validate_experiment(cfg);
            std::cout << "ok: " << cfg.id << " (config hash " << config_hash(cfg) << ")\n";
            return 0;
        }
        ExperimentConfig cfg = config_path.empty() ? parse_config(Json{{"experiment", id}}) : load_config(config_path);
        if (cfg.id != id) {
            std::cerr << "error: config is for '" << cfg.id << "', not '" << id << "'\n";
            return 2;
        }
        RunOptions opts;
        opts.out_dir = out_dir;
        if (*seed_opt) opts.seed = seed;
        opts.golden = golden_update ? GoldenMode::update : GoldenMode::check;
        opts.use_golden = !no_golden;
        const Report r = run_and_write(cfg, opts);
        for (const auto& v : r.verdicts) std::cout << to_string(v.status) << "  " << v.name << "  " << v.detail << "\n";
        std::cout << r.experiment << ": " << to_string(r.overall()) << " (" << (opts.out_dir / r.experiment).string()
                  << ")\n";
        return r.overall() == Status::fail ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
