#include <iostream>

#include <CLI11.hpp>
#include <omp.h>

#include "mbump/cli.hpp"
#include "mbump/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Segregated multi-bump solutions of a coupled cubic Schroedinger system"};
    std::string config_path;
    std::string out_dir = "out";
    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "OpenMP thread count (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
    auto* seed_opt = app.add_option("--seed", seed, "seed for sampled checks, overrides the config");
    app.require_subcommand(1, 1);
    for (const auto& name : mbump::subcommands()) app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) omp_set_num_threads(threads);
    const std::string sub = app.get_subcommands().front()->get_name();
    mbump::RunConfig config;
    try {
        if (!config_path.empty()) config = mbump::load_config(config_path);
        if (seed_opt->count() > 0) config.seed = seed;
    } catch (const mbump::Error& e) {
        std::cerr << "mbump: " << e.what() << "\n";
        return mbump::report_error(sub, out_dir, e);
    }
    const int status = mbump::run(sub, config, out_dir);
    std::cerr << "mbump " << sub << ": " << (status == 0 ? "all invariants hold" : "see failure.json in " + out_dir)
              << "\n";
    return status;
}
