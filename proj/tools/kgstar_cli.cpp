// Command-line front end: experiment orchestration over the header-only
// library.  See README.md for the config schema and artifact formats.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kgstar/cli.hpp"
#include "kgstar/config.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        std::cerr << "cannot read config file: " << path << "\n";
        std::exit(1);
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Klein-Gordon solver on star-shaped networks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    int threads = 0;
    long panel_cap = 0;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads (overrides run.threads)");
    app.add_option("--panel-cap", panel_cap, "oscillatory panel budget");

    for (const char* name : {"validate", "eigen-check", "transform-check", "simulate",
                             "asymptotics", "decay-scan", "step-sweep"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    if (threads == 0) {
        if (const char* env = std::getenv("KGSTAR_THREADS")) threads = std::atoi(env);
    }

    kgstar::ExperimentConfig cfg;
    try {
        cfg = kgstar::parse_config(read_file(config_path));
    } catch (const kgstar::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    kgstar::cli::RunOptions opts;
    opts.out_dir = out_dir;
    opts.threads = threads;
    opts.panel_cap = panel_cap;
    return kgstar::cli::run(app.get_subcommands().front()->get_name(), cfg, opts);
}
