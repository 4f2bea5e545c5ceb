#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "lab/harness.hpp"

namespace {

int default_threads() {
    const char* env = std::getenv("LAB_THREADS");
    if (env == nullptr) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for kernel spectra and gas statistics"};
    app.require_subcommand(0, 0);

    std::string experiment, config_path, out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int threads = default_threads();

    app.add_option("experiment", experiment,
                   "spectrum | gas | fekete | discrepancy-boundary | "
                   "discrepancy-bulk | sandwich | verify, or: describe <name>")
        ->required();
    std::string describe_target;
    app.add_option("name", describe_target, "experiment to describe");
    app.add_option("--config", config_path, "JSON run configuration");
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--threads", threads, "worker count (default LAB_THREADS or 1)");
    app.add_option("--out", out_dir, "override the output directory");

    CLI11_PARSE(app, argc, argv);
    have_seed = seed_opt->count() > 0;

    if (experiment == "describe") {
        if (describe_target.empty()) {
            std::fprintf(stderr, "error: describe needs an experiment name\n");
            return 2;
        }
        try {
            std::fputs(lab::harness::describe(describe_target).c_str(), stdout);
            return 0;
        } catch (const lab::InvalidArgumentError& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
    }

    lab::harness::RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot read %s\n", config_path.c_str());
            return 2;
        }
        std::ostringstream text;
        text << in.rdbuf();
        try {
            cfg = lab::harness::parse_config(
                lab::harness::parse_json_text(text.str()));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
        if (cfg.experiment != experiment) {
            std::fprintf(stderr,
                         "error: config is for \"%s\" but \"%s\" was requested\n",
                         cfg.experiment.c_str(), experiment.c_str());
            return 2;
        }
    } else {
        cfg.experiment = experiment;
    }
    if (have_seed) cfg.seed = seed;
    if (threads >= 1) cfg.threads = threads;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return lab::harness::run(cfg);
}
