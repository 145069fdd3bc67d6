#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "airylab/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"beta-ensemble edge statistics laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int threads = -1;
    std::string out_dir;
    bool emit_samples = false;

    std::vector<CLI::App*> subs;
    for (const char* name :
         {"semicircle", "clt", "ensemble-trace", "trace-agreement", "kernel",
          "trace-mc", "excursion-identity", "okounkov", "semigroup-check"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--threads", threads, "worker thread count");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--emit-samples", emit_samples, "write raw sample CSVs");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string experiment = app.get_subcommands().front()->get_name();
    try {
        auto cfg = airylab::load_config_file(config_path, experiment);
        if (have_seed) cfg.seed = seed;
        if (threads >= 0) cfg.threads = threads;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (emit_samples) cfg.emit_samples = true;

        const auto summary = airylab::run_experiment(cfg);

        namespace fs = std::filesystem;
        const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
        fs::create_directories(dir);
        std::ofstream out(dir / (experiment + ".json"));
        out << summary.dump(2) << "\n";
        std::cout << summary.dump(2) << std::endl;

        return airylab::all_passed(summary) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
