#include <iostream>

#include "CLI11.hpp"
#include "experiments.h"

int main(int argc, char **argv) {
    CLI::App app{"Simulator for comparison-verified public quantum coins"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<size_t> dense_limit;

    for (const auto &name : qcoins::command_names()) {
        auto *sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--seed", seed, "Master seed");
        sub->add_option("--trials", trials, "Monte-Carlo trials per experiment");
        sub->add_option("--out", out, "Output file (stdout when omitted)");
        sub->add_option("--format", format, "csv or json");
        sub->add_option("--dense-limit", dense_limit, "Maximum dense dimension");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    qcoins::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = qcoins::ExperimentConfig::load(config_path);
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (trials) {
            cfg.trials = *trials;
        }
        if (out) {
            cfg.out = *out;
        }
        if (format) {
            cfg.format = qcoins::parse_format(*format);
        }
        if (dense_limit) {
            cfg.dense_limit = *dense_limit;
        }
        cfg.validate();
    } catch (const qcoins::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::string error;
    int code = qcoins::run_command(command, cfg, &error);
    if (code == 2) {
        std::cerr << "error: " << error << "\n";
    } else if (code == 1) {
        std::cerr << command << ": at least one assertion failed\n";
    }
    return code;
}
