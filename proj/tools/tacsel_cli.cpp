#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

#include "tacsel/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tacsel: active sampling for tactile hardness classification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string strategy;
    uint64_t seed = 0;
    bool seed_set = false;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "experiment config file");
        if (needs_config) c->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option_function<uint64_t>(
            "--seed",
            [&](uint64_t s) {
                seed = s;
                seed_set = true;
            },
            "override runs.seed");
    };

    auto* generate = app.add_subcommand("generate", "write a synthetic press dataset + manifest");
    add_common(generate, true);

    auto* run = app.add_subcommand("run", "run the active sampling experiment");
    add_common(run, true);
    run->add_option("--strategy", strategy, "only this strategy (entropy|variance|random)");

    auto* sweep = app.add_subcommand("sweep-dropout", "baseline accuracy/MAE over dropout rates");
    add_common(sweep, true);

    std::string results_dir;
    auto* report = app.add_subcommand("report", "summary table and SVG plots from run CSVs");
    report->add_option("results", results_dir, "directory containing aggregate.csv");
    report->add_option("--config", results_dir, "directory containing aggregate.csv");
    report->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // normalize CLI11's parse exit codes onto the config-error code
        return app.exit(e) == 0 ? 0 : tacsel::kExitConfig;
    }
    if (report->parsed() && results_dir.empty()) {
        std::fprintf(stderr, "config error: report needs a results directory\n");
        return tacsel::kExitConfig;
    }

    tacsel::CommandOptions opts;
    opts.config_path = config_path;
    opts.out_dir = out_dir;
    if (!strategy.empty()) opts.strategy = strategy;
    if (seed_set) opts.seed = seed;

    if (generate->parsed()) return tacsel::cmd_generate(opts);
    if (run->parsed()) return tacsel::cmd_run(opts);
    if (sweep->parsed()) return tacsel::cmd_sweep_dropout(opts);
    if (report->parsed()) return tacsel::cmd_report(results_dir, out_dir);
    return 1;
}
