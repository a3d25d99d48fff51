#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"
#include "rollscan/log.hpp"
#include "rollscan/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    rollscan::CliOverrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    if (needs_config) {
        cmd->add_option("--config", args.config, "Run configuration (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
    }
    cmd->add_option("--out", args.out, "Output directory (everything is written below it)")
        ->required();
    cmd->add_option("--seed", args.overrides.seed, "Override the config seed");
    cmd->add_option("--workers", args.overrides.workers, "Concurrent capture workers");
    cmd->add_option("--format", args.overrides.format, "Label format: yolo|coco|both")
        ->check(CLI::IsMember({"yolo", "coco", "both"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rollscan: paired global/rolling-shutter dataset synthesis and evaluation"};
    app.require_subcommand(1);

    CommonArgs synth_args, roll_args, annotate_args, eval_args, sweep_args, compare_args;
    std::string report_a, report_b;

    CLI::App* synth = app.add_subcommand("synth", "Render seeded capture bursts to disk");
    add_common(synth, synth_args);

    CLI::App* roll = app.add_subcommand("roll", "Compose GS/RS pairs and ground truth from bursts");
    add_common(roll, roll_args);

    CLI::App* annotate =
        app.add_subcommand("annotate", "Regenerate ground-truth files from stored tracks");
    add_common(annotate, annotate_args);

    CLI::App* eval = app.add_subcommand("eval", "Score detections against ground truth");
    add_common(eval, eval_args);

    CLI::App* compare = app.add_subcommand("compare", "Delta table between two eval reports");
    compare->add_option("report_a", report_a, "First report.json")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("report_b", report_b, "Second report.json")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(compare, compare_args, /*needs_config=*/false);

    CLI::App* sweep = app.add_subcommand("sweep", "Speed-multiplier experiment with reports");
    add_common(sweep, sweep_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            const auto config = rollscan::parse_synth_config(
                rollscan::load_config_file(synth_args.config), synth_args.overrides);
            rollscan::run_synth(config, synth_args.out);
        } else if (roll->parsed()) {
            const auto config = rollscan::parse_roll_config(
                rollscan::load_config_file(roll_args.config), roll_args.overrides);
            rollscan::run_roll(config, roll_args.out);
        } else if (annotate->parsed()) {
            const auto config = rollscan::parse_annotate_config(
                rollscan::load_config_file(annotate_args.config), annotate_args.overrides);
            rollscan::run_annotate(config, annotate_args.out);
        } else if (eval->parsed()) {
            const auto config = rollscan::parse_eval_config(
                rollscan::load_config_file(eval_args.config), eval_args.overrides);
            const auto report = rollscan::run_eval(config, eval_args.out);
            std::fputs(rollscan::report_to_text(report).c_str(), stdout);
        } else if (compare->parsed()) {
            const auto delta = rollscan::run_compare(report_a, report_b, compare_args.out);
            std::fputs(rollscan::delta_to_text(delta).c_str(), stdout);
        } else if (sweep->parsed()) {
            const auto config = rollscan::parse_sweep_config(
                rollscan::load_config_file(sweep_args.config), sweep_args.overrides);
            rollscan::run_sweep(config, sweep_args.out);
        }
    } catch (const rollscan::ConfigError& e) {
        rollscan::log::error(std::string("config: ") + e.what());
        return 2;
    } catch (const rollscan::DataError& e) {
        rollscan::log::error(std::string("data: ") + e.what());
        return 3;
    } catch (const rollscan::IoError& e) {
        rollscan::log::error(std::string("io: ") + e.what());
        return 4;
    } catch (const std::exception& e) {
        rollscan::log::error(e.what());
        return 1;
    }
    return 0;
}
