#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rollscan/metrics.hpp"
#include "rollscan/scene.hpp"
#include "rollscan/shutter.hpp"

namespace rollscan {

enum class LabelFormat { Yolo, Coco, Both };

/// Command-line values that take precedence over the config file.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> format;
};

/// Parses a config file, wrapping JSON syntax errors in ConfigError.
nlohmann::json load_config_file(const std::filesystem::path& path);

ReadoutModel readout_from_json(const nlohmann::json& j);
nlohmann::json readout_to_json(const ReadoutModel& model);
MetricConfig metrics_from_json(const nlohmann::json& j);

struct SynthConfig {
    ReadoutModel model;
    std::optional<GeneratorConfig> generator;  // exactly one of generator/scene
    std::optional<Scene> scene;
    int captures = 1;
    std::uint64_t seed = 0;
    LabelFormat format = LabelFormat::Both;
    int workers = 1;
};
SynthConfig parse_synth_config(const nlohmann::json& j, const CliOverrides& overrides);

/// Renders capture bursts to disk: captures/capture_NNNNNN/{frames/,
/// sequence.json, scene.json, tracks.json} plus global-shutter ground truth
/// and a manifest. Fully deterministic for a fixed config and seed.
void run_synth(const SynthConfig& config, const std::filesystem::path& out);

struct RollConfig {
    ReadoutModel model;
    std::filesystem::path input;  // a synth output root
    LabelFormat format = LabelFormat::Both;
    bool merge_fragments = false;
    int workers = 1;
};
RollConfig parse_roll_config(const nlohmann::json& j, const CliOverrides& overrides);

/// Composes the GS/RS image pair and both ground-truth variants for every
/// burst under the input root. All bursts are validated before anything is
/// written.
void run_roll(const RollConfig& config, const std::filesystem::path& out);

struct AnnotateConfig {
    ReadoutModel model;
    std::filesystem::path input;
    LabelFormat format = LabelFormat::Both;
    bool merge_fragments = false;
};
AnnotateConfig parse_annotate_config(const nlohmann::json& j, const CliOverrides& overrides);

/// Ground-truth files only; lets annotations be regenerated (e.g. with a
/// different fragmentation policy) without re-composing images.
void run_annotate(const AnnotateConfig& config, const std::filesystem::path& out);

struct EvalConfig {
    std::filesystem::path detections;    // COCO results .json or YOLO dir
    std::filesystem::path ground_truth;  // COCO GT .json or YOLO dir
    std::optional<ImageSize> image_size;  // required for YOLO ground truth
    MetricConfig metrics;
};
EvalConfig parse_eval_config(const nlohmann::json& j, const CliOverrides& overrides);

EvalReport run_eval(const EvalConfig& config, const std::filesystem::path& out);

/// Reads two report.json files and writes the delta table.
ReportDelta run_compare(const std::filesystem::path& report_a,
                        const std::filesystem::path& report_b,
                        const std::filesystem::path& out);

struct SweepConfig {
    ReadoutModel model;
    GeneratorConfig generator;
    std::vector<double> speed_multipliers{1.0, 10.0};
    int captures = 4;
    std::uint64_t seed = 0;
    MetricConfig metrics;
    LabelFormat format = LabelFormat::Both;
    bool merge_fragments = false;
    int workers = 1;
};
SweepConfig parse_sweep_config(const nlohmann::json& j, const CliOverrides& overrides);

struct SweepEntry {
    double multiplier = 0.0;
    EvalReport report;
};

/// The speed-sweep experiment: per multiplier, generates scenes (same seeds
/// across multipliers, so only speeds change), composes GS/RS pairs, and
/// scores the GS ground truth replayed as unit-confidence detections
/// against the RS ground truth.
std::vector<SweepEntry> run_sweep(const SweepConfig& config, const std::filesystem::path& out);

/// Directory name for one sweep multiplier ("mult_10", "mult_2.5").
std::string multiplier_dir_name(double multiplier);

}  // namespace rollscan
