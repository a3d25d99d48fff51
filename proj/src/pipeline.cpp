#include "rollscan/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"
#include "rollscan/formats.hpp"
#include "rollscan/image_io.hpp"
#include "rollscan/json_util.hpp"
#include "rollscan/log.hpp"
#include "rollscan/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace rollscan {

namespace {

constexpr int kSchemaVersion = 1;

// Any json type/access error while reading a config is a config failure.
template <typename F>
auto guard_config(F&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

void check_schema_version(const json& j) {
    const auto it = j.find("schema_version");
    if (it == j.end()) {
        throw ConfigError("config: missing schema_version");
    }
    if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
        throw ConfigError("config: unsupported schema_version (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }
}

LabelFormat format_from_string(const std::string& name) {
    if (name == "yolo") return LabelFormat::Yolo;
    if (name == "coco") return LabelFormat::Coco;
    if (name == "both") return LabelFormat::Both;
    throw ConfigError("unknown label format \"" + name + "\" (expected yolo|coco|both)");
}

bool wants_yolo(LabelFormat format) { return format != LabelFormat::Coco; }
bool wants_coco(LabelFormat format) { return format != LabelFormat::Yolo; }

std::string capture_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "capture_%06zu", index);
    return buf;
}

std::uint64_t parse_seed(const json& j, const CliOverrides& overrides, bool required) {
    if (overrides.seed) return *overrides.seed;
    if (j.contains("seed")) return j["seed"].get<std::uint64_t>();
    if (j.contains("generator") && j["generator"].is_object() &&
        j["generator"].contains("seed")) {
        return j["generator"]["seed"].get<std::uint64_t>();
    }
    if (required) {
        throw ConfigError("config: generator runs need a seed (config \"seed\" or --seed)");
    }
    return 0;
}

int parse_workers(const json& j, const CliOverrides& overrides) {
    int workers = 1;
    if (j.contains("workers")) workers = j["workers"].get<int>();
    if (overrides.workers) workers = *overrides.workers;
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    return workers;
}

LabelFormat parse_format(const json& j, const CliOverrides& overrides) {
    std::string name = "both";
    if (j.contains("format")) name = j["format"].get<std::string>();
    if (overrides.format) name = *overrides.format;
    return format_from_string(name);
}

void run_parallel(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    const int n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        threads.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& thread : threads) thread.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_text_file(const std::string& text, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string());
    }
    out << text;
}

void write_json_file(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string());
    }
    out << j.dump(2) << "\n";
}

json tracks_to_json(const std::vector<Track>& tracks, const ReadoutModel& model,
                    ImageSize size) {
    json jtracks = json::array();
    for (const Track& track : tracks) {
        json boxes = json::array();
        int class_id = 0;
        for (const BBox& box : track.boxes) {
            boxes.push_back({box.x_min, box.y_min, box.x_max, box.y_max});
            class_id = box.class_id;
        }
        jtracks.push_back({{"actor_id", track.actor_id},
                           {"class_id", class_id},
                           {"boxes", std::move(boxes)}});
    }
    return json{{"image", {{"width", size.width}, {"height", size.height}}},
                {"readout", readout_to_json(model)},
                {"tracks", std::move(jtracks)}};
}

struct StoredTracks {
    std::vector<Track> tracks;
    ImageSize size;
};

StoredTracks tracks_from_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CorruptFileError(path.string() + ": " + e.what());
    }

    StoredTracks stored;
    try {
        stored.size.width = j.at("image").at("width").get<int>();
        stored.size.height = j.at("image").at("height").get<int>();
        for (const json& jt : j.at("tracks")) {
            Track track;
            track.actor_id = jt.at("actor_id").get<int>();
            const int class_id = jt.value("class_id", 0);
            for (const json& jb : jt.at("boxes")) {
                track.boxes.push_back(BBox{jb[0].get<double>(), jb[1].get<double>(),
                                           jb[2].get<double>(), jb[3].get<double>(), class_id});
            }
            stored.tracks.push_back(std::move(track));
        }
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return stored;
}

/// Sorted capture directories under <input>/captures.
std::vector<fs::path> list_captures(const fs::path& input) {
    const fs::path root = input / "captures";
    if (!fs::is_directory(root)) {
        throw DataError(input.string() + ": no captures/ directory");
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) {
        throw DataError(root.string() + ": no capture directories");
    }
    return dirs;
}

/// Cheap pre-pass over a burst directory: sidecar consistent with the model
/// and every frame file present. Runs before any output is written.
void validate_capture_dir(const fs::path& dir, const ReadoutModel& model) {
    const fs::path meta_path = dir / "sequence.json";
    std::ifstream in(meta_path);
    if (!in) {
        throw DataError(dir.string() + ": missing sequence.json");
    }
    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw DataError(meta_path.string() + ": " + e.what());
    }
    const auto frame_count = meta.value("frame_count", std::size_t{0});
    const int height = meta.value("height", 0);
    if (frame_count < static_cast<std::size_t>(model.frames_per_capture)) {
        throw DataError(dir.string() + ": burst has " + std::to_string(frame_count) +
                        " frames, model needs " + std::to_string(model.frames_per_capture));
    }
    if (height != model.sensor_rows) {
        throw DataError(dir.string() + ": frame height " + std::to_string(height) +
                        " does not match sensor_rows " + std::to_string(model.sensor_rows));
    }
    for (std::size_t k = 0; k < frame_count; ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.png", k);
        if (!fs::exists(dir / name)) {
            throw DataError(dir.string() + ": missing frame " + name);
        }
    }
    if (!fs::exists(dir / "tracks.json")) {
        throw DataError(dir.string() + ": missing tracks.json");
    }
}

void write_ground_truth(const GroundTruthSet& gts, LabelFormat format, const fs::path& out,
                        const std::string& label_dir, const std::string& coco_name) {
    if (wants_yolo(format)) {
        write_yolo_gt(gts, out / label_dir);
    }
    if (wants_coco(format)) {
        write_coco_gt(gts, out / coco_name);
    }
}

json stats_to_json(const DatasetStats& stats) {
    json j{{"total_boxes", stats.total_boxes}};
    j["mean_box_area"] = stats.mean_box_area ? json(*stats.mean_box_area) : json(nullptr);
    j["mean_boxes_per_annotated_image"] =
        stats.mean_boxes_per_annotated_image ? json(*stats.mean_boxes_per_annotated_image)
                                             : json(nullptr);
    return j;
}

}  // namespace

json load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ReadoutModel readout_from_json(const json& j) {
    return guard_config([&] {
    jsonutil::check_keys(j, {"sensor_rows", "frames_per_capture", "scan_direction", "gs_frame_rate"},
                         "readout");
    ReadoutModel model;
    model.sensor_rows = jsonutil::require(j, "sensor_rows", "readout").get<int>();
    model.frames_per_capture = jsonutil::require(j, "frames_per_capture", "readout").get<int>();
    const std::string direction = jsonutil::get_or<std::string>(j, "scan_direction", "top_to_bottom");
    if (direction == "top_to_bottom") {
        model.scan_direction = ScanDirection::TopToBottom;
    } else if (direction == "bottom_to_top") {
        model.scan_direction = ScanDirection::BottomToTop;
    } else {
        throw ConfigError("readout.scan_direction must be top_to_bottom or bottom_to_top");
    }
    model.gs_frame_rate = jsonutil::get_or(j, "gs_frame_rate", 30.0);
    validate_model(model);
        return model;
    });
}

json readout_to_json(const ReadoutModel& model) {
    return json{
        {"sensor_rows", model.sensor_rows},
        {"frames_per_capture", model.frames_per_capture},
        {"scan_direction",
         model.scan_direction == ScanDirection::TopToBottom ? "top_to_bottom" : "bottom_to_top"},
        {"gs_frame_rate", model.gs_frame_rate},
    };
}

MetricConfig metrics_from_json(const json& j) {
    return guard_config([&] {
    jsonutil::check_keys(j, {"iou_thresholds", "confidence_threshold", "interpolation"}, "metrics");
    MetricConfig config;
    if (j.contains("iou_thresholds")) {
        config.iou_thresholds = j["iou_thresholds"].get<std::vector<double>>();
    }
    config.confidence_threshold =
        jsonutil::get_or(j, "confidence_threshold", config.confidence_threshold);
    const std::string interp = jsonutil::get_or<std::string>(j, "interpolation", "101pt");
    if (interp == "101pt") {
        config.interpolation = Interpolation::Points101;
    } else if (interp == "exact") {
        config.interpolation = Interpolation::Exact;
    } else {
        throw ConfigError("metrics.interpolation must be \"101pt\" or \"exact\"");
    }
    validate_metric_config(config);
        return config;
    });
}

SynthConfig parse_synth_config(const json& j, const CliOverrides& overrides) {
    return guard_config([&] {
    check_schema_version(j);
    jsonutil::check_keys(
        j, {"schema_version", "seed", "captures", "readout", "generator", "scene", "format",
            "workers"},
        "synth config");
    SynthConfig config;
    config.model = readout_from_json(jsonutil::require(j, "readout", "synth config"));
    const bool has_generator = j.contains("generator");
    const bool has_scene = j.contains("scene");
    if (has_generator == has_scene) {
        throw ConfigError("synth config: exactly one of \"generator\" or \"scene\" is required");
    }
    if (has_generator) {
        config.generator = generator_from_json(j["generator"]);
        config.seed = parse_seed(j, overrides, /*required=*/true);
    } else {
        config.scene = scene_from_json(j["scene"]);
        config.seed = parse_seed(j, overrides, /*required=*/false);
    }
    config.captures = jsonutil::get_or(j, "captures", 1);
    if (config.captures < 1) {
        throw ConfigError("synth config: captures must be >= 1");
    }
    config.format = parse_format(j, overrides);
    config.workers = parse_workers(j, overrides);
        return config;
    });
}

void run_synth(const SynthConfig& config, const fs::path& out) {
    fs::create_directories(out / "captures");

    const std::size_t n = static_cast<std::size_t>(config.captures);
    std::vector<std::pair<std::string, ImageGroundTruth>> gs_entries(n);

    run_parallel(n, config.workers, [&](std::size_t c) {
        const Scene scene = config.generator
                                ? random_scene(*config.generator, mix_seed(config.seed, c))
                                : *config.scene;
        const FrameSequence burst = render_burst(scene, config.model);
        const fs::path dir = out / "captures" / capture_name(c);
        save_sequence(burst, dir);
        write_json_file(scene_to_json(scene), dir / "scene.json");

        const std::vector<Track> tracks = gt_tracks(scene, config.model);
        const ImageSize size{scene.width, scene.height};
        write_json_file(tracks_to_json(tracks, config.model, size), dir / "tracks.json");

        gs_entries[c] = {capture_name(c),
                         ImageGroundTruth{size, transform_tracks_to_gs(tracks, size)}};
        log::info(capture_name(c) + ": burst rendered (" + std::to_string(burst.size()) +
                  " frames)");
    });

    GroundTruthSet gs_gt(gs_entries.begin(), gs_entries.end());
    write_ground_truth(gs_gt, config.format, out, "labels_gs", "coco_gs.json");

    json manifest{
        {"schema_version", kSchemaVersion},
        {"seed", config.seed},
        {"captures", config.captures},
        {"readout", readout_to_json(config.model)},
        {"gs_stats", stats_to_json(dataset_stats(gs_gt))},
    };
    if (config.generator) {
        manifest["generator"] = generator_to_json(*config.generator);
    } else {
        manifest["scene"] = scene_to_json(*config.scene);
    }
    write_json_file(manifest, out / "synth_manifest.json");
}

RollConfig parse_roll_config(const json& j, const CliOverrides& overrides) {
    return guard_config([&] {
    check_schema_version(j);
    jsonutil::check_keys(
        j, {"schema_version", "input", "readout", "format", "merge_fragments", "workers"},
        "roll config");
    RollConfig config;
    config.input = jsonutil::require(j, "input", "roll config").get<std::string>();
    if (!fs::exists(config.input)) {
        throw ConfigError("roll config: input path " + config.input.string() + " does not exist");
    }
    config.model = readout_from_json(jsonutil::require(j, "readout", "roll config"));
    config.format = parse_format(j, overrides);
    config.merge_fragments = jsonutil::get_or(j, "merge_fragments", false);
    config.workers = parse_workers(j, overrides);
        return config;
    });
}

void run_roll(const RollConfig& config, const fs::path& out) {
    const std::vector<fs::path> captures = list_captures(config.input);
    for (const fs::path& dir : captures) {
        validate_capture_dir(dir, config.model);
    }

    fs::create_directories(out / "gs");
    fs::create_directories(out / "rs");

    const RsTransformOptions options{config.merge_fragments};
    std::vector<std::pair<std::string, ImageGroundTruth>> gs_entries(captures.size());
    std::vector<std::pair<std::string, ImageGroundTruth>> rs_entries(captures.size());

    run_parallel(captures.size(), config.workers, [&](std::size_t c) {
        const fs::path& dir = captures[c];
        const std::string id = dir.filename().string();
        const FrameSequence burst = load_sequence(dir);
        const CapturePair pair = capture_pair(burst, config.model);
        save_png(pair.gs, out / "gs" / (id + ".png"));
        save_png(pair.rs, out / "rs" / (id + ".png"));

        const StoredTracks stored = tracks_from_json_file(dir / "tracks.json");
        gs_entries[c] = {id, ImageGroundTruth{stored.size,
                                              transform_tracks_to_gs(stored.tracks, stored.size)}};
        rs_entries[c] = {id, ImageGroundTruth{stored.size,
                                              transform_tracks_to_rs(stored.tracks, config.model,
                                                                     stored.size, options)}};
        log::info(id + ": GS/RS pair composed");
    });

    GroundTruthSet gs_gt(gs_entries.begin(), gs_entries.end());
    GroundTruthSet rs_gt(rs_entries.begin(), rs_entries.end());
    write_ground_truth(gs_gt, config.format, out, "labels_gs", "coco_gs.json");
    write_ground_truth(rs_gt, config.format, out, "labels_rs", "coco_rs.json");

    write_json_file(json{{"schema_version", kSchemaVersion},
                         {"captures", captures.size()},
                         {"readout", readout_to_json(config.model)},
                         {"merge_fragments", config.merge_fragments},
                         {"gs_stats", stats_to_json(dataset_stats(gs_gt))},
                         {"rs_stats", stats_to_json(dataset_stats(rs_gt))}},
                    out / "roll_manifest.json");
}

AnnotateConfig parse_annotate_config(const json& j, const CliOverrides& overrides) {
    return guard_config([&] {
    check_schema_version(j);
    jsonutil::check_keys(j, {"schema_version", "input", "readout", "format", "merge_fragments"},
                         "annotate config");
    AnnotateConfig config;
    config.input = jsonutil::require(j, "input", "annotate config").get<std::string>();
    if (!fs::exists(config.input)) {
        throw ConfigError("annotate config: input path " + config.input.string() +
                          " does not exist");
    }
    config.model = readout_from_json(jsonutil::require(j, "readout", "annotate config"));
    config.format = parse_format(j, overrides);
    config.merge_fragments = jsonutil::get_or(j, "merge_fragments", false);
        return config;
    });
}

void run_annotate(const AnnotateConfig& config, const fs::path& out) {
    const std::vector<fs::path> captures = list_captures(config.input);
    for (const fs::path& dir : captures) {
        if (!fs::exists(dir / "tracks.json")) {
            throw DataError(dir.string() + ": missing tracks.json");
        }
    }
    fs::create_directories(out);

    const RsTransformOptions options{config.merge_fragments};
    GroundTruthSet gs_gt;
    GroundTruthSet rs_gt;
    for (const fs::path& dir : captures) {
        const std::string id = dir.filename().string();
        const StoredTracks stored = tracks_from_json_file(dir / "tracks.json");
        gs_gt.emplace(id, ImageGroundTruth{stored.size,
                                           transform_tracks_to_gs(stored.tracks, stored.size)});
        rs_gt.emplace(id, ImageGroundTruth{stored.size,
                                           transform_tracks_to_rs(stored.tracks, config.model,
                                                                  stored.size, options)});
    }
    write_ground_truth(gs_gt, config.format, out, "labels_gs", "coco_gs.json");
    write_ground_truth(rs_gt, config.format, out, "labels_rs", "coco_rs.json");
}

EvalConfig parse_eval_config(const json& j, const CliOverrides&) {
    return guard_config([&] {
    check_schema_version(j);
    jsonutil::check_keys(
        j, {"schema_version", "detections", "ground_truth", "image_size", "metrics"},
        "eval config");
    EvalConfig config;
    config.detections = jsonutil::require(j, "detections", "eval config").get<std::string>();
    config.ground_truth = jsonutil::require(j, "ground_truth", "eval config").get<std::string>();
    if (!fs::exists(config.detections)) {
        throw ConfigError("eval config: detections path " + config.detections.string() +
                          " does not exist");
    }
    if (!fs::exists(config.ground_truth)) {
        throw ConfigError("eval config: ground_truth path " + config.ground_truth.string() +
                          " does not exist");
    }
    if (j.contains("image_size")) {
        const json& size = j["image_size"];
        if (!size.is_array() || size.size() != 2) {
            throw ConfigError("eval config: image_size must be [width, height]");
        }
        config.image_size = ImageSize{size[0].get<int>(), size[1].get<int>()};
    }
    if (fs::is_directory(config.ground_truth) && !config.image_size) {
        throw ConfigError("eval config: YOLO ground truth needs \"image_size\"");
    }
    if (j.contains("metrics")) {
        config.metrics = metrics_from_json(j["metrics"]);
    }
        return config;
    });
}

EvalReport run_eval(const EvalConfig& config, const fs::path& out) {
    GroundTruthSet gts;
    if (fs::is_directory(config.ground_truth)) {
        // YOLO labels carry no dimensions; the config supplies one uniform size.
        std::map<std::string, ImageSize> sizes;
        for (const auto& entry : fs::directory_iterator(config.ground_truth)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                sizes.emplace(entry.path().stem().string(), *config.image_size);
            }
        }
        gts = read_yolo_gt(config.ground_truth, sizes);
    } else {
        gts = read_coco_gt(config.ground_truth);
    }

    const DetectionSet dets = read_detections(config.detections, gts);
    const EvalReport report = evaluate(dets, gts, config.metrics);

    fs::create_directories(out);
    write_json_file(report_to_json(report), out / "report.json");
    write_text_file(report_to_text(report), out / "report.txt");
    return report;
}

ReportDelta run_compare(const fs::path& report_a, const fs::path& report_b, const fs::path& out) {
    const auto load = [](const fs::path& path) {
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot open " + path.string());
        }
        try {
            json j;
            in >> j;
            return report_from_json(j);
        } catch (const json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
    };
    const EvalReport a = load(report_a);
    const EvalReport b = load(report_b);
    const ReportDelta delta = compare_reports(a, b);

    fs::create_directories(out);
    write_json_file(delta_to_json(delta), out / "compare.json");
    write_text_file(delta_to_text(delta), out / "compare.txt");
    return delta;
}

SweepConfig parse_sweep_config(const json& j, const CliOverrides& overrides) {
    return guard_config([&] {
    check_schema_version(j);
    jsonutil::check_keys(j,
                         {"schema_version", "seed", "captures", "readout", "generator",
                          "speed_multipliers", "metrics", "format", "merge_fragments", "workers"},
                         "sweep config");
    SweepConfig config;
    config.model = readout_from_json(jsonutil::require(j, "readout", "sweep config"));
    config.generator = generator_from_json(jsonutil::require(j, "generator", "sweep config"));
    config.seed = parse_seed(j, overrides, /*required=*/true);
    config.captures = jsonutil::get_or(j, "captures", 4);
    if (config.captures < 1) {
        throw ConfigError("sweep config: captures must be >= 1");
    }
    if (j.contains("speed_multipliers")) {
        config.speed_multipliers = j["speed_multipliers"].get<std::vector<double>>();
    }
    if (config.speed_multipliers.empty()) {
        throw ConfigError("sweep config: speed_multipliers must not be empty");
    }
    std::set<std::string> names;
    for (const double m : config.speed_multipliers) {
        if (m < 0.0) {
            throw ConfigError("sweep config: speed multipliers must be non-negative");
        }
        if (!names.insert(multiplier_dir_name(m)).second) {
            throw ConfigError("sweep config: duplicate speed multiplier " +
                              multiplier_dir_name(m));
        }
    }
    if (j.contains("metrics")) {
        config.metrics = metrics_from_json(j["metrics"]);
    }
    config.format = parse_format(j, overrides);
    config.merge_fragments = jsonutil::get_or(j, "merge_fragments", false);
    config.workers = parse_workers(j, overrides);
        return config;
    });
}

std::string multiplier_dir_name(double multiplier) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "mult_%g", multiplier);
    return buf;
}

std::vector<SweepEntry> run_sweep(const SweepConfig& config, const fs::path& out) {
    fs::create_directories(out);

    std::vector<SweepEntry> entries;
    entries.reserve(config.speed_multipliers.size());

    for (const double multiplier : config.speed_multipliers) {
        const fs::path dir = out / multiplier_dir_name(multiplier);
        fs::create_directories(dir / "gs");
        fs::create_directories(dir / "rs");

        GeneratorConfig generator = config.generator;
        generator.speed_multiplier = config.generator.speed_multiplier * multiplier;

        const std::size_t n = static_cast<std::size_t>(config.captures);
        const RsTransformOptions options{config.merge_fragments};
        std::vector<std::pair<std::string, ImageGroundTruth>> gs_entries(n);
        std::vector<std::pair<std::string, ImageGroundTruth>> rs_entries(n);

        run_parallel(n, config.workers, [&](std::size_t c) {
            // Seed by capture only: every multiplier sees the same crowd.
            const Scene scene = random_scene(generator, mix_seed(config.seed, c));
            const FrameSequence burst = render_burst(scene, config.model);
            const CapturePair pair = capture_pair(burst, config.model);
            const std::string id = capture_name(c);
            save_png(pair.gs, dir / "gs" / (id + ".png"));
            save_png(pair.rs, dir / "rs" / (id + ".png"));

            const std::vector<Track> tracks = gt_tracks(scene, config.model);
            const ImageSize size{scene.width, scene.height};
            gs_entries[c] = {id, ImageGroundTruth{size, transform_tracks_to_gs(tracks, size)}};
            rs_entries[c] = {id, ImageGroundTruth{size, transform_tracks_to_rs(
                                                            tracks, config.model, size, options)}};
        });

        GroundTruthSet gs_gt(gs_entries.begin(), gs_entries.end());
        GroundTruthSet rs_gt(rs_entries.begin(), rs_entries.end());
        write_ground_truth(gs_gt, config.format, dir, "labels_gs", "coco_gs.json");
        write_ground_truth(rs_gt, config.format, dir, "labels_rs", "coco_rs.json");

        // The model-free detector: GS ground truth replayed at confidence 1.
        DetectionSet detections;
        for (const auto& [id, gt] : gs_gt) {
            std::vector<Detection> dets;
            dets.reserve(gt.boxes.size());
            for (const BBox& box : gt.boxes) {
                dets.push_back(Detection{box, 1.0});
            }
            detections.emplace(id, std::move(dets));
        }
        write_coco_detections(detections, coco_image_ids(rs_gt), dir / "detections.json");

        const EvalReport report = evaluate(detections, rs_gt, config.metrics);
        write_json_file(report_to_json(report), dir / "report.json");
        write_text_file(report_to_text(report), dir / "report.txt");

        const auto fmt_opt = [](const std::optional<double>& v) {
            return v ? std::to_string(*v) : std::string("-");
        };
        log::info("sweep " + multiplier_dir_name(multiplier) + ": map50=" +
                  fmt_opt(report.map50) + " map5095=" + fmt_opt(report.map5095));
        entries.push_back(SweepEntry{multiplier, report});
    }

    json summary = json::array();
    std::ostringstream table;
    table << "multiplier  P         R         mAP@0.5   mAP@0.5:0.95\n";
    for (const SweepEntry& entry : entries) {
        summary.push_back({{"multiplier", entry.multiplier},
                           {"report", report_to_json(entry.report)}});
        char line[160];
        const auto cell = [](const std::optional<double>& v) {
            char buf[16];
            if (v) {
                std::snprintf(buf, sizeof(buf), "%.4f", *v);
            } else {
                std::snprintf(buf, sizeof(buf), "-");
            }
            return std::string(buf);
        };
        std::snprintf(line, sizeof(line), "%-11g %-9s %-9s %-9s %s\n", entry.multiplier,
                      cell(entry.report.precision).c_str(), cell(entry.report.recall).c_str(),
                      cell(entry.report.map50).c_str(), cell(entry.report.map5095).c_str());
        table << line;
    }
    write_json_file(json{{"schema_version", kSchemaVersion},
                         {"seed", config.seed},
                         {"captures", config.captures},
                         {"readout", readout_to_json(config.model)},
                         {"generator", generator_to_json(config.generator)},
                         {"entries", std::move(summary)}},
                    out / "sweep_summary.json");
    write_text_file(table.str(), out / "sweep_summary.txt");
    return entries;
}

}  // namespace rollscan
