#include "rollscan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"
#include "rollscan/json_util.hpp"
#include "rollscan/kernels.hpp"
#include "rollscan/rng.hpp"

using json = nlohmann::json;

namespace rollscan {

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
    if (waypoints_.empty()) {
        throw std::invalid_argument("trajectory needs at least one waypoint");
    }
    for (std::size_t i = 1; i < waypoints_.size(); ++i) {
        if (!(waypoints_[i].t > waypoints_[i - 1].t)) {
            throw std::invalid_argument("waypoint times must be strictly increasing");
        }
    }
}

Vec2 Trajectory::position_at(double t) const {
    if (t <= waypoints_.front().t) return waypoints_.front().pos;
    if (t >= waypoints_.back().t) return waypoints_.back().pos;
    // First waypoint strictly past t; the segment before it brackets t.
    std::size_t hi = 1;
    while (waypoints_[hi].t < t) ++hi;
    const Waypoint& a = waypoints_[hi - 1];
    const Waypoint& b = waypoints_[hi];
    const double u = (t - a.t) / (b.t - a.t);
    return Vec2{a.pos.x + u * (b.pos.x - a.pos.x), a.pos.y + u * (b.pos.y - a.pos.y)};
}

void validate_scene(const Scene& scene) {
    if (scene.width < 1 || scene.height < 1) {
        throw ConfigError("scene canvas must be at least 1x1");
    }
    if (!(scene.px_per_meter > 0.0)) {
        throw ConfigError("px_per_meter must be positive");
    }
    std::set<int> ids;
    for (const Actor& actor : scene.actors) {
        if (actor.width < 1.0 || actor.height < 1.0) {
            throw ConfigError("actor " + std::to_string(actor.id) +
                              ": size components must be >= 1 px");
        }
        if (!ids.insert(actor.id).second) {
            throw ConfigError("duplicate actor id " + std::to_string(actor.id));
        }
    }
}

namespace {

inline int ceil_px(double v) { return static_cast<int>(std::ceil(v)); }
inline int floor_px(double v) { return static_cast<int>(std::floor(v)); }

void fill_span(ImageBuffer& img, int y, int x_begin, int x_end, Rgb color) {
    x_begin = std::max(x_begin, 0);
    x_end = std::min(x_end, img.width());
    if (x_begin >= x_end || y < 0 || y >= img.height()) return;
    auto row = img.row(y);
    kernels::fill_rgb(reinterpret_cast<std::uint8_t*>(row.data() + x_begin),
                      static_cast<std::size_t>(x_end - x_begin), color.r, color.g, color.b);
}

void draw_rectangle(ImageBuffer& img, const Actor& actor, Vec2 center) {
    // Lattice sampling of the half-open box [x_min,x_max) x [y_min,y_max).
    const int x_begin = ceil_px(center.x - actor.width / 2.0);
    const int x_end = ceil_px(center.x + actor.width / 2.0);
    const int y_begin = std::max(ceil_px(center.y - actor.height / 2.0), 0);
    const int y_end = std::min(ceil_px(center.y + actor.height / 2.0), img.height());
    for (int y = y_begin; y < y_end; ++y) {
        fill_span(img, y, x_begin, x_end, actor.color);
    }
}

void draw_ellipse(ImageBuffer& img, const Actor& actor, Vec2 center) {
    const double a = actor.width / 2.0;
    const double b = actor.height / 2.0;
    const int y_begin = std::max(ceil_px(center.y - b), 0);
    const int y_last = std::min(floor_px(center.y + b), img.height() - 1);
    for (int y = y_begin; y <= y_last; ++y) {
        const double dy = (static_cast<double>(y) - center.y) / b;
        const double t = 1.0 - dy * dy;
        if (t < 0.0) continue;
        const double half = a * std::sqrt(t);
        fill_span(img, y, ceil_px(center.x - half), floor_px(center.x + half) + 1, actor.color);
    }
}

std::vector<double> burst_times(const ReadoutModel& model) {
    const double rate = source_frame_rate(model);
    std::vector<double> times(static_cast<std::size_t>(model.frames_per_capture));
    for (std::size_t k = 0; k < times.size(); ++k) {
        times[k] = static_cast<double>(k) / rate;
    }
    return times;
}

}  // namespace

ImageBuffer render_frame(const Scene& scene, double t) {
    validate_scene(scene);
    ImageBuffer img(scene.width, scene.height, scene.background);
    for (const Actor& actor : scene.actors) {
        const Vec2 center = actor.trajectory.position_at(t);
        if (actor.shape == ShapeKind::Rectangle) {
            draw_rectangle(img, actor, center);
        } else {
            draw_ellipse(img, actor, center);
        }
    }
    return img;
}

FrameSequence render_burst(const Scene& scene, const ReadoutModel& model) {
    validate_model(model);
    std::vector<ImageBuffer> frames;
    frames.reserve(static_cast<std::size_t>(model.frames_per_capture));
    for (const double t : burst_times(model)) {
        frames.push_back(render_frame(scene, t));
    }
    return FrameSequence(std::move(frames), source_frame_rate(model));
}

BBox gt_box(const Actor& actor, double t) {
    const Vec2 center = actor.trajectory.position_at(t);
    return BBox{center.x - actor.width / 2.0, center.y - actor.height / 2.0,
                center.x + actor.width / 2.0, center.y + actor.height / 2.0, 0};
}

std::vector<Track> gt_tracks(const Scene& scene, const ReadoutModel& model) {
    validate_model(model);
    validate_scene(scene);
    const auto times = burst_times(model);
    std::vector<Track> tracks;
    tracks.reserve(scene.actors.size());
    for (const Actor& actor : scene.actors) {
        Track track;
        track.actor_id = actor.id;
        track.boxes.reserve(times.size());
        for (const double t : times) {
            track.boxes.push_back(gt_box(actor, t));
        }
        tracks.push_back(std::move(track));
    }
    return tracks;
}

void validate_generator(const GeneratorConfig& config) {
    if (config.actor_count_range.first < 0 ||
        config.actor_count_range.second < config.actor_count_range.first) {
        throw ConfigError("actor_count_range must be a non-negative ordered pair");
    }
    if (config.width_range_px.first < 1.0 || config.height_range_px.first < 1.0 ||
        config.width_range_px.second < config.width_range_px.first ||
        config.height_range_px.second < config.height_range_px.first) {
        throw ConfigError("size_range_px bounds must be ordered and >= 1 px");
    }
    if (config.speed_range_mps.first < 0.0 ||
        config.speed_range_mps.second < config.speed_range_mps.first) {
        throw ConfigError("speed_range_mps must be a non-negative ordered pair");
    }
    if (config.speed_multiplier < 0.0) {
        throw ConfigError("speed_multiplier must be non-negative");
    }
    if (!(config.px_per_meter > 0.0)) {
        throw ConfigError("px_per_meter must be positive");
    }
    if (config.canvas_width < 1 || config.canvas_height < 1) {
        throw ConfigError("canvas must be at least 1x1");
    }
}

Scene random_scene(const GeneratorConfig& config, std::uint64_t seed) {
    validate_generator(config);
    Rng rng(splitmix64(seed));

    Scene scene;
    scene.width = config.canvas_width;
    scene.height = config.canvas_height;
    scene.background = config.background;
    scene.px_per_meter = config.px_per_meter;
    scene.rng_seed = seed;

    const int count = rng.uniform_int(config.actor_count_range.first,
                                      config.actor_count_range.second);
    scene.actors.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Actor actor;
        actor.id = i;
        actor.width = rng.uniform(config.width_range_px.first, config.width_range_px.second);
        actor.height = rng.uniform(config.height_range_px.first, config.height_range_px.second);
        actor.shape = rng.coin() ? ShapeKind::Rectangle : ShapeKind::Ellipse;
        actor.color = Rgb{static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                          static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                          static_cast<std::uint8_t>(rng.uniform_int(0, 255))};

        // Fully on canvas at t=0.
        const double half_w = actor.width / 2.0;
        const double half_h = actor.height / 2.0;
        const double cx = half_w >= scene.width / 2.0
                              ? scene.width / 2.0
                              : rng.uniform(half_w, scene.width - half_w);
        const double cy = half_h >= scene.height / 2.0
                              ? scene.height / 2.0
                              : rng.uniform(half_h, scene.height - half_h);

        // The multiplier scales a draw from the base range, so the same seed
        // yields the same crowd at every speed setting.
        const double speed_mps =
            rng.uniform(config.speed_range_mps.first, config.speed_range_mps.second) *
            config.speed_multiplier;
        const double speed_px = speed_mps * config.px_per_meter;
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);

        actor.trajectory = Trajectory{{
            Waypoint{0.0, Vec2{cx, cy}},
            Waypoint{1.0, Vec2{cx + std::cos(angle) * speed_px, cy + std::sin(angle) * speed_px}},
        }};
        scene.actors.push_back(std::move(actor));
    }
    return scene;
}

namespace {

json rgb_to_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

Rgb rgb_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(context + ": color must be an [r,g,b] array");
    }
    const int r = j[0].get<int>();
    const int g = j[1].get<int>();
    const int b = j[2].get<int>();
    if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) {
        throw ConfigError(context + ": color channels must be in [0,255]");
    }
    return Rgb{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
               static_cast<std::uint8_t>(b)};
}

std::pair<double, double> range_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError(context + ": expected a [lo, hi] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json scene_to_json(const Scene& scene) {
    json actors = json::array();
    for (const Actor& actor : scene.actors) {
        json waypoints = json::array();
        for (const Waypoint& wp : actor.trajectory.waypoints()) {
            waypoints.push_back({{"t", wp.t}, {"pos", {wp.pos.x, wp.pos.y}}});
        }
        actors.push_back({
            {"id", actor.id},
            {"shape", actor.shape == ShapeKind::Rectangle ? "rectangle" : "ellipse"},
            {"size", {actor.width, actor.height}},
            {"color", rgb_to_json(actor.color)},
            {"waypoints", std::move(waypoints)},
        });
    }
    return json{
        {"width", scene.width},
        {"height", scene.height},
        {"background", rgb_to_json(scene.background)},
        {"px_per_meter", scene.px_per_meter},
        {"rng_seed", scene.rng_seed},
        {"actors", std::move(actors)},
    };
}

namespace {
Scene scene_from_json_impl(const json& j);
GeneratorConfig generator_from_json_impl(const json& j);
}  // namespace

Scene scene_from_json(const json& j) {
    try {
        return scene_from_json_impl(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene: ") + e.what());
    }
}

GeneratorConfig generator_from_json(const json& j) {
    try {
        return generator_from_json_impl(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("generator: ") + e.what());
    }
}

namespace {

Scene scene_from_json_impl(const json& j) {
    jsonutil::check_keys(j, {"width", "height", "background", "px_per_meter", "rng_seed", "actors"},
                         "scene");
    Scene scene;
    scene.width = jsonutil::require(j, "width", "scene").get<int>();
    scene.height = jsonutil::require(j, "height", "scene").get<int>();
    scene.background = rgb_from_json(jsonutil::require(j, "background", "scene"), "scene.background");
    scene.px_per_meter = jsonutil::get_or(j, "px_per_meter", 50.0);
    scene.rng_seed = jsonutil::get_or(j, "rng_seed", std::uint64_t{0});

    for (const json& ja : jsonutil::require(j, "actors", "scene")) {
        const std::string context = "scene.actors[" + std::to_string(scene.actors.size()) + "]";
        jsonutil::check_keys(ja, {"id", "shape", "size", "color", "waypoints"}, context);
        Actor actor;
        actor.id = jsonutil::require(ja, "id", context).get<int>();
        const std::string shape = jsonutil::require(ja, "shape", context).get<std::string>();
        if (shape == "rectangle") {
            actor.shape = ShapeKind::Rectangle;
        } else if (shape == "ellipse") {
            actor.shape = ShapeKind::Ellipse;
        } else {
            throw ConfigError(context + ": unknown shape \"" + shape + "\"");
        }
        const auto size = range_from_json(jsonutil::require(ja, "size", context), context + ".size");
        actor.width = size.first;
        actor.height = size.second;
        actor.color = rgb_from_json(jsonutil::require(ja, "color", context), context + ".color");

        std::vector<Waypoint> waypoints;
        for (const json& jw : jsonutil::require(ja, "waypoints", context)) {
            jsonutil::check_keys(jw, {"t", "pos"}, context + ".waypoints");
            const json& pos = jsonutil::require(jw, "pos", context + ".waypoints");
            waypoints.push_back(Waypoint{jsonutil::require(jw, "t", context + ".waypoints").get<double>(),
                                         Vec2{pos[0].get<double>(), pos[1].get<double>()}});
        }
        try {
            actor.trajectory = Trajectory{std::move(waypoints)};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(context + ": " + e.what());
        }
        scene.actors.push_back(std::move(actor));
    }
    validate_scene(scene);
    return scene;
}

GeneratorConfig generator_from_json_impl(const json& j) {
    jsonutil::check_keys(j,
                         {"actor_count_range", "size_range_px", "speed_range_mps",
                          "speed_multiplier", "px_per_meter", "canvas", "seed"},
                         "generator");
    GeneratorConfig config;
    if (j.contains("actor_count_range")) {
        const auto range = range_from_json(j["actor_count_range"], "generator.actor_count_range");
        config.actor_count_range = {static_cast<int>(range.first), static_cast<int>(range.second)};
    }
    if (j.contains("size_range_px")) {
        const json& sizes = j["size_range_px"];
        jsonutil::check_keys(sizes, {"width", "height"}, "generator.size_range_px");
        config.width_range_px =
            range_from_json(jsonutil::require(sizes, "width", "generator.size_range_px"),
                            "generator.size_range_px.width");
        config.height_range_px =
            range_from_json(jsonutil::require(sizes, "height", "generator.size_range_px"),
                            "generator.size_range_px.height");
    }
    if (j.contains("speed_range_mps")) {
        config.speed_range_mps = range_from_json(j["speed_range_mps"], "generator.speed_range_mps");
    }
    config.speed_multiplier = jsonutil::get_or(j, "speed_multiplier", config.speed_multiplier);
    config.px_per_meter = jsonutil::get_or(j, "px_per_meter", config.px_per_meter);
    if (j.contains("canvas")) {
        const json& canvas = j["canvas"];
        jsonutil::check_keys(canvas, {"width", "height", "background"}, "generator.canvas");
        config.canvas_width = jsonutil::require(canvas, "width", "generator.canvas").get<int>();
        config.canvas_height = jsonutil::require(canvas, "height", "generator.canvas").get<int>();
        if (canvas.contains("background")) {
            config.background = rgb_from_json(canvas["background"], "generator.canvas.background");
        }
    }
    validate_generator(config);
    return config;
}

}  // namespace

json generator_to_json(const GeneratorConfig& config) {
    return json{
        {"actor_count_range", {config.actor_count_range.first, config.actor_count_range.second}},
        {"size_range_px",
         {{"width", {config.width_range_px.first, config.width_range_px.second}},
          {"height", {config.height_range_px.first, config.height_range_px.second}}}},
        {"speed_range_mps", {config.speed_range_mps.first, config.speed_range_mps.second}},
        {"speed_multiplier", config.speed_multiplier},
        {"px_per_meter", config.px_per_meter},
        {"canvas",
         {{"width", config.canvas_width},
          {"height", config.canvas_height},
          {"background", rgb_to_json(config.background)}}},
    };
}

}  // namespace rollscan
