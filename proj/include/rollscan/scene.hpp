#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rollscan/annotations.hpp"
#include "rollscan/image.hpp"
#include "rollscan/shutter.hpp"

namespace rollscan {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Waypoint {
    double t = 0.0;
    Vec2 pos;
};

/// Piecewise-linear path; queries clamp outside the waypoint range.
class Trajectory {
public:
    explicit Trajectory(std::vector<Waypoint> waypoints);

    Vec2 position_at(double t) const;
    const std::vector<Waypoint>& waypoints() const { return waypoints_; }

private:
    std::vector<Waypoint> waypoints_;
};

enum class ShapeKind { Rectangle, Ellipse };

struct Actor {
    int id = 0;
    ShapeKind shape = ShapeKind::Rectangle;
    double width = 1.0;   // px, >= 1
    double height = 1.0;  // px, >= 1
    Rgb color;
    Trajectory trajectory{{Waypoint{}}};
};

/// 2D stand-in for a rendered street scene: actors over a flat background,
/// drawn in list order (later actors occlude earlier ones). Rendering is
/// deterministic: identical (scene, t) gives identical pixels.
struct Scene {
    int width = 0;
    int height = 0;
    Rgb background;
    std::vector<Actor> actors;
    double px_per_meter = 50.0;
    std::uint64_t rng_seed = 0;
};

void validate_scene(const Scene& scene);

/// Hard-edged rasterization at time t. Shapes are sampled at integer
/// lattice points (pixel (x,y) is lit iff the shape covers the point
/// (x,y)), so a rectangle covers exactly the rows its box crosses.
/// Off-canvas geometry clips silently.
ImageBuffer render_frame(const Scene& scene, double t);

/// The capture burst: F frames at t_k = k / (gs_frame_rate * F).
FrameSequence render_burst(const Scene& scene, const ReadoutModel& model);

/// Tight axis-aligned box of the actor's shape at time t, before clipping.
BBox gt_box(const Actor& actor, double t);

/// Per-frame ground truth over the whole burst, one track per actor.
std::vector<Track> gt_tracks(const Scene& scene, const ReadoutModel& model);

struct GeneratorConfig {
    std::pair<int, int> actor_count_range{1, 6};
    std::pair<double, double> width_range_px{8.0, 40.0};
    std::pair<double, double> height_range_px{16.0, 96.0};
    std::pair<double, double> speed_range_mps{0.0, 2.0};
    double speed_multiplier = 1.0;
    double px_per_meter = 50.0;
    int canvas_width = 1920;
    int canvas_height = 1080;
    Rgb background{96, 96, 96};
};

void validate_generator(const GeneratorConfig& config);

/// Deterministic randomized scene: actors placed fully on canvas at t=0,
/// moving in a straight line at a speed drawn from speed_range_mps scaled
/// by speed_multiplier and px_per_meter.
Scene random_scene(const GeneratorConfig& config, std::uint64_t seed);

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
GeneratorConfig generator_from_json(const nlohmann::json& j);
nlohmann::json generator_to_json(const GeneratorConfig& config);

}  // namespace rollscan
