#pragma once

// Seeded single-actor scenes for transform-vs-oracle equivalence runs.
// Actors are rectangles kept fully on canvas for the whole burst so the
// rendered mask and the box-based transform see the same geometry.

#include <vector>

#include "rollscan/rng.hpp"
#include "rollscan/scene.hpp"
#include "rollscan/shutter.hpp"

namespace testsupport {

struct OracleCase {
    rollscan::Scene scene;
    rollscan::ReadoutModel model;
};

/// Random single-rectangle scene with H=F=`hf`. Motion kinds: static,
/// horizontal, vertical, diagonal, a two-segment zig-zag, or a hold/fast
/// drop/hold pattern that outruns the readout and fragments the actor.
inline OracleCase random_single_rect_case(rollscan::Rng& rng, int hf) {
    using namespace rollscan;

    const int height = hf;
    const int width = hf + hf / 2;
    const double burst_seconds = 1.0 / 30.0;

    OracleCase out;
    out.model = ReadoutModel{height, hf, ScanDirection::TopToBottom, 30.0};
    out.scene.width = width;
    out.scene.height = height;
    out.scene.background = Rgb{0, 0, 0};

    Actor actor;
    actor.id = 0;
    actor.shape = ShapeKind::Rectangle;
    actor.width = rng.uniform(2.0, width / 3.0);
    actor.height = rng.uniform(2.0, height / 2.0);
    actor.color = Rgb{255, 255, 255};

    const double x_lo = actor.width / 2.0 + 1.0;
    const double x_hi = width - actor.width / 2.0 - 1.0;
    const double y_lo = actor.height / 2.0 + 1.0;
    const double y_hi = height - actor.height / 2.0 - 1.0;
    const auto sample_point = [&] { return Vec2{rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi)}; };

    const Vec2 start = sample_point();
    Vec2 end = sample_point();
    std::vector<Waypoint> waypoints;
    switch (rng.uniform_int(0, 5)) {
        case 0:  // static
            waypoints = {Waypoint{0.0, start}};
            break;
        case 1:  // horizontal
            end.y = start.y;
            waypoints = {Waypoint{0.0, start}, Waypoint{burst_seconds, end}};
            break;
        case 2:  // vertical
            end.x = start.x;
            waypoints = {Waypoint{0.0, start}, Waypoint{burst_seconds, end}};
            break;
        case 3:  // diagonal
            waypoints = {Waypoint{0.0, start}, Waypoint{burst_seconds, end}};
            break;
        case 4: {  // zig-zag: out and back through a midpoint
            const Vec2 mid = sample_point();
            waypoints = {Waypoint{0.0, start}, Waypoint{burst_seconds / 2.0, mid},
                         Waypoint{burst_seconds, end}};
            break;
        }
        default: {  // hold near the scan start, outrun it downward, hold again
            const Vec2 top{start.x, rng.uniform(y_lo, y_lo + (y_hi - y_lo) * 0.15)};
            const Vec2 bottom{end.x, rng.uniform(y_lo + (y_hi - y_lo) * 0.6, y_hi)};
            waypoints = {Waypoint{0.0, top},
                         Waypoint{burst_seconds * 0.30, top},
                         Waypoint{burst_seconds * 0.45, bottom},
                         Waypoint{burst_seconds, bottom}};
            break;
        }
    }
    actor.trajectory = Trajectory{std::move(waypoints)};
    out.scene.actors.push_back(std::move(actor));
    return out;
}

}  // namespace testsupport
