// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rollscan/annotations.hpp"
#include "rollscan/formats.hpp"
#include "rollscan/image.hpp"
#include "rollscan/metrics.hpp"
#include "rollscan/pipeline.hpp"
#include "rollscan/rng.hpp"
#include "rollscan/scene.hpp"
#include "rollscan/shutter.hpp"
#include "support/ap_oracle.hpp"
#include "support/fs_compare.hpp"
#include "support/mask_oracle.hpp"
#include "support/scene_gen.hpp"

using namespace rollscan;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream log;

    void expect(bool condition, const std::string& message) {
        if (!condition) {
            ok = false;
            log << "\n    FAILED: " << message;
        }
    }
    void note(const std::string& message) { log << "\n    " << message; }
};

GeneratorConfig dynamic_generator(int canvas_w, int canvas_h) {
    GeneratorConfig config;
    config.actor_count_range = {2, 5};
    config.width_range_px = {6.0, 18.0};
    config.height_range_px = {8.0, 24.0};
    config.speed_range_mps = {0.0, 2.0};
    config.px_per_meter = 10.0;
    config.canvas_width = canvas_w;
    config.canvas_height = canvas_h;
    config.background = Rgb{24, 24, 24};
    return config;
}

// 1. Static-scene identity: 25 seeded static scenes, H=F=64.
bool criterion_static_identity(Check& check) {
    GeneratorConfig config = dynamic_generator(96, 64);
    config.speed_range_mps = {0.0, 0.0};
    const ReadoutModel model{64, 64, ScanDirection::TopToBottom, 30.0};
    for (int i = 0; i < 25; ++i) {
        const Scene scene = random_scene(config, mix_seed(1000, static_cast<std::uint64_t>(i)));
        const FrameSequence burst = render_burst(scene, model);
        check.expect(images_equal(compose_rs(burst, model), compose_gs(burst, model)),
                     "static scene " + std::to_string(i) + ": RS != GS");
    }
    return check.ok;
}

// 2. Row provenance on 50 seeded dynamic bursts, H=F in {16, 64, 128}.
bool criterion_row_provenance(Check& check) {
    const int sizes[] = {16, 64, 128};
    for (int i = 0; i < 50; ++i) {
        const int hf = sizes[i % 3];
        const ReadoutModel model{hf, hf, ScanDirection::TopToBottom, 30.0};
        GeneratorConfig config = dynamic_generator(hf + hf / 2, hf);
        config.speed_range_mps = {0.5, 2.0};
        const Scene scene = random_scene(config, mix_seed(2000, static_cast<std::uint64_t>(i)));
        const FrameSequence burst = render_burst(scene, model);
        const ImageBuffer rs = compose_rs(burst, model);
        for (int r = 0; r < hf; ++r) {
            const auto expect = burst.frame(static_cast<std::size_t>(row_to_frame(model, r))).row(r);
            const auto got = rs.row(r);
            if (!std::equal(expect.begin(), expect.end(), got.begin(), got.end())) {
                check.expect(false, "burst " + std::to_string(i) + " row " + std::to_string(r) +
                                        " does not match its source frame");
                break;
            }
        }
    }
    return check.ok;
}

// 3. Shear law: single RS box of width w + v*(h_box-1), against the formula
//    and the mask-composition oracle, 20 random configurations.
bool criterion_shear_law(Check& check) {
    Rng rng(3000);
    const int hf = 64;
    const int width = 384;
    const ReadoutModel model{hf, hf, ScanDirection::TopToBottom, 30.0};

    for (int i = 0; i < 20; ++i) {
        const double w = rng.uniform(2.0, 20.0);
        const int h_box = rng.uniform_int(2, 40);
        const double v = rng.uniform(0.0, 5.0);  // px per burst frame

        const int y0 = rng.uniform_int(1, hf - h_box - 1);
        const double travel = v * (hf - 1);
        const double x0 = rng.uniform(2.0, width - w - travel - 2.0);

        Actor actor;
        actor.id = 0;
        actor.shape = ShapeKind::Rectangle;
        actor.width = w;
        actor.height = h_box;
        actor.color = Rgb{255, 255, 255};
        const double speed_px = v * source_frame_rate(model);
        actor.trajectory =
            Trajectory{{Waypoint{0.0, Vec2{x0 + w / 2.0, y0 + h_box / 2.0}},
                        Waypoint{1.0, Vec2{x0 + w / 2.0 + speed_px, y0 + h_box / 2.0}}}};

        Scene scene;
        scene.width = width;
        scene.height = hf;
        scene.background = Rgb{0, 0, 0};
        scene.actors.push_back(actor);

        const auto tracks = gt_tracks(scene, model);
        const auto boxes =
            transform_track_to_rs(tracks[0], model, ImageSize{scene.width, scene.height});
        if (boxes.size() != 1) {
            check.expect(false, "config " + std::to_string(i) + ": expected 1 box, got " +
                                    std::to_string(boxes.size()));
            continue;
        }
        const double expected_width = w + v * (h_box - 1);
        check.expect(std::abs(boxes[0].width() - expected_width) <= 1.0 + 1e-9,
                     "config " + std::to_string(i) + ": width " + std::to_string(boxes[0].width()) +
                         " vs formula " + std::to_string(expected_width));

        const auto expected = oracle::rs_mask_oracle(scene, model);
        if (expected.size() != 1) {
            check.expect(false, "config " + std::to_string(i) + ": oracle box count " +
                                    std::to_string(expected.size()));
            continue;
        }
        const double tol = 1.0 + 1e-9;
        check.expect(std::abs(boxes[0].x_min - expected[0].x_min) <= tol &&
                         std::abs(boxes[0].y_min - expected[0].y_min) <= tol &&
                         std::abs(boxes[0].x_max - expected[0].x_max) <= tol &&
                         std::abs(boxes[0].y_max - expected[0].y_max) <= tol,
                     "config " + std::to_string(i) + ": box deviates from the oracle");
    }
    return check.ok;
}

// 4. Annotation-transform oracle equivalence on 120 seeded single-actor
//    scenes: exact fragment counts, every edge within 1 px.
bool criterion_transform_oracle(Check& check) {
    Rng rng(4000);
    int multi_fragment = 0;
    int empty_cases = 0;
    for (int i = 0; i < 120; ++i) {
        const int hf = (i % 3 == 0) ? 32 : (i % 3 == 1 ? 48 : 64);
        const auto c = testsupport::random_single_rect_case(rng, hf);
        const auto tracks = gt_tracks(c.scene, c.model);
        const auto fragments =
            transform_track_to_rs(tracks[0], c.model, ImageSize{c.scene.width, c.scene.height});
        const auto expected = oracle::rs_mask_oracle(c.scene, c.model);

        if (fragments.size() != expected.size()) {
            check.expect(false, "scene " + std::to_string(i) + ": fragment count " +
                                    std::to_string(fragments.size()) + " vs oracle " +
                                    std::to_string(expected.size()));
            continue;
        }
        const double tol = 1.0 + 1e-9;
        for (std::size_t f = 0; f < fragments.size(); ++f) {
            check.expect(std::abs(fragments[f].x_min - expected[f].x_min) <= tol &&
                             std::abs(fragments[f].y_min - expected[f].y_min) <= tol &&
                             std::abs(fragments[f].x_max - expected[f].x_max) <= tol &&
                             std::abs(fragments[f].y_max - expected[f].y_max) <= tol,
                         "scene " + std::to_string(i) + " fragment " + std::to_string(f) +
                             ": edge deviates from the oracle by more than 1 px");
        }
        if (expected.size() > 1) ++multi_fragment;
        if (expected.empty()) ++empty_cases;
    }
    check.note("multi-fragment scenes: " + std::to_string(multi_fragment) +
               ", readout-evading scenes: " + std::to_string(empty_cases));
    check.expect(multi_fragment > 0, "sample never exercised fragmentation");
    return check.ok;
}

// 5. Metrics oracle equivalence: 200 randomized small instances to 1e-9,
//    plus the exact hand-computed IoU value.
bool criterion_metrics_oracle(Check& check) {
    check.expect(iou(BBox{0, 0, 10, 10, 0}, BBox{5, 0, 15, 10, 0}) == 1.0 / 3.0,
                 "IoU((0,0,10,10),(5,0,15,10)) != 1/3");

    Rng rng(5000);
    const auto random_box = [&](double canvas) {
        const double x = rng.uniform(0.0, canvas - 12.0);
        const double y = rng.uniform(0.0, canvas - 12.0);
        return BBox{x, y, x + rng.uniform(2.0, 12.0), y + rng.uniform(2.0, 12.0), 0};
    };

    for (int trial = 0; trial < 200; ++trial) {
        DetectionSet dets;
        GroundTruthSet gts;
        const int images = rng.uniform_int(1, 5);
        for (int i = 0; i < images; ++i) {
            char name[16];
            std::snprintf(name, sizeof(name), "im_%02d", i);
            ImageGroundTruth gt;
            gt.size = ImageSize{100, 100};
            const int n_gt = rng.uniform_int(0, 5);
            for (int g = 0; g < n_gt; ++g) gt.boxes.push_back(random_box(100.0));

            std::vector<Detection> image_dets;
            const int n_det = rng.uniform_int(0, 8);
            for (int d = 0; d < n_det; ++d) {
                BBox box;
                if (!gt.boxes.empty() && rng.coin()) {
                    box = gt.boxes[static_cast<std::size_t>(
                        rng.uniform_int(0, static_cast<int>(gt.boxes.size()) - 1))];
                    const double jx = rng.uniform(-3.0, 3.0);
                    const double jy = rng.uniform(-3.0, 3.0);
                    box.x_min += jx;
                    box.x_max += jx + rng.uniform(-1.5, 1.5);
                    box.y_min += jy;
                    box.y_max += jy + rng.uniform(-1.5, 1.5);
                    if (box.x_max <= box.x_min) box.x_max = box.x_min + 1.0;
                    if (box.y_max <= box.y_min) box.y_max = box.y_min + 1.0;
                } else {
                    box = random_box(100.0);
                }
                image_dets.push_back(Detection{box, rng.uniform(0.0, 1.0)});
            }
            gts.emplace(name, std::move(gt));
            dets.emplace(name, std::move(image_dets));
        }

        const MetricConfig config;
        const EvalReport report = evaluate(dets, gts, config);
        const oracle::OracleReport expect = oracle::oracle_evaluate(dets, gts, config);

        const auto close = [&](const std::optional<double>& a, const std::optional<double>& b,
                               const char* metric) {
            if (a.has_value() != b.has_value()) {
                check.expect(false, std::string(metric) + " presence mismatch at trial " +
                                        std::to_string(trial));
            } else if (a && std::abs(*a - *b) > 1e-9) {
                check.expect(false, std::string(metric) + " deviates by " +
                                        std::to_string(std::abs(*a - *b)) + " at trial " +
                                        std::to_string(trial));
            }
        };
        close(report.precision, expect.precision, "precision");
        close(report.recall, expect.recall, "recall");
        close(report.map50, expect.map50, "map50");
        close(report.map5095, expect.map5095, "map5095");
        for (std::size_t t = 0; t < report.per_threshold_ap.size(); ++t) {
            close(report.per_threshold_ap[t], expect.per_threshold_ap[t], "per-threshold AP");
        }
    }
    return check.ok;
}

SweepConfig paper_echo_config() {
    SweepConfig config;
    // The paper's geometry (H=F=1080, 2 m/s at 50 px/m) downscaled by 5 for
    // runtime: 216 rows, 10 px/m, so per-burst pixel motion is proportional.
    config.model = ReadoutModel{216, 216, ScanDirection::TopToBottom, 30.0};
    config.generator.actor_count_range = {3, 6};
    config.generator.width_range_px = {14.0, 28.0};
    config.generator.height_range_px = {20.0, 64.0};
    config.generator.speed_range_mps = {0.4, 2.0};
    config.generator.px_per_meter = 10.0;
    config.generator.canvas_width = 384;
    config.generator.canvas_height = 216;
    config.generator.background = Rgb{24, 24, 24};
    config.speed_multipliers = {0.0, 1.0, 10.0};
    config.captures = 10;
    config.seed = 60006;
    config.workers = 2;
    config.format = LabelFormat::Both;
    return config;
}

// 6. Paper-echo trend through cmd_sweep: multiplier 0 exact, multiplier 10
//    degrades the fine-grained metric far more than the coarse one.
bool criterion_paper_echo(Check& check) {
    testsupport::TempDir tmp("acceptance_sweep");
    const SweepConfig config = paper_echo_config();
    const auto entries = run_sweep(config, tmp / "out");
    if (entries.size() != 3) {
        check.expect(false, "expected 3 sweep entries");
        return check.ok;
    }

    const EvalReport& still = entries[0].report;
    const EvalReport& walk = entries[1].report;
    const EvalReport& fast = entries[2].report;
    check.expect(still.map50 && *still.map50 == 1.0, "multiplier 0: map50 != 1.0");
    check.expect(still.map5095 && *still.map5095 == 1.0, "multiplier 0: map5095 != 1.0");

    if (!fast.map50 || !fast.map5095 || !walk.map5095) {
        check.expect(false, "missing mAP values in sweep reports");
        return check.ok;
    }
    const double drop50 = 1.0 - *fast.map50;
    const double drop5095 = 1.0 - *fast.map5095;
    check.note("mult 1:  map50=" + std::to_string(walk.map50.value_or(0.0)) +
               " map5095=" + std::to_string(*walk.map5095));
    check.expect(drop5095 > drop50, "fine-grained drop does not exceed coarse drop");
    check.expect(*fast.map50 >= 0.9, "map50 at 10x fell below 0.9: " + std::to_string(*fast.map50));
    check.expect(*fast.map5095 <= *fast.map50 - 0.05,
                 "map5095 not at least 0.05 below map50 at 10x");
    check.note("mult 10: map50=" + std::to_string(*fast.map50) +
               " map5095=" + std::to_string(*fast.map5095));
    return check.ok;
}

// 7. Format round trips: 50 random sets within 1e-5 px; canonical files
//    re-serialize byte-identically.
bool criterion_format_round_trips(Check& check) {
    testsupport::TempDir tmp("acceptance_formats");
    Rng rng(7000);

    for (int trial = 0; trial < 50; ++trial) {
        const std::filesystem::path dir = tmp / ("t" + std::to_string(trial));
        const ImageSize size{1920, 1080};
        const auto grid = [&](double lo, double hi) {
            return std::round(rng.uniform(lo, hi) * 1e6) / 1e6;
        };
        GroundTruthSet gts;
        DetectionSet dets;
        const int images = rng.uniform_int(1, 4);
        for (int i = 0; i < images; ++i) {
            char name[16];
            std::snprintf(name, sizeof(name), "im_%02d", i);
            ImageGroundTruth gt;
            gt.size = size;
            std::vector<Detection> image_dets;
            const int n = rng.uniform_int(0, 5);
            for (int b = 0; b < n; ++b) {
                const double cx = grid(0.2, 0.8), cy = grid(0.2, 0.8);
                const double w = grid(0.02, 0.3), h = grid(0.02, 0.3);
                const BBox box{(cx - w / 2) * size.width, (cy - h / 2) * size.height,
                               (cx + w / 2) * size.width, (cy + h / 2) * size.height, 0};
                gt.boxes.push_back(box);
                image_dets.push_back(Detection{box, grid(0.0, 1.0)});
            }
            gts.emplace(name, std::move(gt));
            dets.emplace(name, std::move(image_dets));
        }

        const auto check_boxes = [&](const GroundTruthSet& back, const char* format) {
            for (const auto& [id, gt] : gts) {
                const auto& boxes = back.at(id).boxes;
                if (boxes.size() != gt.boxes.size()) {
                    check.expect(false, std::string(format) + ": box count changed");
                    return;
                }
                for (std::size_t b = 0; b < boxes.size(); ++b) {
                    const double err = std::max(
                        {std::abs(boxes[b].x_min - gt.boxes[b].x_min),
                         std::abs(boxes[b].y_min - gt.boxes[b].y_min),
                         std::abs(boxes[b].x_max - gt.boxes[b].x_max),
                         std::abs(boxes[b].y_max - gt.boxes[b].y_max)});
                    check.expect(err <= 1e-5, std::string(format) + " round-trip error " +
                                                  std::to_string(err) + " px at trial " +
                                                  std::to_string(trial));
                }
            }
        };

        write_yolo_gt(gts, dir / "labels");
        check_boxes(read_yolo_gt(dir / "labels", image_sizes(gts)), "yolo");
        write_coco_gt(gts, dir / "gt.json");
        check_boxes(read_coco_gt(dir / "gt.json"), "coco");

        write_yolo_detections(dets, image_sizes(gts), dir / "dets");
        const DetectionSet dets_back = read_yolo_detections(dir / "dets", image_sizes(gts));
        for (const auto& [id, image_dets] : dets) {
            for (std::size_t d = 0; d < image_dets.size(); ++d) {
                check.expect(std::abs(dets_back.at(id)[d].confidence -
                                      image_dets[d].confidence) <= 1e-6,
                             "yolo detection confidence drifted");
            }
        }

        // Canonical idempotence, byte for byte.
        write_yolo_gt(read_yolo_gt(dir / "labels", image_sizes(gts)), dir / "labels2");
        check.expect(testsupport::trees_identical(dir / "labels", dir / "labels2"),
                     "yolo canonical files changed on re-serialization");
        write_coco_gt(read_coco_gt(dir / "gt.json"), dir / "gt2.json");
        check.expect(testsupport::read_bytes(dir / "gt.json") ==
                         testsupport::read_bytes(dir / "gt2.json"),
                     "coco canonical file changed on re-serialization");
    }
    return check.ok;
}

// 8. End-to-end determinism: the same sweep twice, byte-identical trees.
bool criterion_determinism(Check& check) {
    testsupport::TempDir tmp("acceptance_determinism");
    SweepConfig config = paper_echo_config();
    config.captures = 6;
    run_sweep(config, tmp / "a");
    config.workers = 1;  // worker count must not affect the output
    run_sweep(config, tmp / "b");
    check.expect(testsupport::trees_identical(tmp / "a", tmp / "b"),
                 "sweep output trees differ between runs");
    return check.ok;
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<bool(Check&)> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"static-scene identity (25 scenes, H=F=64)", 5.0, criterion_static_identity},
        {"row provenance (50 bursts, H=F in {16,64,128})", 30.0, criterion_row_provenance},
        {"shear law (20 configurations)", 30.0, criterion_shear_law},
        {"annotation transform vs mask oracle (120 scenes)", 120.0, criterion_transform_oracle},
        {"metrics vs brute-force oracle (200 instances)", 60.0, criterion_metrics_oracle},
        {"paper-echo trend via sweep (multipliers 0/1/10)", 300.0, criterion_paper_echo},
        {"format round trips (50 sets)", 10.0, criterion_format_round_trips},
        {"end-to-end sweep determinism", 600.0, criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Check check;
        bool ok = false;
        try {
            ok = criteria[i].fn(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed >= criteria[i].budget_seconds) {
            check.expect(false, "runtime budget exceeded");
            ok = false;
        }
        ok = ok && check.ok;
        std::printf("[%s] %zu. %s (%.2fs)%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    elapsed, check.log.str().c_str());
        if (!ok) ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
    } else {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    }
    return failures;
}
