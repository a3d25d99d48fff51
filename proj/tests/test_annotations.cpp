#include <doctest.h>

#include <cmath>

#include "rollscan/annotations.hpp"
#include "rollscan/errors.hpp"
#include "rollscan/rng.hpp"
#include "rollscan/scene.hpp"
#include "support/mask_oracle.hpp"
#include "support/scene_gen.hpp"

using namespace rollscan;

namespace {

ReadoutModel model_of(int h, int f) { return ReadoutModel{h, f, ScanDirection::TopToBottom, 30.0}; }

Track constant_track(const BBox& box, int frames) {
    Track track;
    track.actor_id = 0;
    track.boxes.assign(static_cast<std::size_t>(frames), box);
    return track;
}

void check_against_oracle(const std::vector<BBox>& fragments,
                          const std::vector<oracle::TightBox>& expected, double tol = 1.0 + 1e-9) {
    REQUIRE(fragments.size() == expected.size());
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        CHECK(std::abs(fragments[i].x_min - expected[i].x_min) <= tol);
        CHECK(std::abs(fragments[i].y_min - expected[i].y_min) <= tol);
        CHECK(std::abs(fragments[i].x_max - expected[i].x_max) <= tol);
        CHECK(std::abs(fragments[i].y_max - expected[i].y_max) <= tol);
    }
}

}  // namespace

TEST_CASE("clamp_box") {
    const ImageSize size{100, 50};
    const auto inside = clamp_box(BBox{10, 10, 20, 20}, size);
    REQUIRE(inside);
    CHECK(*inside == BBox{10, 10, 20, 20});

    const auto cut = clamp_box(BBox{-5, 40, 20, 80}, size);
    REQUIRE(cut);
    CHECK(*cut == BBox{0, 40, 20, 50});

    CHECK_FALSE(clamp_box(BBox{120, 10, 140, 20}, size));
    CHECK_FALSE(clamp_box(BBox{10, -20, 20, -5}, size));
}

TEST_CASE("zero-motion track transforms to exactly its own box") {
    const BBox box{12.3, 7.3, 30.9, 13.2, 0};
    const Track track = constant_track(box, 64);
    const auto out = transform_track_to_rs(track, model_of(64, 64), ImageSize{96, 64});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == box);
}

TEST_CASE("transform validates track length and image height") {
    const Track track = constant_track(BBox{1, 1, 3, 3}, 8);
    CHECK_THROWS_AS(transform_track_to_rs(track, model_of(16, 16), ImageSize{16, 16}), DataError);
    CHECK_THROWS_AS(transform_track_to_rs(track, model_of(8, 8), ImageSize{16, 16}), DataError);
    CHECK_NOTHROW(transform_track_to_rs(track, model_of(8, 8), ImageSize{16, 8}));
}

TEST_CASE("horizontal shear law: width grows by v per occupied row") {
    // F == H, box of height 4 and width 2 at integer rows, 1 px/frame.
    const int hf = 16;
    Track track;
    track.actor_id = 0;
    for (int k = 0; k < hf; ++k) {
        const double x = 3.0 + 1.0 * k;
        track.boxes.push_back(BBox{x, 6.0, x + 2.0, 10.0, 0});
    }
    const auto out = transform_track_to_rs(track, model_of(hf, hf), ImageSize{32, hf});
    REQUIRE(out.size() == 1);
    CHECK(out[0].y_min == doctest::Approx(6.0));
    CHECK(out[0].y_max == doctest::Approx(10.0));
    CHECK(out[0].width() == doctest::Approx(2.0 + 1.0 * 3.0));  // w + v*(h_box-1)
    CHECK(out[0].x_min == doctest::Approx(3.0 + 6.0));          // frame 6 reads row 6
}

TEST_CASE("downward motion at 1 px per frame matches the mask oracle") {
    Actor actor;
    actor.id = 0;
    actor.shape = ShapeKind::Rectangle;
    actor.width = 6;
    actor.height = 5;
    actor.color = Rgb{255, 255, 255};
    // 1 px per frame: rate = H*30 px/s over a 32-row sensor.
    const int hf = 32;
    const double rate = hf * 30.0;
    actor.trajectory = Trajectory{{Waypoint{0.0, Vec2{12.0, 6.0}},
                                   Waypoint{1.0, Vec2{12.0, 6.0 + rate}}}};
    Scene scene;
    scene.width = 48;
    scene.height = hf;
    scene.background = Rgb{0, 0, 0};
    scene.actors.push_back(actor);

    const ReadoutModel model = model_of(hf, hf);
    const auto tracks = gt_tracks(scene, model);
    const auto fragments =
        transform_track_to_rs(tracks[0], model, ImageSize{scene.width, scene.height});
    const auto expected = oracle::rs_mask_oracle(scene, model);
    check_against_oracle(fragments, expected);
}

TEST_CASE("a fast actor can outrun its own readout") {
    // Box starts below the scan and descends faster than one row per frame.
    const int hf = 16;
    Track track;
    track.actor_id = 0;
    for (int k = 0; k < hf; ++k) {
        const double y = 5.0 + 2.0 * k;
        track.boxes.push_back(BBox{2.0, y, 5.0, y + 1.5, 0});
    }
    const auto out = transform_track_to_rs(track, model_of(hf, hf), ImageSize{16, hf});
    CHECK(out.empty());
}

TEST_CASE("fast drop then stop splits the ground truth into fragments") {
    // Occupies the top row, outruns the scan, then waits for it: two boxes.
    const int hf = 32;
    Track track;
    track.actor_id = 0;
    for (int k = 0; k < hf; ++k) {
        const double y_min = std::min(3.0 * k, 24.0);
        track.boxes.push_back(BBox{4.0, y_min, 10.0, y_min + 4.0, 0});
    }
    const ReadoutModel model = model_of(hf, hf);
    const auto fragments = transform_track_to_rs(track, model, ImageSize{16, hf});
    REQUIRE(fragments.size() == 2);
    CHECK(fragments[0].y_min == doctest::Approx(0.0));
    CHECK(fragments[1].y_min == doctest::Approx(24.0));
    CHECK(fragments[1].y_max == doctest::Approx(28.0));

    const auto merged = transform_track_to_rs(track, model, ImageSize{16, hf},
                                              RsTransformOptions{/*merge_fragments=*/true});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].y_min == doctest::Approx(0.0));
    CHECK(merged[0].y_max == doctest::Approx(28.0));
    CHECK(merged[0].x_min == doctest::Approx(4.0));
}

TEST_CASE("transform equals the mask-composition oracle on random scenes") {
    Rng rng(2024);
    int multi_fragment_cases = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = testsupport::random_single_rect_case(rng, trial % 2 == 0 ? 32 : 48);
        const auto tracks = gt_tracks(c.scene, c.model);
        const auto fragments = transform_track_to_rs(
            tracks[0], c.model, ImageSize{c.scene.width, c.scene.height});
        const auto expected = oracle::rs_mask_oracle(c.scene, c.model);
        CAPTURE(trial);
        check_against_oracle(fragments, expected);
        if (expected.size() > 1) ++multi_fragment_cases;
    }
    CHECK(multi_fragment_cases > 0);  // the sample must exercise fragmentation
}

TEST_CASE("GS transform emits frame-0 boxes, clamped") {
    const BBox box{3.5, 4.5, 9.5, 12.5, 0};
    std::vector<Track> tracks{constant_track(box, 16)};
    const auto gs = transform_tracks_to_gs(tracks, ImageSize{16, 16});
    REQUIRE(gs.size() == 1);
    CHECK(gs[0] == box);

    // Static scene: GS and RS ground truth coincide.
    const auto rs = transform_tracks_to_rs(tracks, model_of(16, 16), ImageSize{16, 16});
    REQUIRE(rs.size() == 1);
    CHECK(rs[0] == gs[0]);

    // Moving track: they differ.
    Track moving;
    moving.actor_id = 0;
    for (int k = 0; k < 16; ++k) {
        moving.boxes.push_back(BBox{1.0 + 0.5 * k, 2.0, 4.0 + 0.5 * k, 9.0, 0});
    }
    const auto rs_moving =
        transform_track_to_rs(moving, model_of(16, 16), ImageSize{16, 16});
    REQUIRE(rs_moving.size() == 1);
    CHECK(rs_moving[0].width() > moving.boxes[0].width());

    CHECK(transform_tracks_to_gs({}, ImageSize{16, 16}).empty());
}

TEST_CASE("transform outputs always satisfy box invariants inside the image") {
    Rng rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        const auto c = testsupport::random_single_rect_case(rng, 32);
        const auto tracks = gt_tracks(c.scene, c.model);
        for (const BBox& box : transform_track_to_rs(tracks[0], c.model,
                                                     ImageSize{c.scene.width, c.scene.height})) {
            CHECK(box.x_min <= box.x_max);
            CHECK(box.y_min <= box.y_max);
            CHECK(box.x_min >= 0.0);
            CHECK(box.y_min >= 0.0);
            CHECK(box.x_max <= c.scene.width);
            CHECK(box.y_max <= c.scene.height);
        }
    }
}

TEST_CASE("dataset_stats") {
    GroundTruthSet gts;
    gts["a"] = ImageGroundTruth{{100, 100}, {BBox{0, 0, 10, 10, 0}}};
    gts["b"] = ImageGroundTruth{{100, 100}, {BBox{0, 0, 30, 10, 0}}};
    const DatasetStats two = dataset_stats(gts);
    CHECK(two.total_boxes == 2);
    CHECK(*two.mean_box_area == doctest::Approx(200.0));
    CHECK(*two.mean_boxes_per_annotated_image == doctest::Approx(1.0));

    const DatasetStats empty = dataset_stats({});
    CHECK(empty.total_boxes == 0);
    CHECK_FALSE(empty.mean_box_area);
    CHECK_FALSE(empty.mean_boxes_per_annotated_image);

    GroundTruthSet units;
    units["only"] = ImageGroundTruth{
        {10, 10}, {BBox{0, 0, 1, 1, 0}, BBox{1, 0, 2, 1, 0}, BBox{2, 0, 3, 1, 0}}};
    units["blank"] = ImageGroundTruth{{10, 10}, {}};  // excluded from the per-image mean
    const DatasetStats three = dataset_stats(units);
    CHECK(three.total_boxes == 3);
    CHECK(*three.mean_box_area == doctest::Approx(1.0));
    CHECK(*three.mean_boxes_per_annotated_image == doctest::Approx(3.0));
}
