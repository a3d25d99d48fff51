#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rollscan/shutter.hpp"

namespace rollscan {

/// Axis-aligned box in pixel coordinates. Real-valued throughout the
/// pipeline; integer snapping happens only at format boundaries.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    int class_id = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// One actor's ground-truth box in every frame of a capture burst.
struct Track {
    int actor_id = 0;
    std::vector<BBox> boxes;  // length == frames_per_capture
};

struct Detection {
    BBox box;
    double confidence = 0.0;  // in [0, 1]
};

struct ImageSize {
    int width = 0;
    int height = 0;
};

struct ImageGroundTruth {
    ImageSize size;
    std::vector<BBox> boxes;
};

/// image id -> ground truth, ordered for deterministic serialization.
using GroundTruthSet = std::map<std::string, ImageGroundTruth>;

/// image id -> scored predictions.
using DetectionSet = std::map<std::string, std::vector<Detection>>;

/// Clamps to [0,W]x[0,H]; empty result when the box lies outside.
std::optional<BBox> clamp_box(const BBox& box, ImageSize image);

struct RsTransformOptions {
    /// Merge all fragments of one actor into a single enclosing box,
    /// mimicking single-box manual labels. Default keeps the geometry.
    bool merge_fragments = false;
};

/// Rolling-shutter ground truth for one track.
///
/// Walks output rows in scan order; row r belongs to the actor iff the
/// actor's box in frame row_to_frame(r) crosses the scanline (half-open
/// y_min <= r < y_max). Occupied rows form maximal contiguous runs; each
/// run becomes one box whose x extent is the union of the per-row extents.
/// Run edges keep the source box's sub-pixel edge when it falls within the
/// adjacent pixel row, so a zero-motion track reproduces its box exactly.
/// Returns possibly zero boxes (a fast actor can evade its own readout) or
/// several fragments, clamped to the image.
std::vector<BBox> transform_track_to_rs(const Track& track, const ReadoutModel& model,
                                        ImageSize image, const RsTransformOptions& options = {});

/// Global-shutter ground truth: every track's frame-0 box, clamped.
std::vector<BBox> transform_tracks_to_gs(const std::vector<Track>& tracks, ImageSize image);

/// Rolling-shutter ground truth over all tracks of one capture.
std::vector<BBox> transform_tracks_to_rs(const std::vector<Track>& tracks,
                                         const ReadoutModel& model, ImageSize image,
                                         const RsTransformOptions& options = {});

struct DatasetStats {
    std::size_t total_boxes = 0;
    std::optional<double> mean_box_area;                 // absent when no boxes
    std::optional<double> mean_boxes_per_annotated_image;  // over images with boxes
};

DatasetStats dataset_stats(const GroundTruthSet& gts);

}  // namespace rollscan
