#include "rollscan/annotations.hpp"

#include <algorithm>
#include <string>

#include "rollscan/errors.hpp"

namespace rollscan {

std::optional<BBox> clamp_box(const BBox& box, ImageSize image) {
    BBox out = box;
    out.x_min = std::clamp(out.x_min, 0.0, static_cast<double>(image.width));
    out.x_max = std::clamp(out.x_max, 0.0, static_cast<double>(image.width));
    out.y_min = std::clamp(out.y_min, 0.0, static_cast<double>(image.height));
    out.y_max = std::clamp(out.y_max, 0.0, static_cast<double>(image.height));
    if (out.x_min >= out.x_max || out.y_min >= out.y_max) {
        return std::nullopt;
    }
    return out;
}

std::vector<BBox> transform_track_to_rs(const Track& track, const ReadoutModel& model,
                                        ImageSize image, const RsTransformOptions& options) {
    validate_model(model);
    if (track.boxes.size() < static_cast<std::size_t>(model.frames_per_capture)) {
        throw DataError("track " + std::to_string(track.actor_id) + " has " +
                        std::to_string(track.boxes.size()) + " boxes, model needs " +
                        std::to_string(model.frames_per_capture));
    }
    if (model.sensor_rows != image.height) {
        throw DataError("sensor_rows " + std::to_string(model.sensor_rows) +
                        " does not match image height " + std::to_string(image.height));
    }

    struct Run {
        int first_row;
        int last_row;
        double x_min;
        double x_max;
    };
    std::vector<Run> runs;

    for (int r = 0; r < model.sensor_rows; ++r) {
        const BBox& src = track.boxes[static_cast<std::size_t>(row_to_frame(model, r))];
        const bool occupied = src.y_min <= static_cast<double>(r) &&
                              static_cast<double>(r) < src.y_max;
        if (!occupied) continue;
        if (!runs.empty() && runs.back().last_row == r - 1) {
            runs.back().last_row = r;
            runs.back().x_min = std::min(runs.back().x_min, src.x_min);
            runs.back().x_max = std::max(runs.back().x_max, src.x_max);
        } else {
            runs.push_back(Run{r, r, src.x_min, src.x_max});
        }
    }

    const int class_id = track.boxes.empty() ? 0 : track.boxes.front().class_id;
    std::vector<BBox> fragments;
    fragments.reserve(runs.size());
    for (const Run& run : runs) {
        const BBox& first_src = track.boxes[static_cast<std::size_t>(row_to_frame(model, run.first_row))];
        const BBox& last_src = track.boxes[static_cast<std::size_t>(row_to_frame(model, run.last_row))];
        BBox frag;
        frag.x_min = run.x_min;
        frag.x_max = run.x_max;
        // Keep the source edge when it lies within the pixel row bordering
        // the run; a static track then round-trips its box exactly.
        frag.y_min = std::max(first_src.y_min, static_cast<double>(run.first_row) - 1.0);
        frag.y_max = std::min(last_src.y_max, static_cast<double>(run.last_row) + 1.0);
        frag.class_id = class_id;
        if (auto clamped = clamp_box(frag, image)) {
            fragments.push_back(*clamped);
        }
    }

    if (options.merge_fragments && fragments.size() > 1) {
        BBox merged = fragments.front();
        for (std::size_t i = 1; i < fragments.size(); ++i) {
            merged.x_min = std::min(merged.x_min, fragments[i].x_min);
            merged.y_min = std::min(merged.y_min, fragments[i].y_min);
            merged.x_max = std::max(merged.x_max, fragments[i].x_max);
            merged.y_max = std::max(merged.y_max, fragments[i].y_max);
        }
        return {merged};
    }
    return fragments;
}

std::vector<BBox> transform_tracks_to_gs(const std::vector<Track>& tracks, ImageSize image) {
    std::vector<BBox> boxes;
    boxes.reserve(tracks.size());
    for (const Track& track : tracks) {
        if (track.boxes.empty()) {
            throw DataError("track " + std::to_string(track.actor_id) + " is empty");
        }
        if (auto clamped = clamp_box(track.boxes.front(), image)) {
            boxes.push_back(*clamped);
        }
    }
    return boxes;
}

std::vector<BBox> transform_tracks_to_rs(const std::vector<Track>& tracks,
                                         const ReadoutModel& model, ImageSize image,
                                         const RsTransformOptions& options) {
    std::vector<BBox> boxes;
    for (const Track& track : tracks) {
        auto fragments = transform_track_to_rs(track, model, image, options);
        boxes.insert(boxes.end(), fragments.begin(), fragments.end());
    }
    return boxes;
}

DatasetStats dataset_stats(const GroundTruthSet& gts) {
    DatasetStats stats;
    double area_sum = 0.0;
    std::size_t annotated_images = 0;
    for (const auto& [id, gt] : gts) {
        if (gt.boxes.empty()) continue;
        ++annotated_images;
        for (const BBox& box : gt.boxes) {
            area_sum += box.area();
            ++stats.total_boxes;
        }
    }
    if (stats.total_boxes > 0) {
        stats.mean_box_area = area_sum / static_cast<double>(stats.total_boxes);
        stats.mean_boxes_per_annotated_image =
            static_cast<double>(stats.total_boxes) / static_cast<double>(annotated_images);
    }
    return stats;
}

}  // namespace rollscan
