#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "rollscan/annotations.hpp"

namespace rollscan {

// YOLO layout: one <image_id>.txt per image with lines
//   "<class> <cx> <cy> <w> <h>"           (ground truth)
//   "<class> <cx> <cy> <w> <h> <conf>"    (detections)
// coordinates center-normalized to [0,1], printed with 6 decimals.
// Images without boxes get an empty file so sets round-trip losslessly.

void write_yolo_gt(const GroundTruthSet& gts, const std::filesystem::path& dir);

/// `sizes` supplies the per-image dimensions YOLO files do not carry.
/// Malformed lines report file and line number; a file whose stem is not
/// in `sizes` is an unknown image reference.
GroundTruthSet read_yolo_gt(const std::filesystem::path& dir,
                            const std::map<std::string, ImageSize>& sizes);

void write_yolo_detections(const DetectionSet& dets,
                           const std::map<std::string, ImageSize>& sizes,
                           const std::filesystem::path& dir);
DetectionSet read_yolo_detections(const std::filesystem::path& dir,
                                  const std::map<std::string, ImageSize>& sizes);

// COCO layout: one JSON file with images[], annotations[] (bbox [x,y,w,h]
// in pixels), categories[]; detection results are a JSON list of
// {image_id, category_id, bbox, score}.

void write_coco_gt(const GroundTruthSet& gts, const std::filesystem::path& file);
GroundTruthSet read_coco_gt(const std::filesystem::path& file);

/// Deterministic stem -> numeric id mapping (sorted stems, ids from 1).
std::map<std::string, int> coco_image_ids(const GroundTruthSet& gts);

void write_coco_detections(const DetectionSet& dets,
                           const std::map<std::string, int>& image_ids,
                           const std::filesystem::path& file);
DetectionSet read_coco_detections(const std::filesystem::path& file,
                                  const std::map<std::string, int>& image_ids);

/// Detections from either format: a directory is read as YOLO (sizes and
/// image ids from `gts`), a .json file as COCO results.
DetectionSet read_detections(const std::filesystem::path& path, const GroundTruthSet& gts);

/// Per-image sizes of a ground-truth set, for the YOLO readers.
std::map<std::string, ImageSize> image_sizes(const GroundTruthSet& gts);

}  // namespace rollscan
