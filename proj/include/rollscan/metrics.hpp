#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rollscan/annotations.hpp"

namespace rollscan {

enum class Interpolation {
    Points101,  // COCO-style: envelope precision sampled at 101 recalls
    Exact,      // area under the full precision envelope
};

struct MetricConfig {
    /// Strictly increasing thresholds in (0,1]. Default mirrors the
    /// 0.50:0.05:0.95 range plus the standalone 0.5 report column.
    std::vector<double> iou_thresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                          0.75, 0.80, 0.85, 0.90, 0.95};
    /// Operating point for precision/recall; always echoed in reports.
    double confidence_threshold = 0.25;
    Interpolation interpolation = Interpolation::Points101;
};

void validate_metric_config(const MetricConfig& config);

/// area(a intersect b) / area(a union b); 0 when the union is degenerate.
double iou(const BBox& a, const BBox& b);

/// Greedy matching of one image and one class at a single IoU threshold.
/// `ranked` must be sorted by rank (confidence desc, area desc, input
/// order); each detection takes the unmatched GT of highest IoU >= the
/// threshold, and a GT matches at most once.
struct MatchResult {
    std::vector<int> det_to_gt;    // per detection: matched GT index or -1
    std::vector<bool> gt_matched;  // per GT
};
MatchResult match_detections(std::span<const Detection> ranked, std::span<const BBox> gts,
                             double iou_threshold);

/// AP over a ranked true-positive flag list. Absent when n_gt == 0 and the
/// list is empty; 0 when n_gt == 0 but detections exist.
std::optional<double> average_precision(const std::vector<bool>& ranked_tp, std::size_t n_gt,
                                        Interpolation interpolation);

struct EvalReport {
    std::optional<double> precision;  // absent with zero predictions kept
    std::optional<double> recall;
    std::optional<double> map50;
    std::optional<double> map5095;  // mean of per-threshold class means
    std::vector<double> thresholds;
    std::vector<std::optional<double>> per_threshold_ap;
    double confidence_threshold = 0.25;
    std::size_t n_images = 0;
    std::size_t n_gt = 0;
    std::size_t n_detections = 0;
};

/// Full evaluation: class-mean AP per threshold, the two mAP summaries, and
/// P/R at the configured confidence with IoU 0.5 matching. Detections whose
/// image id is absent from the ground truth raise DataError.
EvalReport evaluate(const DetectionSet& dets, const GroundTruthSet& gts,
                    const MetricConfig& config);

struct MetricDelta {
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> delta_abs;  // a - b
    std::optional<double> delta_rel;  // |a-b| / max(a,b)
};

struct ReportDelta {
    MetricDelta precision;
    MetricDelta recall;
    MetricDelta map50;
    MetricDelta map5095;
};

/// Per-metric deltas between two reports, both absolute and relative.
ReportDelta compare_reports(const EvalReport& a, const EvalReport& b);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
std::string report_to_text(const EvalReport& report);

nlohmann::json delta_to_json(const ReportDelta& delta);
std::string delta_to_text(const ReportDelta& delta);

}  // namespace rollscan
