#include "rollscan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"

using json = nlohmann::json;

namespace rollscan {

void validate_metric_config(const MetricConfig& config) {
    if (config.iou_thresholds.empty()) {
        throw ConfigError("iou_thresholds must not be empty");
    }
    double prev = 0.0;
    for (const double thr : config.iou_thresholds) {
        if (!(thr > 0.0) || thr > 1.0) {
            throw ConfigError("iou thresholds must lie in (0, 1]");
        }
        if (thr <= prev) {
            throw ConfigError("iou thresholds must be strictly increasing");
        }
        prev = thr;
    }
    if (config.confidence_threshold < 0.0 || config.confidence_threshold > 1.0) {
        throw ConfigError("confidence_threshold must lie in [0, 1]");
    }
}

double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

MatchResult match_detections(std::span<const Detection> ranked, std::span<const BBox> gts,
                             double iou_threshold) {
    MatchResult result;
    result.det_to_gt.assign(ranked.size(), -1);
    result.gt_matched.assign(gts.size(), false);
    for (std::size_t d = 0; d < ranked.size(); ++d) {
        double best_iou = 0.0;
        int best_gt = -1;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (result.gt_matched[g]) continue;
            const double overlap = iou(ranked[d].box, gts[g]);
            if (overlap >= iou_threshold && overlap > best_iou) {
                best_iou = overlap;
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt >= 0) {
            result.det_to_gt[d] = best_gt;
            result.gt_matched[static_cast<std::size_t>(best_gt)] = true;
        }
    }
    return result;
}

std::optional<double> average_precision(const std::vector<bool>& ranked_tp, std::size_t n_gt,
                                        Interpolation interpolation) {
    if (n_gt == 0) {
        if (ranked_tp.empty()) return std::nullopt;
        return 0.0;
    }
    if (ranked_tp.empty()) return 0.0;

    const std::size_t n = ranked_tp.size();
    std::vector<double> precision(n);
    std::vector<double> recall(n);
    std::size_t tp = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (ranked_tp[k]) ++tp;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / static_cast<double>(n_gt);
    }

    // Right-to-left maximum turns the sawtooth into the standard envelope.
    std::vector<double> envelope(n);
    envelope[n - 1] = precision[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        envelope[k] = std::max(precision[k], envelope[k + 1]);
    }

    if (interpolation == Interpolation::Points101) {
        double sum = 0.0;
        std::size_t k = 0;
        for (int s = 0; s <= 100; ++s) {
            const double target = static_cast<double>(s) / 100.0;
            while (k < n && recall[k] < target) ++k;
            if (k < n) sum += envelope[k];
        }
        return sum / 101.0;
    }

    // Exact: area under the recall/envelope polyline.
    double area = 0.0;
    double prev_recall = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (recall[k] > prev_recall) {
            area += (recall[k] - prev_recall) * envelope[k];
            prev_recall = recall[k];
        }
    }
    return area;
}

namespace {

struct RankedDet {
    const Detection* det;
    std::string image_id;
    std::size_t input_index;
};

bool rank_less(const RankedDet& a, const RankedDet& b) {
    if (a.det->confidence != b.det->confidence) return a.det->confidence > b.det->confidence;
    if (a.det->box.area() != b.det->box.area()) return a.det->box.area() > b.det->box.area();
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    return a.input_index < b.input_index;
}

}  // namespace

EvalReport evaluate(const DetectionSet& dets, const GroundTruthSet& gts,
                    const MetricConfig& config) {
    validate_metric_config(config);

    for (const auto& [image_id, image_dets] : dets) {
        if (!gts.contains(image_id)) {
            throw DataError("detections reference unknown image \"" + image_id + "\"");
        }
        for (const Detection& det : image_dets) {
            if (det.confidence < 0.0 || det.confidence > 1.0) {
                throw DataError("detection confidence outside [0,1] in image \"" + image_id + "\"");
            }
        }
    }

    std::set<int> classes;
    std::size_t total_gt = 0;
    std::size_t total_det = 0;
    for (const auto& [image_id, gt] : gts) {
        for (const BBox& box : gt.boxes) {
            classes.insert(box.class_id);
            ++total_gt;
        }
    }
    for (const auto& [image_id, image_dets] : dets) {
        for (const Detection& det : image_dets) {
            classes.insert(det.box.class_id);
            ++total_det;
        }
    }

    EvalReport report;
    report.thresholds = config.iou_thresholds;
    report.confidence_threshold = config.confidence_threshold;
    report.n_images = gts.size();
    report.n_gt = total_gt;
    report.n_detections = total_det;

    // Per class: ranked detections per image plus the pooled global ranking.
    struct ClassData {
        // image id -> (ranked detections, gt boxes)
        std::map<std::string, std::pair<std::vector<Detection>, std::vector<BBox>>> images;
        std::vector<std::pair<std::string, std::size_t>> pooled;  // (image, rank idx), global order
        std::size_t n_gt = 0;
    };
    std::map<int, ClassData> per_class;

    for (const int cls : classes) {
        ClassData& data = per_class[cls];
        std::vector<RankedDet> pooled;
        for (const auto& [image_id, gt] : gts) {
            std::vector<BBox> class_gts;
            for (const BBox& box : gt.boxes) {
                if (box.class_id == cls) class_gts.push_back(box);
            }
            std::vector<RankedDet> class_dets;
            if (const auto it = dets.find(image_id); it != dets.end()) {
                for (std::size_t i = 0; i < it->second.size(); ++i) {
                    if (it->second[i].box.class_id == cls) {
                        class_dets.push_back(RankedDet{&it->second[i], image_id, i});
                    }
                }
            }
            std::sort(class_dets.begin(), class_dets.end(), rank_less);
            std::vector<Detection> ranked;
            ranked.reserve(class_dets.size());
            for (const RankedDet& rd : class_dets) ranked.push_back(*rd.det);
            data.n_gt += class_gts.size();
            pooled.insert(pooled.end(), class_dets.begin(), class_dets.end());
            data.images.emplace(image_id, std::make_pair(std::move(ranked), std::move(class_gts)));
        }
        std::sort(pooled.begin(), pooled.end(), rank_less);
        // Record pooled order as (image, per-image rank index).
        std::map<std::string, std::size_t> seen;
        for (const RankedDet& rd : pooled) {
            data.pooled.emplace_back(rd.image_id, seen[rd.image_id]++);
        }
    }

    // AP per threshold per class.
    report.per_threshold_ap.resize(config.iou_thresholds.size());
    for (std::size_t t = 0; t < config.iou_thresholds.size(); ++t) {
        const double thr = config.iou_thresholds[t];
        double ap_sum = 0.0;
        std::size_t ap_count = 0;
        for (auto& [cls, data] : per_class) {
            std::map<std::string, std::vector<bool>> image_flags;
            for (const auto& [image_id, pair] : data.images) {
                const MatchResult match = match_detections(pair.first, pair.second, thr);
                std::vector<bool> flags(pair.first.size());
                for (std::size_t d = 0; d < flags.size(); ++d) {
                    flags[d] = match.det_to_gt[d] >= 0;
                }
                image_flags.emplace(image_id, std::move(flags));
            }
            std::vector<bool> pooled_flags;
            pooled_flags.reserve(data.pooled.size());
            for (const auto& [image_id, rank_idx] : data.pooled) {
                pooled_flags.push_back(image_flags.at(image_id)[rank_idx]);
            }
            if (const auto ap = average_precision(pooled_flags, data.n_gt, config.interpolation)) {
                ap_sum += *ap;
                ++ap_count;
            }
        }
        report.per_threshold_ap[t] =
            ap_count > 0 ? std::optional<double>(ap_sum / static_cast<double>(ap_count))
                         : std::nullopt;
    }

    // Headline summaries.
    double ap_sum = 0.0;
    std::size_t ap_count = 0;
    for (std::size_t t = 0; t < config.iou_thresholds.size(); ++t) {
        if (std::abs(config.iou_thresholds[t] - 0.5) < 1e-12) {
            report.map50 = report.per_threshold_ap[t];
        }
        if (report.per_threshold_ap[t]) {
            ap_sum += *report.per_threshold_ap[t];
            ++ap_count;
        }
    }
    if (ap_count == config.iou_thresholds.size()) {
        report.map5095 = ap_sum / static_cast<double>(ap_count);
    }

    // Precision/recall at the configured operating point, IoU 0.5 matching.
    std::size_t tp = 0;
    std::size_t kept = 0;
    for (const auto& [cls, data] : per_class) {
        for (const auto& [image_id, pair] : data.images) {
            std::vector<Detection> kept_dets;
            for (const Detection& det : pair.first) {
                if (det.confidence >= config.confidence_threshold) kept_dets.push_back(det);
            }
            kept += kept_dets.size();
            const MatchResult match = match_detections(kept_dets, pair.second, 0.5);
            for (const int g : match.det_to_gt) {
                if (g >= 0) ++tp;
            }
        }
    }
    if (kept > 0) {
        report.precision = static_cast<double>(tp) / static_cast<double>(kept);
    }
    if (total_gt > 0) {
        report.recall = static_cast<double>(tp) / static_cast<double>(total_gt);
    }
    return report;
}

ReportDelta compare_reports(const EvalReport& a, const EvalReport& b) {
    const auto diff = [](const std::optional<double>& va, const std::optional<double>& vb) {
        MetricDelta delta;
        delta.a = va;
        delta.b = vb;
        if (va && vb) {
            delta.delta_abs = *va - *vb;
            const double denom = std::max(*va, *vb);
            delta.delta_rel = denom > 0.0 ? std::abs(*va - *vb) / denom : 0.0;
        }
        return delta;
    };
    ReportDelta delta;
    delta.precision = diff(a.precision, b.precision);
    delta.recall = diff(a.recall, b.recall);
    delta.map50 = diff(a.map50, b.map50);
    delta.map5095 = diff(a.map5095, b.map5095);
    return delta;
}

namespace {

json opt_to_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> opt_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

std::string fmt(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

void append_cell(std::string& line, const std::string& cell, std::size_t width) {
    line += cell;
    if (cell.size() < width) line.append(width - cell.size(), ' ');
}

}  // namespace

json report_to_json(const EvalReport& report) {
    json thresholds = json::array();
    json per_threshold = json::array();
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
        thresholds.push_back(report.thresholds[t]);
        per_threshold.push_back(opt_to_json(report.per_threshold_ap[t]));
    }
    return json{
        {"precision", opt_to_json(report.precision)},
        {"recall", opt_to_json(report.recall)},
        {"map50", opt_to_json(report.map50)},
        {"map5095", opt_to_json(report.map5095)},
        {"iou_thresholds", std::move(thresholds)},
        {"per_threshold_ap", std::move(per_threshold)},
        {"confidence_threshold", report.confidence_threshold},
        {"n_images", report.n_images},
        {"n_gt", report.n_gt},
        {"n_detections", report.n_detections},
    };
}

EvalReport report_from_json(const json& j) {
    EvalReport report;
    try {
        report.precision = opt_from_json(j.at("precision"));
        report.recall = opt_from_json(j.at("recall"));
        report.map50 = opt_from_json(j.at("map50"));
        report.map5095 = opt_from_json(j.at("map5095"));
        for (const auto& thr : j.at("iou_thresholds")) {
            report.thresholds.push_back(thr.get<double>());
        }
        for (const auto& ap : j.at("per_threshold_ap")) {
            report.per_threshold_ap.push_back(opt_from_json(ap));
        }
        report.confidence_threshold = j.at("confidence_threshold").get<double>();
        report.n_images = j.at("n_images").get<std::size_t>();
        report.n_gt = j.at("n_gt").get<std::size_t>();
        report.n_detections = j.at("n_detections").get<std::size_t>();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report JSON: ") + e.what());
    }
    if (report.per_threshold_ap.size() != report.thresholds.size()) {
        throw DataError("report JSON: per_threshold_ap and iou_thresholds differ in length");
    }
    return report;
}

std::string report_to_text(const EvalReport& report) {
    constexpr std::size_t kCol = 10;
    std::string header, values;
    append_cell(header, "P", kCol);
    append_cell(header, "R", kCol);
    append_cell(header, "mAP@0.5", kCol);
    append_cell(values, fmt(report.precision), kCol);
    append_cell(values, fmt(report.recall), kCol);
    append_cell(values, fmt(report.map50), kCol);
    header += "mAP@0.5:0.95";
    values += fmt(report.map5095);

    std::ostringstream out;
    out << header << "\n" << values << "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "(P/R at confidence >= %.2f; %zu images, %zu GT boxes, %zu detections)",
                  report.confidence_threshold, report.n_images, report.n_gt, report.n_detections);
    out << buf << "\n";
    return out.str();
}

json delta_to_json(const ReportDelta& delta) {
    const auto metric = [](const MetricDelta& m) {
        return json{{"a", opt_to_json(m.a)},
                    {"b", opt_to_json(m.b)},
                    {"delta_abs", opt_to_json(m.delta_abs)},
                    {"delta_rel", opt_to_json(m.delta_rel)}};
    };
    return json{{"precision", metric(delta.precision)},
                {"recall", metric(delta.recall)},
                {"map50", metric(delta.map50)},
                {"map5095", metric(delta.map5095)}};
}

std::string delta_to_text(const ReportDelta& delta) {
    constexpr std::size_t kLabel = 12;
    constexpr std::size_t kCol = 10;
    const MetricDelta* metrics[] = {&delta.precision, &delta.recall, &delta.map50, &delta.map5095};

    std::string header;
    append_cell(header, "", kLabel);
    append_cell(header, "P", kCol);
    append_cell(header, "R", kCol);
    append_cell(header, "mAP@0.5", kCol);
    header += "mAP@0.5:0.95";

    const auto row = [&](const char* label, auto&& pick) {
        std::string line;
        append_cell(line, label, kLabel);
        for (std::size_t i = 0; i < 4; ++i) {
            std::string cell = fmt(pick(*metrics[i]));
            if (i + 1 < 4) {
                append_cell(line, cell, kCol);
            } else {
                line += cell;
            }
        }
        return line;
    };

    std::ostringstream out;
    out << header << "\n";
    out << row("a", [](const MetricDelta& m) { return m.a; }) << "\n";
    out << row("b", [](const MetricDelta& m) { return m.b; }) << "\n";
    out << row("delta(a-b)", [](const MetricDelta& m) { return m.delta_abs; }) << "\n";
    out << row("rel", [](const MetricDelta& m) { return m.delta_rel; }) << "\n";
    return out.str();
}

}  // namespace rollscan
