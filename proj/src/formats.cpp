#include "rollscan/formats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace rollscan {

namespace {

std::string yolo_line(const BBox& box, ImageSize size, const double* confidence) {
    const double w = static_cast<double>(size.width);
    const double h = static_cast<double>(size.height);
    char buf[160];
    if (confidence) {
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.6f", box.class_id,
                      (box.x_min + box.x_max) / 2.0 / w, (box.y_min + box.y_max) / 2.0 / h,
                      (box.x_max - box.x_min) / w, (box.y_max - box.y_min) / h, *confidence);
    } else {
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f", box.class_id,
                      (box.x_min + box.x_max) / 2.0 / w, (box.y_min + box.y_max) / 2.0 / h,
                      (box.x_max - box.x_min) / w, (box.y_max - box.y_min) / h);
    }
    return buf;
}

struct YoloFields {
    int class_id = 0;
    BBox box;
    double confidence = 0.0;
    bool has_confidence = false;
};

YoloFields parse_yolo_line(const std::string& line, ImageSize size, const std::string& where) {
    std::istringstream in(line);
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) {
        throw DataError(where + ": malformed field");
    }
    if (values.size() != 5 && values.size() != 6) {
        throw DataError(where + ": expected 5 or 6 fields, got " + std::to_string(values.size()));
    }
    if (values[0] < 0.0 || values[0] != std::floor(values[0])) {
        throw DataError(where + ": class id must be a non-negative integer");
    }
    for (std::size_t i = 1; i < 5; ++i) {
        if (values[i] < 0.0 || values[i] > 1.0) {
            throw DataError(where + ": normalized coordinate " + std::to_string(values[i]) +
                            " outside [0,1]");
        }
    }
    YoloFields out;
    out.class_id = static_cast<int>(values[0]);
    const double cx = values[1] * size.width;
    const double cy = values[2] * size.height;
    const double bw = values[3] * size.width;
    const double bh = values[4] * size.height;
    out.box = BBox{cx - bw / 2.0, cy - bh / 2.0, cx + bw / 2.0, cy + bh / 2.0, out.class_id};
    if (values.size() == 6) {
        if (values[5] < 0.0 || values[5] > 1.0) {
            throw DataError(where + ": confidence outside [0,1]");
        }
        out.confidence = values[5];
        out.has_confidence = true;
    }
    return out;
}

void write_yolo_file(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string());
    }
    for (const std::string& line : lines) {
        out << line << "\n";
    }
}

std::vector<std::pair<std::string, fs::path>> list_yolo_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError(dir.string() + " is not a directory");
    }
    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.emplace_back(entry.path().stem().string(), entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

ImageSize size_for(const std::map<std::string, ImageSize>& sizes, const std::string& stem,
                   const fs::path& path) {
    const auto it = sizes.find(stem);
    if (it == sizes.end()) {
        throw DataError(path.string() + ": unknown image reference \"" + stem + "\"");
    }
    return it->second;
}

void validate_coco_bbox(const json& bbox, const std::string& where) {
    if (!bbox.is_array() || bbox.size() != 4) {
        throw DataError(where + ": bbox must be [x, y, w, h]");
    }
    const double w = bbox[2].get<double>();
    const double h = bbox[3].get<double>();
    if (w < 0.0 || h < 0.0) {
        throw DataError(where + ": bbox width/height must be non-negative");
    }
}

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw CorruptFileError(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string());
    }
    out << j.dump(2) << "\n";
}

}  // namespace

void write_yolo_gt(const GroundTruthSet& gts, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& [image_id, gt] : gts) {
        if (gt.size.width < 1 || gt.size.height < 1) {
            throw DataError("image \"" + image_id + "\" has no dimensions to normalize by");
        }
        std::vector<std::string> lines;
        lines.reserve(gt.boxes.size());
        for (const BBox& box : gt.boxes) {
            lines.push_back(yolo_line(box, gt.size, nullptr));
        }
        write_yolo_file(dir / (image_id + ".txt"), lines);
    }
}

GroundTruthSet read_yolo_gt(const fs::path& dir, const std::map<std::string, ImageSize>& sizes) {
    GroundTruthSet gts;
    for (const auto& [stem, path] : list_yolo_files(dir)) {
        const ImageSize size = size_for(sizes, stem, path);
        ImageGroundTruth gt;
        gt.size = size;
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot open " + path.string());
        }
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const std::string where = path.string() + ":" + std::to_string(line_no);
            const YoloFields fields = parse_yolo_line(line, size, where);
            if (fields.has_confidence) {
                throw DataError(where + ": unexpected confidence field in ground truth");
            }
            gt.boxes.push_back(fields.box);
        }
        gts.emplace(stem, std::move(gt));
    }
    return gts;
}

void write_yolo_detections(const DetectionSet& dets,
                           const std::map<std::string, ImageSize>& sizes, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& [image_id, image_dets] : dets) {
        const auto it = sizes.find(image_id);
        if (it == sizes.end()) {
            throw DataError("detections reference unknown image \"" + image_id + "\"");
        }
        std::vector<std::string> lines;
        lines.reserve(image_dets.size());
        for (const Detection& det : image_dets) {
            lines.push_back(yolo_line(det.box, it->second, &det.confidence));
        }
        write_yolo_file(dir / (image_id + ".txt"), lines);
    }
}

DetectionSet read_yolo_detections(const fs::path& dir,
                                  const std::map<std::string, ImageSize>& sizes) {
    DetectionSet dets;
    for (const auto& [stem, path] : list_yolo_files(dir)) {
        const ImageSize size = size_for(sizes, stem, path);
        std::vector<Detection> image_dets;
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot open " + path.string());
        }
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const std::string where = path.string() + ":" + std::to_string(line_no);
            const YoloFields fields = parse_yolo_line(line, size, where);
            if (!fields.has_confidence) {
                throw DataError(where + ": detection line is missing the confidence field");
            }
            image_dets.push_back(Detection{fields.box, fields.confidence});
        }
        dets.emplace(stem, std::move(image_dets));
    }
    return dets;
}

std::map<std::string, int> coco_image_ids(const GroundTruthSet& gts) {
    std::map<std::string, int> ids;
    int next = 1;
    for (const auto& [image_id, gt] : gts) {
        ids.emplace(image_id, next++);
    }
    return ids;
}

void write_coco_gt(const GroundTruthSet& gts, const fs::path& file) {
    const auto ids = coco_image_ids(gts);

    json images = json::array();
    json annotations = json::array();
    std::set<int> class_ids;
    int ann_id = 1;
    for (const auto& [image_id, gt] : gts) {
        images.push_back({{"id", ids.at(image_id)},
                          {"file_name", image_id + ".png"},
                          {"width", gt.size.width},
                          {"height", gt.size.height}});
        for (const BBox& box : gt.boxes) {
            class_ids.insert(box.class_id);
            annotations.push_back({{"id", ann_id++},
                                   {"image_id", ids.at(image_id)},
                                   {"category_id", box.class_id},
                                   {"bbox", {box.x_min, box.y_min, box.width(), box.height()}},
                                   {"area", box.area()},
                                   {"iscrowd", 0}});
        }
    }
    if (class_ids.empty()) class_ids.insert(0);
    json categories = json::array();
    for (const int cls : class_ids) {
        categories.push_back(
            {{"id", cls}, {"name", cls == 0 ? "pedestrian" : "class_" + std::to_string(cls)}});
    }

    write_json_file(json{{"images", std::move(images)},
                         {"annotations", std::move(annotations)},
                         {"categories", std::move(categories)}},
                    file);
}

GroundTruthSet read_coco_gt(const fs::path& file) {
    const json j = load_json_file(file);
    if (!j.is_object() || !j.contains("images") || !j.contains("annotations")) {
        throw DataError(file.string() + ": not a COCO ground-truth file");
    }

    std::map<int, std::string> stems;
    GroundTruthSet gts;
    for (const json& image : j["images"]) {
        const std::string where = file.string() + ": images[" + std::to_string(stems.size()) + "]";
        if (!image.contains("id") || !image.contains("file_name")) {
            throw DataError(where + ": missing id or file_name");
        }
        const int id = image["id"].get<int>();
        std::string stem = image["file_name"].get<std::string>();
        if (const auto dot = stem.rfind('.'); dot != std::string::npos) {
            stem = stem.substr(0, dot);
        }
        ImageGroundTruth gt;
        gt.size.width = image.value("width", 0);
        gt.size.height = image.value("height", 0);
        if (gt.size.width < 1 || gt.size.height < 1) {
            throw DataError(where + ": missing or invalid width/height");
        }
        stems.emplace(id, stem);
        gts.emplace(std::move(stem), std::move(gt));
    }

    std::size_t index = 0;
    for (const json& ann : j["annotations"]) {
        const std::string where = file.string() + ": annotations[" + std::to_string(index++) + "]";
        try {
            const int image_id = ann.value("image_id", -1);
            const auto stem = stems.find(image_id);
            if (stem == stems.end()) {
                throw DataError(where + ": unknown image reference " + std::to_string(image_id));
            }
            validate_coco_bbox(ann.at("bbox"), where);
            const json& bbox = ann["bbox"];
            BBox box;
            box.x_min = bbox[0].get<double>();
            box.y_min = bbox[1].get<double>();
            box.x_max = box.x_min + bbox[2].get<double>();
            box.y_max = box.y_min + bbox[3].get<double>();
            box.class_id = ann.value("category_id", 0);
            gts.at(stem->second).boxes.push_back(box);
        } catch (const json::exception& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return gts;
}

void write_coco_detections(const DetectionSet& dets, const std::map<std::string, int>& image_ids,
                           const fs::path& file) {
    json results = json::array();
    for (const auto& [image_id, image_dets] : dets) {
        const auto it = image_ids.find(image_id);
        if (it == image_ids.end()) {
            throw DataError("detections reference unknown image \"" + image_id + "\"");
        }
        for (const Detection& det : image_dets) {
            results.push_back({{"image_id", it->second},
                               {"category_id", det.box.class_id},
                               {"bbox",
                                {det.box.x_min, det.box.y_min, det.box.width(), det.box.height()}},
                               {"score", det.confidence}});
        }
    }
    write_json_file(results, file);
}

DetectionSet read_coco_detections(const fs::path& file,
                                  const std::map<std::string, int>& image_ids) {
    const json j = load_json_file(file);
    if (!j.is_array()) {
        throw DataError(file.string() + ": COCO detection results must be a JSON list");
    }
    std::map<int, std::string> stems;
    for (const auto& [stem, id] : image_ids) {
        stems.emplace(id, stem);
    }

    DetectionSet dets;
    for (const auto& [stem, id] : image_ids) {
        dets.emplace(stem, std::vector<Detection>{});
    }
    std::size_t index = 0;
    for (const json& record : j) {
        const std::string where = file.string() + ": [" + std::to_string(index++) + "]";
        try {
            const int image_id = record.value("image_id", -1);
            const auto stem = stems.find(image_id);
            if (stem == stems.end()) {
                throw DataError(where + ": unknown image reference " + std::to_string(image_id));
            }
            validate_coco_bbox(record.at("bbox"), where);
            const json& bbox = record["bbox"];
            Detection det;
            det.box.x_min = bbox[0].get<double>();
            det.box.y_min = bbox[1].get<double>();
            det.box.x_max = det.box.x_min + bbox[2].get<double>();
            det.box.y_max = det.box.y_min + bbox[3].get<double>();
            det.box.class_id = record.value("category_id", 0);
            det.confidence = record.value("score", -1.0);
            if (det.confidence < 0.0 || det.confidence > 1.0) {
                throw DataError(where + ": score outside [0,1]");
            }
            dets.at(stem->second).push_back(det);
        } catch (const json::exception& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return dets;
}

DetectionSet read_detections(const fs::path& path, const GroundTruthSet& gts) {
    if (fs::is_directory(path)) {
        return read_yolo_detections(path, image_sizes(gts));
    }
    return read_coco_detections(path, coco_image_ids(gts));
}

std::map<std::string, ImageSize> image_sizes(const GroundTruthSet& gts) {
    std::map<std::string, ImageSize> sizes;
    for (const auto& [image_id, gt] : gts) {
        sizes.emplace(image_id, gt.size);
    }
    return sizes;
}

}  // namespace rollscan
