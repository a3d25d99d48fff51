#include "rollscan/shutter.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "rollscan/errors.hpp"

namespace rollscan {

void validate_model(const ReadoutModel& model) {
    if (model.sensor_rows < 1) {
        throw ConfigError("sensor_rows must be >= 1, got " + std::to_string(model.sensor_rows));
    }
    if (model.frames_per_capture < 1) {
        throw ConfigError("frames_per_capture must be >= 1, got " +
                          std::to_string(model.frames_per_capture));
    }
    if (model.frames_per_capture > model.sensor_rows) {
        // More than one frame per row interval would need an averaging policy
        // the row-substitution scheme does not define.
        throw ConfigError("frames_per_capture (" + std::to_string(model.frames_per_capture) +
                          ") must not exceed sensor_rows (" + std::to_string(model.sensor_rows) +
                          ")");
    }
    if (!(model.gs_frame_rate > 0.0)) {
        throw ConfigError("gs_frame_rate must be positive");
    }
}

double source_frame_rate(const ReadoutModel& model) {
    return model.gs_frame_rate * static_cast<double>(model.frames_per_capture);
}

int row_to_frame(const ReadoutModel& model, int row) {
    const int h = model.sensor_rows;
    const int f = model.frames_per_capture;
    if (row < 0 || row >= h) {
        throw std::out_of_range("row " + std::to_string(row) + " outside sensor of " +
                                std::to_string(h) + " rows");
    }
    const std::int64_t scan_pos =
        model.scan_direction == ScanDirection::TopToBottom ? row : (h - 1 - row);
    return static_cast<int>(scan_pos * f / h);
}

ImageBuffer compose_rs(const FrameSequence& seq, const ReadoutModel& model) {
    validate_model(model);
    const std::size_t f = static_cast<std::size_t>(model.frames_per_capture);
    if (seq.size() < f) {
        throw DataError("burst has " + std::to_string(seq.size()) + " frames, model needs " +
                        std::to_string(f));
    }
    if (seq.height() != model.sensor_rows) {
        throw DataError("frame height " + std::to_string(seq.height()) +
                        " does not match sensor_rows " + std::to_string(model.sensor_rows));
    }

    ImageBuffer out(seq.width(), seq.height());
    for (int r = 0; r < out.height(); ++r) {
        const auto src = seq.frame(static_cast<std::size_t>(row_to_frame(model, r))).row(r);
        std::ranges::copy(src, out.row(r).begin());
    }
    return out;
}

ImageBuffer compose_gs(const FrameSequence& seq, const ReadoutModel&) {
    return seq.frame(0);
}

CapturePair capture_pair(const FrameSequence& seq, const ReadoutModel& model) {
    return CapturePair{compose_gs(seq, model), compose_rs(seq, model)};
}

}  // namespace rollscan
