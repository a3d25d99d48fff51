#pragma once

#include "rollscan/image.hpp"

namespace rollscan {

enum class ScanDirection { TopToBottom, BottomToTop };

/// Rolling-shutter capture geometry: H sensor rows read across a burst of
/// F source frames, one output capture per burst. The supported regime is
/// F <= H; with F == H each row comes from its own frame.
struct ReadoutModel {
    int sensor_rows = 1080;               // H
    int frames_per_capture = 1080;        // F
    ScanDirection scan_direction = ScanDirection::TopToBottom;
    double gs_frame_rate = 30.0;          // output captures per second
};

/// Throws ConfigError when the model is outside the supported regime.
void validate_model(const ReadoutModel& model);

/// The rate the source burst must be captured at: gs_frame_rate * F.
double source_frame_rate(const ReadoutModel& model);

/// Maps an output row to the burst frame it reads from.
/// Top-to-bottom: floor(r*F/H). Bottom-to-top: floor((H-1-r)*F/H).
/// Identity on scan position when F == H.
int row_to_frame(const ReadoutModel& model, int row);

/// Rolling-shutter composition: output row r is row r of frame
/// row_to_frame(model, r), copied bit-exactly.
ImageBuffer compose_rs(const FrameSequence& seq, const ReadoutModel& model);

/// Global-shutter capture: frame 0 of the burst, unmodified.
ImageBuffer compose_gs(const FrameSequence& seq, const ReadoutModel& model);

struct CapturePair {
    ImageBuffer gs;
    ImageBuffer rs;
};

/// Both captures from the same burst.
CapturePair capture_pair(const FrameSequence& seq, const ReadoutModel& model);

}  // namespace rollscan
