#pragma once

#include <filesystem>

#include "rollscan/image.hpp"

namespace rollscan {

// Canonical lossless storage is 8-bit RGB PNG without interlacing; binary
// PPM (P6, maxval 255) is accepted as a dependency-light fallback. Anything
// else is rejected at load time so ground-truth sequences stay bit-exact.

/// Loads a PNG or PPM image, detected by file content.
/// Throws IoError when the file cannot be read, UnsupportedFormatError for
/// formats outside the supported set, CorruptFileError for undecodable data.
ImageBuffer load_image(const std::filesystem::path& path);

/// Saves by extension: ".png" or ".ppm".
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

ImageBuffer load_png(const std::filesystem::path& path);
void save_png(const ImageBuffer& img, const std::filesystem::path& path);
ImageBuffer load_ppm(const std::filesystem::path& path);
void save_ppm(const ImageBuffer& img, const std::filesystem::path& path);

/// On-disk burst layout: frame_000000.png ... plus a sequence.json sidecar
/// holding {frame_rate, width, height, frame_count}.
void save_sequence(const FrameSequence& seq, const std::filesystem::path& dir);

/// Loads a burst directory, validating the sidecar against the actual frames.
/// Missing or mismatched frames raise DataError naming the offender.
FrameSequence load_sequence(const std::filesystem::path& dir);

}  // namespace rollscan
