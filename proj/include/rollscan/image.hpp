#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rollscan {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

static_assert(sizeof(Rgb) == 3, "Rgb must pack to 3 bytes for row-major byte access");

/// A single raster frame: row-major 8-bit RGB, at least 1x1.
/// Treated as an immutable value once handed to the pipeline; every
/// transform returns a new buffer.
class ImageBuffer {
public:
    ImageBuffer(int width, int height, Rgb fill = Rgb{});
    ImageBuffer(int width, int height, std::vector<Rgb> pixels);

    int width() const { return width_; }
    int height() const { return height_; }

    /// The r-th raster row. Throws std::out_of_range outside [0, height).
    std::span<const Rgb> row(int r) const;
    std::span<Rgb> row(int r);

    const Rgb& at(int x, int y) const;
    Rgb& at(int x, int y);

    std::span<const Rgb> pixels() const { return pixels_; }
    std::span<Rgb> pixels() { return pixels_; }

    const std::uint8_t* bytes() const;
    std::uint8_t* bytes();
    std::size_t byte_size() const { return pixels_.size() * sizeof(Rgb); }

private:
    int width_;
    int height_;
    std::vector<Rgb> pixels_;
};

/// True iff dimensions and all pixel values match bit-exactly.
bool images_equal(const ImageBuffer& a, const ImageBuffer& b);

/// New buffer with the row order reversed.
ImageBuffer flip_vertical(const ImageBuffer& img);

/// An ordered burst of uniform-dimension frames captured at a fixed rate.
/// Frame k carries the implicit timestamp k / frame_rate seconds.
class FrameSequence {
public:
    FrameSequence(std::vector<ImageBuffer> frames, double frame_rate);

    std::size_t size() const { return frames_.size(); }
    const ImageBuffer& frame(std::size_t k) const;
    double frame_rate() const { return frame_rate_; }
    double timestamp(std::size_t k) const { return static_cast<double>(k) / frame_rate_; }

    int width() const { return frames_.front().width(); }
    int height() const { return frames_.front().height(); }

private:
    std::vector<ImageBuffer> frames_;
    double frame_rate_;
};

}  // namespace rollscan
