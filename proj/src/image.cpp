#include "rollscan/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rollscan/kernels.hpp"

namespace rollscan {

namespace {
void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("image dimensions must be at least 1x1, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
}
}  // namespace

ImageBuffer::ImageBuffer(int width, int height, Rgb fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    kernels::fill_rgb(bytes(), pixels_.size(), fill.r, fill.g, fill.b);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pixels_.size() != expected) {
        throw std::invalid_argument("pixel count " + std::to_string(pixels_.size()) +
                                    " does not match " + std::to_string(width) + "x" +
                                    std::to_string(height));
    }
}

std::span<const Rgb> ImageBuffer::row(int r) const {
    if (r < 0 || r >= height_) {
        throw std::out_of_range("row " + std::to_string(r) + " outside image of height " +
                                std::to_string(height_));
    }
    return {pixels_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
}

std::span<Rgb> ImageBuffer::row(int r) {
    if (r < 0 || r >= height_) {
        throw std::out_of_range("row " + std::to_string(r) + " outside image of height " +
                                std::to_string(height_));
    }
    return {pixels_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
}

const Rgb& ImageBuffer::at(int x, int y) const {
    if (x < 0 || x >= width_ || y < 0 || y >= height_) {
        throw std::out_of_range("pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                ") outside " + std::to_string(width_) + "x" + std::to_string(height_));
    }
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
}

Rgb& ImageBuffer::at(int x, int y) {
    return const_cast<Rgb&>(static_cast<const ImageBuffer&>(*this).at(x, y));
}

const std::uint8_t* ImageBuffer::bytes() const {
    return reinterpret_cast<const std::uint8_t*>(pixels_.data());
}

std::uint8_t* ImageBuffer::bytes() {
    return reinterpret_cast<std::uint8_t*>(pixels_.data());
}

bool images_equal(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width() != b.width() || a.height() != b.height()) return false;
    return kernels::spans_equal(a.bytes(), b.bytes(), a.byte_size());
}

ImageBuffer flip_vertical(const ImageBuffer& img) {
    ImageBuffer out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        const auto src = img.row(img.height() - 1 - r);
        std::ranges::copy(src, out.row(r).begin());
    }
    return out;
}

FrameSequence::FrameSequence(std::vector<ImageBuffer> frames, double frame_rate)
    : frames_(std::move(frames)), frame_rate_(frame_rate) {
    if (frames_.empty()) {
        throw std::invalid_argument("frame sequence must contain at least one frame");
    }
    if (!(frame_rate_ > 0.0)) {
        throw std::invalid_argument("frame rate must be positive, got " + std::to_string(frame_rate_));
    }
    const int w = frames_.front().width();
    const int h = frames_.front().height();
    for (std::size_t k = 1; k < frames_.size(); ++k) {
        if (frames_[k].width() != w || frames_[k].height() != h) {
            throw std::invalid_argument("frame " + std::to_string(k) + " is " +
                                        std::to_string(frames_[k].width()) + "x" +
                                        std::to_string(frames_[k].height()) +
                                        ", expected uniform " + std::to_string(w) + "x" +
                                        std::to_string(h));
        }
    }
}

const ImageBuffer& FrameSequence::frame(std::size_t k) const {
    if (k >= frames_.size()) {
        throw std::out_of_range("frame " + std::to_string(k) + " outside sequence of " +
                                std::to_string(frames_.size()));
    }
    return frames_[k];
}

}  // namespace rollscan
