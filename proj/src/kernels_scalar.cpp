#include "rollscan/kernels.hpp"

namespace rollscan::kernels::scalar {

void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (std::size_t i = 0; i < pixel_count; ++i) {
        dst[3 * i + 0] = r;
        dst[3 * i + 1] = g;
        dst[3 * i + 2] = b;
    }
}

bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count) {
    for (std::size_t i = 0; i < byte_count; ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

}  // namespace rollscan::kernels::scalar
