#pragma once

#include <cstddef>
#include <cstdint>

// Pixel-span kernels used by the rasterizer and the readout composer.
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant; the dispatched entry points below pick one at runtime. The two
// implementations are byte-exact equivalent (see tests/test_kernels.cpp).

namespace rollscan::kernels {

namespace scalar {
void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b);
bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ROLLSCAN_HAVE_AVX2_KERNELS 1
namespace avx2 {
void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b);
bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count);
}  // namespace avx2

/// True when the running CPU supports the AVX2 variants.
bool avx2_supported();
#endif

/// Fills `pixel_count` RGB triples starting at dst with the color (r,g,b).
void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// True iff the two byte spans are identical.
bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count);

/// Name of the implementation the dispatcher selected ("avx2" or "scalar").
const char* active_impl();

}  // namespace rollscan::kernels
