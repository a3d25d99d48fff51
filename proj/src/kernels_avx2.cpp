#include "rollscan/kernels.hpp"

#ifdef ROLLSCAN_HAVE_AVX2_KERNELS

#include <immintrin.h>

namespace rollscan::kernels::avx2 {

// The 3-byte RGB pattern realigns with the register lattice every
// lcm(3, 32) = 96 bytes, so the store loop keeps three pattern registers
// and advances 32 pixels per iteration.
void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t byte_count = pixel_count * 3;
    if (byte_count < 96) {
        scalar::fill_rgb(dst, pixel_count, r, g, b);
        return;
    }

    alignas(32) std::uint8_t pattern[96];
    for (std::size_t i = 0; i < 96; i += 3) {
        pattern[i + 0] = r;
        pattern[i + 1] = g;
        pattern[i + 2] = b;
    }
    const __m256i p0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern));
    const __m256i p1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 32));
    const __m256i p2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 64));

    std::size_t i = 0;
    for (; i + 96 <= byte_count; i += 96) {
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), p0);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 32), p1);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 64), p2);
    }
    // i is a multiple of 96, so the tail starts at channel phase 0.
    for (; i < byte_count; ++i) {
        dst[i] = pattern[i % 3];
    }
}

bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count) {
    std::size_t i = 0;
    for (; i + 32 <= byte_count; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i eq = _mm256_cmpeq_epi8(va, vb);
        if (_mm256_movemask_epi8(eq) != -1) return false;
    }
    for (; i < byte_count; ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

}  // namespace rollscan::kernels::avx2

#endif  // ROLLSCAN_HAVE_AVX2_KERNELS
