#include "rollscan/kernels.hpp"

namespace rollscan::kernels {

#ifdef ROLLSCAN_HAVE_AVX2_KERNELS

bool avx2_supported() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported;
}

namespace {
using FillFn = void (*)(std::uint8_t*, std::size_t, std::uint8_t, std::uint8_t, std::uint8_t);
using EqualFn = bool (*)(const std::uint8_t*, const std::uint8_t*, std::size_t);

struct Dispatch {
    FillFn fill;
    EqualFn equal;
    const char* name;
};

const Dispatch& dispatch() {
    static const Dispatch d = avx2_supported()
        ? Dispatch{&avx2::fill_rgb, &avx2::spans_equal, "avx2"}
        : Dispatch{&scalar::fill_rgb, &scalar::spans_equal, "scalar"};
    return d;
}
}  // namespace

void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    dispatch().fill(dst, pixel_count, r, g, b);
}

bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count) {
    return dispatch().equal(a, b, byte_count);
}

const char* active_impl() { return dispatch().name; }

#else

void fill_rgb(std::uint8_t* dst, std::size_t pixel_count,
              std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    scalar::fill_rgb(dst, pixel_count, r, g, b);
}

bool spans_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t byte_count) {
    return scalar::spans_equal(a, b, byte_count);
}

const char* active_impl() { return "scalar"; }

#endif

}  // namespace rollscan::kernels
