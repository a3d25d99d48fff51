#include "rollscan/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace rollscan {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    return f;
}

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// Default libpng handlers print to stderr before jumping; keep them quiet.
[[noreturn]] void png_quiet_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_quiet_warning(png_structp, png_const_charp) {}

std::string frame_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06zu.png", k);
    return buf;
}

}  // namespace

ImageBuffer load_png(const fs::path& path) {
    FilePtr file = open_file(path, "rb");

    unsigned char header[8];
    if (std::fread(header, 1, 8, file.get()) != 8 ||
        std::memcmp(header, kPngSignature, 8) != 0) {
        throw CorruptFileError(path.string() + ": not a PNG file");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_quiet_error, png_quiet_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path.string() + ": libpng allocation failed");
    }

    // All state touched after setjmp lives outside the jump frame.
    std::vector<Rgb> pixels;
    std::vector<png_bytep> row_ptrs;
    int width = 0;
    int height = 0;
    std::string error;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptFileError(path.string() + ": PNG decode failed");
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    const int interlace = png_get_interlace_type(png, info);

    if (interlace != PNG_INTERLACE_NONE || bit_depth != 8 ||
        (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_RGB_ALPHA)) {
        error = path.string() + ": only 8-bit non-interlaced RGB/RGBA PNG is supported";
    }
    if (!error.empty()) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormatError(error);
    }

    if (color_type == PNG_COLOR_TYPE_RGB_ALPHA) {
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    pixels.resize(static_cast<std::size_t>(width) * height);
    row_ptrs.resize(height);
    for (int r = 0; r < height; ++r) {
        row_ptrs[r] = reinterpret_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(r) * width);
    }
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    return ImageBuffer(width, height, std::move(pixels));
}

void save_png(const ImageBuffer& img, const fs::path& path) {
    FilePtr file = open_file(path, "wb");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_quiet_error, png_quiet_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path.string() + ": libpng allocation failed");
    }

    std::vector<png_bytep> row_ptrs(img.height());
    for (int r = 0; r < img.height(); ++r) {
        row_ptrs[r] = const_cast<png_bytep>(
            reinterpret_cast<const png_byte*>(img.row(r).data()));
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path.string() + ": PNG encode failed");
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

ImageBuffer load_ppm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string magic;
    in >> magic;
    if (magic != "P6") {
        throw CorruptFileError(path.string() + ": not a binary PPM (P6) file");
    }
    long width = 0, height = 0, maxval = 0;
    // PPM allows comment lines between header tokens.
    auto next_value = [&](long& out) {
        in >> std::ws;
        while (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            in >> std::ws;
        }
        in >> out;
    };
    next_value(width);
    next_value(height);
    next_value(maxval);
    if (!in || width < 1 || height < 1) {
        throw CorruptFileError(path.string() + ": malformed PPM header");
    }
    if (maxval != 255) {
        throw UnsupportedFormatError(path.string() + ": only maxval 255 PPM is supported");
    }
    in.get();  // single whitespace after maxval

    std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size() * sizeof(Rgb)));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size() * sizeof(Rgb))) {
        throw CorruptFileError(path.string() + ": truncated PPM pixel data");
    }
    return ImageBuffer(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

void save_ppm(const ImageBuffer& img, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string());
    }
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.bytes()),
              static_cast<std::streamsize>(img.byte_size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

ImageBuffer load_image(const fs::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        throw IoError("cannot open " + path.string());
    }
    unsigned char head[8] = {};
    probe.read(reinterpret_cast<char*>(head), sizeof(head));
    probe.close();

    if (std::memcmp(head, kPngSignature, 8) == 0) {
        return load_png(path);
    }
    if (head[0] == 'P' && head[1] == '6') {
        return load_ppm(path);
    }

    const auto ext = path.extension().string();
    if (ext == ".png" || ext == ".ppm") {
        throw CorruptFileError(path.string() + ": content does not match " + ext + " format");
    }
    throw UnsupportedFormatError(path.string() + ": unrecognized image format");
}

void save_image(const ImageBuffer& img, const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".png") {
        save_png(img, path);
    } else if (ext == ".ppm") {
        save_ppm(img, path);
    } else {
        throw UnsupportedFormatError("unsupported image extension: " + path.string());
    }
}

void save_sequence(const FrameSequence& seq, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    for (std::size_t k = 0; k < seq.size(); ++k) {
        save_png(seq.frame(k), dir / frame_name(k));
    }
    json meta = {
        {"frame_rate", seq.frame_rate()},
        {"width", seq.width()},
        {"height", seq.height()},
        {"frame_count", seq.size()},
    };
    std::ofstream out(dir / "sequence.json");
    if (!out) {
        throw IoError("cannot open " + (dir / "sequence.json").string());
    }
    out << meta.dump(2) << "\n";
}

FrameSequence load_sequence(const fs::path& dir) {
    const fs::path meta_path = dir / "sequence.json";
    std::ifstream in(meta_path);
    if (!in) {
        throw IoError("cannot open " + meta_path.string());
    }
    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw CorruptFileError(meta_path.string() + ": " + e.what());
    }

    double frame_rate = 0.0;
    int width = 0, height = 0;
    std::size_t frame_count = 0;
    try {
        frame_rate = meta.at("frame_rate").get<double>();
        width = meta.at("width").get<int>();
        height = meta.at("height").get<int>();
        frame_count = meta.at("frame_count").get<std::size_t>();
    } catch (const json::exception& e) {
        throw DataError(meta_path.string() + ": " + e.what());
    }
    if (frame_count == 0) {
        throw DataError(meta_path.string() + ": frame_count must be positive");
    }

    std::vector<ImageBuffer> frames;
    frames.reserve(frame_count);
    for (std::size_t k = 0; k < frame_count; ++k) {
        const fs::path frame_path = dir / frame_name(k);
        if (!fs::exists(frame_path)) {
            throw DataError(dir.string() + ": missing frame " + frame_name(k));
        }
        frames.push_back(load_png(frame_path));
        if (frames.back().width() != width || frames.back().height() != height) {
            throw DataError(frame_path.string() + ": dimensions do not match sequence metadata");
        }
    }
    return FrameSequence(std::move(frames), frame_rate);
}

}  // namespace rollscan
