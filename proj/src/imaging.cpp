#include "defectscan/imaging.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <limits>

#include "defectscan/error.hpp"
#include "defectscan/io.hpp"

namespace defectscan {

namespace {

void check_dims(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) {
        throw Error("zero-dimension image");
    }
}

bool has_png_signature(const std::string& bytes) {
    return bytes.size() >= 8 &&
           png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0;
}

GrayImage decode_png(const std::string& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
        throw Error(std::string("invalid PNG: ") + image.message);
    }
    if ((image.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
        png_image_free(&image);
        throw Error("unsupported format: only 8-bit PNG is accepted");
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    // Alpha is requested so libpng never composites; it is dropped below.
    image.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
    const std::size_t width = image.width;
    const std::size_t height = image.height;
    if (width == 0 || height == 0) {
        png_image_free(&image);
        throw Error("zero-dimension image");
    }
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr) == 0) {
        throw Error(std::string("PNG decode failed: ") + image.message);
    }

    GrayImage out(width, height);
    const std::size_t channels = color ? 4 : 2;
    for (std::size_t i = 0; i < width * height; ++i) {
        const png_byte* px = &buffer[i * channels];
        out.pixels[i] = color ? to_grayscale(px[0], px[1], px[2]) : px[0];
    }
    return out;
}

}  // namespace

GrayImage::GrayImage(std::size_t w, std::size_t h) : width(w), height(h) {
    check_dims(w, h);
    pixels.assign(w * h, 0);
}

GrayImage::GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> px)
    : width(w), height(h), pixels(std::move(px)) {
    check_dims(w, h);
    if (pixels.size() != w * h) {
        throw Error("pixel count does not match image dimensions");
    }
}

QuantizedImage::QuantizedImage(std::size_t w, std::size_t h, unsigned l,
                               std::vector<std::uint8_t> px)
    : width(w), height(h), levels(l), pixels(std::move(px)) {
    check_dims(w, h);
    if (l < 2 || l > 256) {
        throw Error("levels must be in [2, 256], got " + std::to_string(l));
    }
    if (pixels.size() != w * h) {
        throw Error("pixel count does not match image dimensions");
    }
    for (auto p : pixels) {
        if (p >= l) {
            throw Error("pixel value " + std::to_string(p) + " outside [0, levels)");
        }
    }
}

QuantizedView view_of(const QuantizedImage& img) {
    return {img.pixels.data(), img.width, img.width, img.height, img.levels};
}

std::uint8_t to_grayscale(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    // Weights scaled by 1000; the sum never exceeds 255000 so no clamp is needed.
    const unsigned luma = 299u * r + 587u * g + 114u * b;
    return static_cast<std::uint8_t>((luma + 500u) / 1000u);
}

QuantizedImage quantize(const GrayImage& img, unsigned levels) {
    if (levels < 2 || levels > 256) {
        throw Error("levels must be in [2, 256], got " + std::to_string(levels));
    }
    check_dims(img.width, img.height);
    std::uint8_t table[256];
    for (unsigned p = 0; p < 256; ++p) {
        table[p] = static_cast<std::uint8_t>(p * levels / 256u);
    }
    QuantizedImage out;
    out.width = img.width;
    out.height = img.height;
    out.levels = levels;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[i] = table[img.pixels[i]];
    }
    return out;
}

WindowGrid tile(std::size_t width, std::size_t height, std::size_t window) {
    if (window < 2) {
        throw Error("window must be at least 2, got " + std::to_string(window));
    }
    if (window > width || window > height) {
        throw Error("window " + std::to_string(window) + " exceeds image dimensions " +
                    std::to_string(width) + "x" + std::to_string(height));
    }
    return {window, height / window, width / window};
}

WindowGrid tile(const QuantizedImage& img, std::size_t window) {
    return tile(img.width, img.height, window);
}

QuantizedView window_at(const QuantizedImage& img, const WindowGrid& grid, std::size_t row,
                        std::size_t col) {
    if (row >= grid.rows || col >= grid.cols ||
        (grid.rows * grid.window) > img.height || (grid.cols * grid.window) > img.width) {
        throw Error("window index outside grid");
    }
    const std::size_t offset = row * grid.window * img.width + col * grid.window;
    return {img.pixels.data() + offset, img.width, grid.window, grid.window, img.levels};
}

GrayImage decode_pgm(const std::string& bytes) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos])) != 0) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_uint = [&](const char* field) {
        skip_space();
        if (pos >= bytes.size() || std::isdigit(static_cast<unsigned char>(bytes[pos])) == 0) {
            throw Error(std::string("malformed PGM header: missing ") + field);
        }
        std::size_t value = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])) != 0) {
            value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
            if (value > (1u << 30)) {
                throw Error(std::string("malformed PGM header: ") + field + " too large");
            }
            ++pos;
        }
        return value;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw Error("unsupported format: expected binary PGM (P5)");
    }
    pos = 2;
    const std::size_t width = read_uint("width");
    const std::size_t height = read_uint("height");
    const std::size_t maxval = read_uint("maxval");
    if (width == 0 || height == 0) {
        throw Error("zero-dimension image");
    }
    if (maxval == 0 || maxval > 255) {
        throw Error("unsupported format: PGM maxval must be in [1, 255]");
    }
    if (pos >= bytes.size() || std::isspace(static_cast<unsigned char>(bytes[pos])) == 0) {
        throw Error("malformed PGM header");
    }
    ++pos;
    if (bytes.size() - pos < width * height) {
        throw Error("truncated PGM data");
    }
    GrayImage out(width, height);
    for (std::size_t i = 0; i < width * height; ++i) {
        const auto v = static_cast<unsigned char>(bytes[pos + i]);
        if (v > maxval) {
            throw Error("PGM sample exceeds maxval");
        }
        out.pixels[i] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255u + maxval / 2) / maxval);
    }
    return out;
}

GrayImage load_image(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (has_png_signature(bytes)) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        return decode_pgm(bytes);
    }
    throw Error("unsupported format: " + path.string());
}

std::string encode_png(const GrayImage& img) {
    check_dims(img.width, img.height);
    if (img.width > std::numeric_limits<png_uint_32>::max() ||
        img.height > std::numeric_limits<png_uint_32>::max()) {
        throw Error("image too large for PNG");
    }
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr) == 0) {
        throw Error(std::string("PNG encode failed: ") + image.message);
    }
    std::string out(size, '\0');
    if (png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels.data(), 0, nullptr) ==
        0) {
        throw Error(std::string("PNG encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

std::string encode_pgm(const GrayImage& img) {
    check_dims(img.width, img.height);
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
    const bool pgm = path.extension() == ".pgm" || path.extension() == ".PGM";
    write_file_atomic(path, pgm ? encode_pgm(img) : encode_png(img));
}

}  // namespace defectscan
