#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace defectscan {

/// 8-bit single-channel image, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    /// Zero-filled image. Throws Error on a zero dimension.
    GrayImage(std::size_t width, std::size_t height);
    /// Throws Error unless pixels.size() == width * height and both dimensions are >= 1.
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
    std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }

    bool operator==(const GrayImage&) const = default;
};

/// Image reduced to the gray-level alphabet [0, levels).
struct QuantizedImage {
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned levels = 0;
    std::vector<std::uint8_t> pixels;

    QuantizedImage() = default;
    /// Validates dimensions, 2 <= levels <= 256 and that every pixel is < levels.
    QuantizedImage(std::size_t width, std::size_t height, unsigned levels,
                   std::vector<std::uint8_t> pixels);

    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }

    bool operator==(const QuantizedImage&) const = default;
};

/// Non-owning rectangular view into a QuantizedImage. Windows are handed to
/// the texture code as views so tiling never copies pixel data.
struct QuantizedView {
    const std::uint8_t* origin = nullptr;
    std::size_t stride = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned levels = 0;

    std::uint8_t at(std::size_t row, std::size_t col) const { return origin[row * stride + col]; }
    const std::uint8_t* row_ptr(std::size_t row) const { return origin + row * stride; }
};

/// Whole-image view.
QuantizedView view_of(const QuantizedImage& img);

/// Geometry of the disjoint W x W windows covering an image. Cell (r, c)
/// starts at pixel (r * window, c * window); right and bottom remainders
/// narrower than a window are not covered.
struct WindowGrid {
    std::size_t window = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t size() const { return rows * cols; }
    bool operator==(const WindowGrid&) const = default;
};

/// BT.601 luma, rounded half up.
std::uint8_t to_grayscale(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Uniform binning: floor(p * levels / 256). Throws Error unless 2 <= levels <= 256.
QuantizedImage quantize(const GrayImage& img, unsigned levels);

/// Throws Error if window < 2 or window exceeds either image dimension.
WindowGrid tile(std::size_t width, std::size_t height, std::size_t window);
WindowGrid tile(const QuantizedImage& img, std::size_t window);

/// View of grid cell (row, col). Throws Error when the cell is outside the grid.
QuantizedView window_at(const QuantizedImage& img, const WindowGrid& grid, std::size_t row,
                        std::size_t col);

/// Decodes a PNG (8-bit gray, gray+alpha, RGB, RGBA or palette) or a binary
/// PGM (P5, maxval <= 255). Color is reduced with to_grayscale; alpha is ignored.
GrayImage load_image(const std::filesystem::path& path);

/// PNG / PGM encoders. File writes go through a temporary file and a rename.
std::string encode_png(const GrayImage& img);
std::string encode_pgm(const GrayImage& img);
GrayImage decode_pgm(const std::string& bytes);

/// Picks PNG or PGM from the extension (.pgm -> PGM, anything else -> PNG).
void save_image(const GrayImage& img, const std::filesystem::path& path);

}  // namespace defectscan
