#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "defectscan/detector.hpp"
#include "defectscan/imaging.hpp"

namespace defectscan {

inline constexpr double kDefaultCoverage = 0.10;

/// Per-window truth labels on a tile() grid, row-major.
struct GroundTruth {
    WindowGrid grid;
    std::vector<bool> defective;

    bool at(std::size_t row, std::size_t col) const { return defective[row * grid.cols + col]; }
};

/// A window is labeled defective iff at least `coverage` of its pixels are
/// 255 in the mask. Mask pixels must be 0 or 255; coverage must lie in (0, 1].
GroundTruth mask_to_ground_truth(const GrayImage& mask, std::size_t window,
                                 double coverage = kDefaultCoverage);

struct DetectionCounts {
    std::size_t n_c = 0;      // truly healthy, predicted healthy
    std::size_t n_d = 0;      // truly defective, predicted defective
    std::size_t n_total = 0;
    std::size_t false_alarms = 0;  // truly healthy, predicted defective
    std::size_t misses = 0;        // truly defective, predicted healthy
};

/// Throws Error when the grids differ.
DetectionCounts count_detections(const DefectMap& map, const GroundTruth& gt);

/// 100 * (n_c + n_d) / n_total. Throws Error if n_total is 0 or the counts are inconsistent.
double detection_rate(const DetectionCounts& counts);
double detection_rate(const DefectMap& map, const GroundTruth& gt);

/// Window-pooled rate: all counts summed before dividing.
double pooled_detection_rate(std::span<const DetectionCounts> runs);
/// Unweighted mean of the per-run rates.
double macro_detection_rate(std::span<const DetectionCounts> runs);

enum class TextureKind : std::uint8_t { Stripes, Checker, Sinusoid };
TextureKind parse_texture_kind(std::string_view text);
std::string_view to_string(TextureKind kind);

/// Square size x size procedural texture plus N(0, noise^2) pixel noise.
///   Stripes:  vertical bands, levels 64 / 192, each period/2 columns wide
///             (the first band is period - period/2 wide for odd periods).
///   Checker:  squares of side max(1, period/2) alternating 64 / 192.
///   Sinusoid: 128 + 100 sin(2 pi (x + y) / period), a diagonal wave.
/// Deterministic for a given seed. Throws Error unless period >= 2, size >= period
/// and noise is finite and >= 0.
GrayImage synth_texture(TextureKind kind, std::size_t period, std::size_t size, double noise,
                        std::uint64_t seed);

struct Rect {
    std::size_t x = 0;  // left column
    std::size_t y = 0;  // top row
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t area() const { return width * height; }
    bool contains(std::size_t row, std::size_t col) const {
        return col >= x && col < x + width && row >= y && row < y + height;
    }
};

enum class DefectKind : std::uint8_t { Rotate90, Blur, LevelShift };
DefectKind parse_defect_kind(std::string_view text);
std::string_view to_string(DefectKind kind);

struct DefectedImage {
    GrayImage image;
    GrayImage mask;  // 255 inside the region, 0 elsewhere
};

/// Replaces the pixels inside `region`:
///   Rotate90:   region content turned a quarter turn clockwise (for non-square
///               regions source coordinates wrap around the region).
///   Blur:       5x5 box mean of the original image, edges clamped.
///   LevelShift: constant offset of 32..64 gray levels, sign and size drawn
///               from the seed, clamped to [0, 255].
/// Throws Error when the region leaves the image.
DefectedImage inject_defect(const GrayImage& img, const Rect& region, DefectKind kind,
                            std::uint64_t seed);

}  // namespace defectscan
