#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "defectscan/imaging.hpp"
#include "defectscan/model.hpp"

namespace defectscan {

struct WindowVerdict {
    std::size_t row = 0;
    std::size_t col = 0;
    double distance = 0.0;  // kInfiniteDistance when the Sorensen guard fires
    bool defective = false;

    bool operator==(const WindowVerdict&) const = default;
};

/// Per-window verdicts for one image, row-major.
struct DefectMap {
    WindowGrid grid;
    std::size_t image_width = 0;
    std::size_t image_height = 0;
    double threshold = 0.0;
    std::vector<WindowVerdict> windows;

    const WindowVerdict& at(std::size_t row, std::size_t col) const {
        return windows[row * grid.cols + col];
    }
    std::size_t defective_count() const;

    bool operator==(const DefectMap&) const = default;
};

struct Classification {
    double distance;
    bool defective;
};

/// A window is defective iff its distance is strictly greater than the threshold.
Classification classify_window(const FeatureVector& f, const DefectModel& m);

/// Quantizes and tiles with the model's config, then classifies every window.
DefectMap detect(const GrayImage& img, const DefectModel& m);

/// Same distances, verdicts recomputed against a different threshold.
DefectMap rescore(const DefectMap& map, double threshold);

/// {"rows", "cols", "window", "threshold", "windows": [{"row", "col", "distance", "defective"}]}
/// with infinite distances written as the string "inf".
std::string report_to_json(const DefectMap& map);

/// Gray value used for the border of a defective window.
inline constexpr std::uint8_t kHighlightValue = 255;

/// Copy of img where every defective window is blended halfway toward
/// kHighlightValue and outlined with a 1-px kHighlightValue border.
/// Throws Error if the map was not produced for img's dimensions.
GrayImage render_overlay(const GrayImage& img, const DefectMap& map);

}  // namespace defectscan
