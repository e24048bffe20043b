#include "defectscan/detector.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "defectscan/error.hpp"
#include "defectscan/features.hpp"

namespace defectscan {

std::size_t DefectMap::defective_count() const {
    return static_cast<std::size_t>(
        std::count_if(windows.begin(), windows.end(), [](const auto& w) { return w.defective; }));
}

Classification classify_window(const FeatureVector& f, const DefectModel& m) {
    const double d = sorensen_distance(f, m.average);
    return {d, d > m.threshold};
}

DefectMap detect(const GrayImage& img, const DefectModel& m) {
    m.validate();
    if (img.width < m.config.window || img.height < m.config.window) {
        throw Error("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                    " is smaller than the model window " + std::to_string(m.config.window));
    }
    const auto gf = grid_features(img, m.config.levels, m.config.window, m.config.energy_mode);

    DefectMap map;
    map.grid = gf.grid;
    map.image_width = img.width;
    map.image_height = img.height;
    map.threshold = m.threshold;
    map.windows.reserve(gf.features.size());
    for (std::size_t i = 0; i < gf.features.size(); ++i) {
        const auto c = classify_window(gf.features[i], m);
        map.windows.push_back({i / gf.grid.cols, i % gf.grid.cols, c.distance, c.defective});
    }
    return map;
}

DefectMap rescore(const DefectMap& map, double threshold) {
    if (std::isnan(threshold)) {
        throw Error("threshold must not be NaN");
    }
    DefectMap out = map;
    out.threshold = threshold;
    for (auto& w : out.windows) {
        w.defective = w.distance > threshold;
    }
    return out;
}

std::string report_to_json(const DefectMap& map) {
    nlohmann::ordered_json j;
    j["rows"] = map.grid.rows;
    j["cols"] = map.grid.cols;
    j["window"] = map.grid.window;
    j["threshold"] = map.threshold;
    auto windows = nlohmann::ordered_json::array();
    for (const auto& w : map.windows) {
        nlohmann::ordered_json e;
        e["row"] = w.row;
        e["col"] = w.col;
        if (std::isinf(w.distance)) {
            e["distance"] = "inf";
        } else {
            e["distance"] = w.distance;
        }
        e["defective"] = w.defective;
        windows.push_back(std::move(e));
    }
    j["windows"] = std::move(windows);
    return j.dump(2) + "\n";
}

GrayImage render_overlay(const GrayImage& img, const DefectMap& map) {
    const auto expected = tile(img.width, img.height, map.grid.window);
    if (map.image_width != img.width || map.image_height != img.height || expected != map.grid ||
        map.windows.size() != map.grid.size()) {
        throw Error("defect map does not match the image dimensions");
    }
    GrayImage out = img;
    const std::size_t w = map.grid.window;
    for (const auto& v : map.windows) {
        if (!v.defective) {
            continue;
        }
        const std::size_t top = v.row * w;
        const std::size_t left = v.col * w;
        for (std::size_t r = 0; r < w; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                auto& px = out.at(top + r, left + c);
                const bool border = r == 0 || c == 0 || r == w - 1 || c == w - 1;
                px = border ? kHighlightValue
                            : static_cast<std::uint8_t>((px + unsigned{kHighlightValue} + 1) / 2);
            }
        }
    }
    return out;
}

}  // namespace defectscan
