#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "defectscan/imaging.hpp"
#include "oracle.hpp"

namespace testing {

inline defectscan::QuantizedImage to_quantized(const oracle::Image& img) {
    std::vector<std::uint8_t> px(img.px.begin(), img.px.end());
    return {static_cast<std::size_t>(img.width), static_cast<std::size_t>(img.height),
            static_cast<unsigned>(img.levels), std::move(px)};
}

inline oracle::Image to_oracle(const defectscan::QuantizedImage& q) {
    return {static_cast<int>(q.width), static_cast<int>(q.height), static_cast<int>(q.levels),
            std::vector<int>(q.pixels.begin(), q.pixels.end())};
}

inline defectscan::GrayImage random_gray(std::mt19937& rng, std::size_t w, std::size_t h) {
    defectscan::GrayImage img(w, h);
    std::uniform_int_distribution<int> px(0, 255);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(px(rng));
    return img;
}

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("defectscan_test_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace testing
