#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>

#include "defectscan/features.hpp"
#include "defectscan/imaging.hpp"

namespace defectscan {

/// Distance reported when the Sorensen denominator vanishes but the
/// numerator does not. Compares greater than every finite threshold.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Denominators and numerators below this are treated as zero.
inline constexpr double kDistanceEpsilon = 1e-12;

struct TrainConfig {
    unsigned levels = 32;
    std::size_t window = 32;
    EnergyMode energy_mode = EnergyMode::Asm;
    double threshold_margin = 1.0;

    /// Throws Error unless 2 <= levels <= 256, window >= 2 and margin >= 1 (finite).
    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

struct DefectModel {
    TrainConfig config;
    FeatureVector average;
    double threshold = 0.0;
    std::size_t trained_windows = 0;

    /// Checks the config plus threshold >= 0, finite numbers and k >= 1.
    void validate() const;
    bool operator==(const DefectModel&) const = default;
};

/// Component-wise arithmetic mean. Throws Error on an empty list.
FeatureVector average_vector(std::span<const FeatureVector> vectors);

/// sum|f - g| / sum|f + g|. Returns 0 when both sums are below
/// kDistanceEpsilon and kInfiniteDistance when only the denominator is.
/// Throws Error on non-finite components.
double sorensen_distance(const FeatureVector& f, const FeatureVector& g);

/// margin * max_i sorensen_distance(vectors[i], average). An infinite
/// distance inside the training set is an error.
double compute_threshold(std::span<const FeatureVector> vectors, const FeatureVector& average,
                         double margin);

/// Pools the windows of all images (image order, then row-major) and fits
/// the mean vector and threshold.
DefectModel train(std::span<const GrayImage> images, const TrainConfig& config);

/// Model document:
/// {"version": 1, "levels", "window", "energy_mode", "margin", "average", "threshold",
///  "trained_windows"}. Unknown or missing keys are rejected.
inline constexpr int kModelVersion = 1;

std::string model_to_json(const DefectModel& m);
DefectModel model_from_json(const std::string& text);

void save_model(const DefectModel& m, const std::filesystem::path& path);
DefectModel load_model(const std::filesystem::path& path);

}  // namespace defectscan
