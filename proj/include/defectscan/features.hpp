#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "defectscan/glcm.hpp"

namespace defectscan {

/// How a GLCM is reduced to one energy value.
///   Asm:       sum over cells of (count / total)^2 (angular second moment).
///   Histogram: the GLCM is treated as an L x L image whose "gray levels" are
///              its raw cell counts; energy is the sum over distinct count
///              values of (frequency / L^2)^2.
enum class EnergyMode : std::uint8_t { Asm, Histogram };

std::string_view to_string(EnergyMode mode);
/// Accepts "asm" or "histogram"; throws Error otherwise.
EnergyMode parse_energy_mode(std::string_view text);

inline constexpr std::size_t kFeatureDims = 6;

/// Signed pairwise energy differences
/// (E0-E45, E0-E90, E0-E135, E45-E90, E45-E135, E90-E135).
struct FeatureVector {
    std::array<double, kFeatureDims> f{};

    double operator[](std::size_t i) const { return f[i]; }
    double& operator[](std::size_t i) { return f[i]; }
    bool operator==(const FeatureVector&) const = default;

    static FeatureVector from_energies(const std::array<double, 4>& e);
};

/// Energy of raw counts laid out levels x levels. Both modes are computed in
/// exact integer arithmetic followed by one division, so the result depends
/// only on the multiset of counts. Throws Error on an all-zero matrix.
double energy(std::span<const std::uint32_t> counts, unsigned levels, EnergyMode mode);
double energy(const Glcm& g, EnergyMode mode);

/// Energies for D0, D45, D90, D135. Requires a window of at least 2x2.
std::array<double, 4> directional_energies(const QuantizedView& window, EnergyMode mode);

FeatureVector feature_vector(const QuantizedView& window, EnergyMode mode);
inline FeatureVector feature_vector(const QuantizedImage& window, EnergyMode mode) {
    return feature_vector(view_of(window), mode);
}

/// Feature vectors of every window of `img` in row-major grid order.
struct GridFeatures {
    WindowGrid grid;
    std::vector<FeatureVector> features;
};

/// Quantizes, tiles and featurizes an image. Windows are processed in
/// parallel; the output order is fixed by the grid.
GridFeatures grid_features(const GrayImage& img, unsigned levels, std::size_t window,
                           EnergyMode mode);

}  // namespace defectscan
