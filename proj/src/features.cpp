#include "defectscan/features.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "defectscan/error.hpp"
#include "defectscan/parallel.hpp"

namespace defectscan {

std::string_view to_string(EnergyMode mode) {
    return mode == EnergyMode::Asm ? "asm" : "histogram";
}

EnergyMode parse_energy_mode(std::string_view text) {
    if (text == "asm") {
        return EnergyMode::Asm;
    }
    if (text == "histogram") {
        return EnergyMode::Histogram;
    }
    throw Error("unknown energy mode: " + std::string(text));
}

FeatureVector FeatureVector::from_energies(const std::array<double, 4>& e) {
    return {{e[0] - e[1], e[0] - e[2], e[0] - e[3], e[1] - e[2], e[1] - e[3], e[2] - e[3]}};
}

double energy(std::span<const std::uint32_t> counts, unsigned levels, EnergyMode mode) {
    const std::size_t cells = std::size_t{levels} * levels;
    if (counts.size() != cells) {
        throw Error("GLCM size does not match levels");
    }
    std::uint64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    if (total == 0) {
        throw Error("energy of an empty GLCM");
    }

    if (mode == EnergyMode::Asm) {
        std::uint64_t sum_sq = 0;
        for (auto c : counts) {
            sum_sq += std::uint64_t{c} * c;
        }
        const double t = static_cast<double>(total);
        return static_cast<double>(sum_sq) / (t * t);
    }

    std::vector<std::uint32_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t sum_sq = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const std::uint64_t freq = j - i;
        sum_sq += freq * freq;
        i = j;
    }
    const double n = static_cast<double>(cells);
    return static_cast<double>(sum_sq) / (n * n);
}

double energy(const Glcm& g, EnergyMode mode) { return energy(g.counts, g.levels, mode); }

std::array<double, 4> directional_energies(const QuantizedView& window, EnergyMode mode) {
    if (window.width < 2 || window.height < 2) {
        throw Error("window must be at least 2x2 for feature extraction");
    }
    std::vector<std::uint32_t> counts(std::size_t{window.levels} * window.levels);
    std::array<double, 4> e{};
    for (std::size_t k = 0; k < kCanonicalDirections.size(); ++k) {
        std::fill(counts.begin(), counts.end(), 0u);
        accumulate_glcm(window, kCanonicalDirections[k], counts);
        e[k] = energy(counts, window.levels, mode);
    }
    return e;
}

FeatureVector feature_vector(const QuantizedView& window, EnergyMode mode) {
    return FeatureVector::from_energies(directional_energies(window, mode));
}

GridFeatures grid_features(const GrayImage& img, unsigned levels, std::size_t window,
                           EnergyMode mode) {
    const QuantizedImage q = quantize(img, levels);
    GridFeatures out{tile(q, window), {}};
    out.features.resize(out.grid.size());
    parallel_for(out.grid.size(), [&](std::size_t i) {
        const auto view = window_at(q, out.grid, i / out.grid.cols, i % out.grid.cols);
        out.features[i] = feature_vector(view, mode);
    });
    return out;
}

}  // namespace defectscan
