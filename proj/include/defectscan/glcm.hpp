#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "defectscan/imaging.hpp"

namespace defectscan {

/// The eight unit-offset neighbor relations, named by angle in degrees.
/// Rows grow downward, so 90 degrees looks one row up.
enum class Direction : std::uint8_t { D0, D45, D90, D135, D180, D225, D270, D315 };

struct Offset {
    int drow;
    int dcol;
    bool operator==(const Offset&) const = default;
};

inline constexpr std::array<Direction, 8> kAllDirections = {
    Direction::D0,   Direction::D45,  Direction::D90,  Direction::D135,
    Direction::D180, Direction::D225, Direction::D270, Direction::D315};

/// The directions used for training and testing.
inline constexpr std::array<Direction, 4> kCanonicalDirections = {
    Direction::D0, Direction::D45, Direction::D90, Direction::D135};

constexpr Offset offset(Direction d) {
    switch (d) {
        case Direction::D0: return {0, 1};
        case Direction::D45: return {-1, 1};
        case Direction::D90: return {-1, 0};
        case Direction::D135: return {-1, -1};
        case Direction::D180: return {0, -1};
        case Direction::D225: return {1, -1};
        case Direction::D270: return {1, 0};
        case Direction::D315: return {1, 1};
    }
    return {0, 0};
}

constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<unsigned>(d) + 4u) % 8u);
}

constexpr int degrees(Direction d) { return 45 * static_cast<int>(d); }

std::string_view to_string(Direction d);

/// Directed co-occurrence counts: counts[i * levels + j] is the number of
/// pixels with gray level i whose neighbor at offset(direction) has level j.
/// Neighbors falling outside the window are skipped.
struct Glcm {
    unsigned levels = 0;
    Direction direction = Direction::D0;
    std::vector<std::uint32_t> counts;

    std::uint32_t at(unsigned i, unsigned j) const { return counts[i * levels + j]; }
    std::uint64_t total() const;
    Glcm transposed() const;

    bool operator==(const Glcm&) const = default;
};

/// Number of in-bounds pixel pairs for a width x height window.
std::size_t pair_count(std::size_t width, std::size_t height, Direction d);

/// Adds the pair counts of `window` into `counts` (levels x levels, row-major,
/// not cleared). Throws Error when the window has no pair for the direction.
void accumulate_glcm(const QuantizedView& window, Direction d, std::span<std::uint32_t> counts);

Glcm compute_glcm(const QuantizedView& window, Direction d);
inline Glcm compute_glcm(const QuantizedImage& window, Direction d) {
    return compute_glcm(view_of(window), d);
}

/// GLCMs for D0, D45, D90, D135 in that order. Requires a window of at least 2x2.
std::array<Glcm, 4> glcm_quad(const QuantizedView& window);
inline std::array<Glcm, 4> glcm_quad(const QuantizedImage& window) {
    return glcm_quad(view_of(window));
}

/// Comma-separated dump, one matrix row per line.
std::string to_csv(const Glcm& g);

}  // namespace defectscan
