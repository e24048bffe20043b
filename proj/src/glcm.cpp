#include "defectscan/glcm.hpp"

#include <numeric>
#include <string>

#include "defectscan/error.hpp"

namespace defectscan {

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::D0: return "0";
        case Direction::D45: return "45";
        case Direction::D90: return "90";
        case Direction::D135: return "135";
        case Direction::D180: return "180";
        case Direction::D225: return "225";
        case Direction::D270: return "270";
        case Direction::D315: return "315";
    }
    return "?";
}

std::uint64_t Glcm::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Glcm Glcm::transposed() const {
    Glcm t{levels, opposite(direction), std::vector<std::uint32_t>(counts.size(), 0)};
    for (unsigned i = 0; i < levels; ++i) {
        for (unsigned j = 0; j < levels; ++j) {
            t.counts[j * levels + i] = counts[i * levels + j];
        }
    }
    return t;
}

std::size_t pair_count(std::size_t width, std::size_t height, Direction d) {
    const auto [dr, dc] = offset(d);
    const std::size_t rows_used = dr == 0 ? height : (height > 0 ? height - 1 : 0);
    const std::size_t cols_used = dc == 0 ? width : (width > 0 ? width - 1 : 0);
    return rows_used * cols_used;
}

void accumulate_glcm(const QuantizedView& window, Direction d, std::span<std::uint32_t> counts) {
    const std::size_t levels = window.levels;
    if (counts.size() != levels * levels) {
        throw Error("GLCM buffer size does not match levels");
    }
    if (pair_count(window.width, window.height, d) == 0) {
        throw Error("window " + std::to_string(window.width) + "x" +
                    std::to_string(window.height) + " has no pixel pair for direction " +
                    std::string(to_string(d)));
    }
    const auto [dr, dc] = offset(d);
    // Source rows/cols whose neighbor stays inside the window.
    const std::size_t r0 = dr < 0 ? 1 : 0;
    const std::size_t r1 = dr > 0 ? window.height - 1 : window.height;
    const std::size_t c0 = dc < 0 ? 1 : 0;
    const std::size_t c1 = dc > 0 ? window.width - 1 : window.width;
    const std::ptrdiff_t neighbor_shift = static_cast<std::ptrdiff_t>(dr) *
                                              static_cast<std::ptrdiff_t>(window.stride) +
                                          dc;

    std::uint32_t* out = counts.data();
    for (std::size_t r = r0; r < r1; ++r) {
        const std::uint8_t* src = window.row_ptr(r);
        const std::uint8_t* nbr = src + neighbor_shift;
        for (std::size_t c = c0; c < c1; ++c) {
            ++out[src[c] * levels + nbr[c]];
        }
    }
}

Glcm compute_glcm(const QuantizedView& window, Direction d) {
    Glcm g{window.levels, d, std::vector<std::uint32_t>(std::size_t{window.levels} * window.levels, 0)};
    accumulate_glcm(window, d, g.counts);
    return g;
}

std::array<Glcm, 4> glcm_quad(const QuantizedView& window) {
    if (window.width < 2 || window.height < 2) {
        throw Error("window must be at least 2x2 for the four-direction GLCM");
    }
    return {compute_glcm(window, Direction::D0), compute_glcm(window, Direction::D45),
            compute_glcm(window, Direction::D90), compute_glcm(window, Direction::D135)};
}

std::string to_csv(const Glcm& g) {
    std::string out;
    for (unsigned i = 0; i < g.levels; ++i) {
        for (unsigned j = 0; j < g.levels; ++j) {
            if (j != 0) {
                out += ',';
            }
            out += std::to_string(g.at(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace defectscan
