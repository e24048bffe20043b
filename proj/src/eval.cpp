#include "defectscan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "defectscan/error.hpp"

namespace defectscan {

namespace {

// Box-Muller over mt19937_64 so textures are identical across standard libraries.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint8_t clamp_pixel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

GroundTruth mask_to_ground_truth(const GrayImage& mask, std::size_t window, double coverage) {
    if (!(coverage > 0.0 && coverage <= 1.0)) {
        throw Error("coverage must lie in (0, 1]");
    }
    for (auto p : mask.pixels) {
        if (p != 0 && p != 255) {
            throw Error("mask values must be 0 or 255, found " + std::to_string(p));
        }
    }
    GroundTruth gt{tile(mask.width, mask.height, window), {}};
    gt.defective.resize(gt.grid.size());
    const double needed = coverage * static_cast<double>(window * window);
    for (std::size_t r = 0; r < gt.grid.rows; ++r) {
        for (std::size_t c = 0; c < gt.grid.cols; ++c) {
            std::size_t positive = 0;
            for (std::size_t y = r * window; y < (r + 1) * window; ++y) {
                for (std::size_t x = c * window; x < (c + 1) * window; ++x) {
                    positive += mask.at(y, x) == 255 ? 1 : 0;
                }
            }
            gt.defective[r * gt.grid.cols + c] = static_cast<double>(positive) >= needed;
        }
    }
    return gt;
}

DetectionCounts count_detections(const DefectMap& map, const GroundTruth& gt) {
    if (map.grid != gt.grid || map.windows.size() != gt.defective.size()) {
        throw Error("ground truth grid does not match the defect map");
    }
    DetectionCounts counts;
    counts.n_total = map.windows.size();
    for (std::size_t i = 0; i < map.windows.size(); ++i) {
        const bool predicted = map.windows[i].defective;
        const bool truth = gt.defective[i];
        if (!truth && !predicted) {
            ++counts.n_c;
        } else if (truth && predicted) {
            ++counts.n_d;
        } else if (predicted) {
            ++counts.false_alarms;
        } else {
            ++counts.misses;
        }
    }
    return counts;
}

double detection_rate(const DetectionCounts& counts) {
    if (counts.n_total == 0) {
        throw Error("detection rate over zero windows");
    }
    if (counts.n_c + counts.n_d > counts.n_total) {
        throw Error("inconsistent detection counts");
    }
    return 100.0 * static_cast<double>(counts.n_c + counts.n_d) /
           static_cast<double>(counts.n_total);
}

double detection_rate(const DefectMap& map, const GroundTruth& gt) {
    return detection_rate(count_detections(map, gt));
}

double pooled_detection_rate(std::span<const DetectionCounts> runs) {
    DetectionCounts sum;
    for (const auto& r : runs) {
        sum.n_c += r.n_c;
        sum.n_d += r.n_d;
        sum.n_total += r.n_total;
    }
    return detection_rate(sum);
}

double macro_detection_rate(std::span<const DetectionCounts> runs) {
    if (runs.empty()) {
        throw Error("macro detection rate over zero runs");
    }
    double sum = 0.0;
    for (const auto& r : runs) {
        sum += detection_rate(r);
    }
    return sum / static_cast<double>(runs.size());
}

TextureKind parse_texture_kind(std::string_view text) {
    if (text == "stripes") return TextureKind::Stripes;
    if (text == "checker") return TextureKind::Checker;
    if (text == "sinusoid") return TextureKind::Sinusoid;
    throw Error("unknown texture kind: " + std::string(text));
}

std::string_view to_string(TextureKind kind) {
    switch (kind) {
        case TextureKind::Stripes: return "stripes";
        case TextureKind::Checker: return "checker";
        case TextureKind::Sinusoid: return "sinusoid";
    }
    return "?";
}

GrayImage synth_texture(TextureKind kind, std::size_t period, std::size_t size, double noise,
                        std::uint64_t seed) {
    if (period < 2) {
        throw Error("period must be at least 2");
    }
    if (size < period) {
        throw Error("size must be at least the period");
    }
    if (!std::isfinite(noise) || noise < 0.0) {
        throw Error("noise must be finite and >= 0");
    }
    GrayImage img(size, size);
    GaussianSource gauss(seed);
    const std::size_t band = period - period / 2;
    const std::size_t cell = std::max<std::size_t>(1, period / 2);
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            double v = 0.0;
            switch (kind) {
                case TextureKind::Stripes:
                    v = (x % period) < band ? 64.0 : 192.0;
                    break;
                case TextureKind::Checker:
                    v = ((x / cell + y / cell) % 2 == 0) ? 64.0 : 192.0;
                    break;
                case TextureKind::Sinusoid:
                    v = 128.0 + 100.0 * std::sin(2.0 * std::numbers::pi *
                                                 static_cast<double>(x + y) /
                                                 static_cast<double>(period));
                    break;
            }
            if (noise > 0.0) {
                v += noise * gauss.next();
            }
            img.at(y, x) = clamp_pixel(v);
        }
    }
    return img;
}

DefectKind parse_defect_kind(std::string_view text) {
    if (text == "rotate90") return DefectKind::Rotate90;
    if (text == "blur") return DefectKind::Blur;
    if (text == "level-shift") return DefectKind::LevelShift;
    throw Error("unknown defect kind: " + std::string(text));
}

std::string_view to_string(DefectKind kind) {
    switch (kind) {
        case DefectKind::Rotate90: return "rotate90";
        case DefectKind::Blur: return "blur";
        case DefectKind::LevelShift: return "level-shift";
    }
    return "?";
}

DefectedImage inject_defect(const GrayImage& img, const Rect& region, DefectKind kind,
                            std::uint64_t seed) {
    if (region.x > img.width || region.y > img.height || region.width > img.width - region.x ||
        region.height > img.height - region.y) {
        throw Error("defect region out of bounds");
    }
    DefectedImage out{img, GrayImage(img.width, img.height)};
    if (region.area() == 0) {
        return out;
    }
    const std::size_t h = region.height;
    const std::size_t w = region.width;

    int shift = 0;
    if (kind == DefectKind::LevelShift) {
        std::mt19937_64 engine(seed);
        shift = 32 + static_cast<int>(engine() % 33);
        if ((engine() & 1u) != 0) {
            shift = -shift;
        }
    }

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t row = region.y + r;
            const std::size_t col = region.x + c;
            std::uint8_t value = 0;
            switch (kind) {
                case DefectKind::Rotate90:
                    value = img.at(region.y + (h - 1 - c % h), region.x + r % w);
                    break;
                case DefectKind::Blur: {
                    unsigned sum = 0;
                    for (int dy = -2; dy <= 2; ++dy) {
                        for (int dx = -2; dx <= 2; ++dx) {
                            const auto yy = std::clamp<std::ptrdiff_t>(
                                static_cast<std::ptrdiff_t>(row) + dy, 0,
                                static_cast<std::ptrdiff_t>(img.height) - 1);
                            const auto xx = std::clamp<std::ptrdiff_t>(
                                static_cast<std::ptrdiff_t>(col) + dx, 0,
                                static_cast<std::ptrdiff_t>(img.width) - 1);
                            sum += img.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
                        }
                    }
                    value = static_cast<std::uint8_t>((sum + 12) / 25);
                    break;
                }
                case DefectKind::LevelShift:
                    value = clamp_pixel(static_cast<double>(img.at(row, col)) + shift);
                    break;
            }
            out.image.at(row, col) = value;
            out.mask.at(row, col) = 255;
        }
    }
    return out;
}

}  // namespace defectscan
