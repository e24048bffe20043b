#include "defectscan/model.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "defectscan/error.hpp"
#include "defectscan/io.hpp"

namespace defectscan {

using Json = nlohmann::ordered_json;

namespace {

void require_finite(const FeatureVector& v, const char* what) {
    for (double x : v.f) {
        if (!std::isfinite(x)) {
            throw Error(std::string("non-finite component in ") + what);
        }
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (levels < 2 || levels > 256) {
        throw Error("levels must be in [2, 256], got " + std::to_string(levels));
    }
    if (window < 2) {
        throw Error("window must be at least 2, got " + std::to_string(window));
    }
    if (!std::isfinite(threshold_margin) || threshold_margin < 1.0) {
        throw Error("threshold margin must be a finite value >= 1");
    }
}

void DefectModel::validate() const {
    config.validate();
    require_finite(average, "model average");
    if (!std::isfinite(threshold) || threshold < 0.0) {
        throw Error("model threshold must be finite and >= 0");
    }
    if (trained_windows < 1) {
        throw Error("model must be trained on at least one window");
    }
}

FeatureVector average_vector(std::span<const FeatureVector> vectors) {
    if (vectors.empty()) {
        throw Error("cannot average an empty list of feature vectors");
    }
    FeatureVector sum;
    for (const auto& v : vectors) {
        for (std::size_t d = 0; d < kFeatureDims; ++d) {
            sum[d] += v[d];
        }
    }
    const double k = static_cast<double>(vectors.size());
    for (auto& x : sum.f) {
        x /= k;
    }
    return sum;
}

double sorensen_distance(const FeatureVector& f, const FeatureVector& g) {
    require_finite(f, "distance argument");
    require_finite(g, "distance argument");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t d = 0; d < kFeatureDims; ++d) {
        num += std::abs(f[d] - g[d]);
        den += std::abs(f[d] + g[d]);
    }
    if (den < kDistanceEpsilon) {
        return num < kDistanceEpsilon ? 0.0 : kInfiniteDistance;
    }
    return num / den;
}

double compute_threshold(std::span<const FeatureVector> vectors, const FeatureVector& average,
                         double margin) {
    if (vectors.empty()) {
        throw Error("cannot compute a threshold from an empty list");
    }
    if (!std::isfinite(margin) || margin < 1.0) {
        throw Error("threshold margin must be a finite value >= 1");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const double d = sorensen_distance(vectors[i], average);
        if (std::isinf(d)) {
            throw Error("training window " + std::to_string(i) +
                        " has infinite distance to the mean; training data is inconsistent");
        }
        worst = std::max(worst, d);
    }
    return margin * worst;
}

DefectModel train(std::span<const GrayImage> images, const TrainConfig& config) {
    config.validate();
    if (images.empty()) {
        throw Error("no training images");
    }
    std::vector<FeatureVector> pooled;
    for (const auto& img : images) {
        auto gf = grid_features(img, config.levels, config.window, config.energy_mode);
        pooled.insert(pooled.end(), gf.features.begin(), gf.features.end());
    }
    if (pooled.empty()) {
        throw Error("training produced no windows");
    }
    DefectModel m;
    m.config = config;
    m.average = average_vector(pooled);
    m.threshold = compute_threshold(pooled, m.average, config.threshold_margin);
    m.trained_windows = pooled.size();
    return m;
}

std::string model_to_json(const DefectModel& m) {
    m.validate();
    Json j;
    j["version"] = kModelVersion;
    j["levels"] = m.config.levels;
    j["window"] = m.config.window;
    j["energy_mode"] = std::string(to_string(m.config.energy_mode));
    j["margin"] = m.config.threshold_margin;
    j["average"] = m.average.f;
    j["threshold"] = m.threshold;
    j["trained_windows"] = m.trained_windows;
    return j.dump(2) + "\n";
}

DefectModel model_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error("malformed model file: top level must be an object");
    }
    static const std::set<std::string> known = {"version", "levels",    "window",
                                                "energy_mode", "margin", "average",
                                                "threshold", "trained_windows"};
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) {
            throw Error("malformed model file: unknown key \"" + key + "\"");
        }
    }
    for (const auto& key : known) {
        if (!j.contains(key)) {
            throw Error("malformed model file: missing key \"" + key + "\"");
        }
    }

    auto integer = [&](const char* key) -> std::int64_t {
        const auto& v = j.at(key);
        if (!v.is_number_integer()) {
            throw Error(std::string("malformed model file: \"") + key + "\" must be an integer");
        }
        return v.get<std::int64_t>();
    };
    auto real = [](const Json& v, const std::string& key) -> double {
        // NaN/Infinity are not JSON numbers, so they arrive as strings or nulls.
        if (!v.is_number()) {
            throw Error("malformed model file: \"" + key + "\" must be a finite number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            throw Error("malformed model file: \"" + key + "\" must be a finite number");
        }
        return x;
    };

    if (integer("version") != kModelVersion) {
        throw Error("unsupported model version " + std::to_string(integer("version")));
    }
    const auto levels = integer("levels");
    const auto window = integer("window");
    const auto trained = integer("trained_windows");
    if (levels < 2 || levels > 256 || window < 2 || trained < 1) {
        throw Error("malformed model file: levels/window/trained_windows out of range");
    }
    if (!j.at("energy_mode").is_string()) {
        throw Error("malformed model file: \"energy_mode\" must be a string");
    }
    const auto& avg = j.at("average");
    if (!avg.is_array() || avg.size() != kFeatureDims) {
        throw Error("malformed model file: \"average\" must hold 6 numbers");
    }

    DefectModel m;
    m.config.levels = static_cast<unsigned>(levels);
    m.config.window = static_cast<std::size_t>(window);
    m.config.energy_mode = parse_energy_mode(j.at("energy_mode").get<std::string>());
    m.config.threshold_margin = real(j.at("margin"), "margin");
    for (std::size_t d = 0; d < kFeatureDims; ++d) {
        m.average[d] = real(avg[d], "average");
    }
    m.threshold = real(j.at("threshold"), "threshold");
    m.trained_windows = static_cast<std::size_t>(trained);
    m.validate();
    return m;
}

void save_model(const DefectModel& m, const std::filesystem::path& path) {
    write_file_atomic(path, model_to_json(m));
}

DefectModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_file(path));
}

}  // namespace defectscan
