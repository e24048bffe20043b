// defectscan: train / detect / eval / synth front end.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "defectscan/detector.hpp"
#include "defectscan/error.hpp"
#include "defectscan/eval.hpp"
#include "defectscan/imaging.hpp"
#include "defectscan/io.hpp"
#include "defectscan/model.hpp"

namespace fs = std::filesystem;
using namespace defectscan;

namespace {

std::string format_rate(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

std::vector<fs::path> collect_images(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                auto ext = entry.path().extension().string();
                std::transform(ext.begin(), ext.end(), ext.begin(),
                               [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
                if (entry.is_regular_file() && (ext == ".png" || ext == ".pgm")) {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

Rect parse_rect(std::string text) {
    if (text.rfind("rect=", 0) == 0) {
        text = text.substr(5);
    }
    std::vector<std::size_t> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size() || token[0] == '-') {
            throw Error("defect region must be rect=x,y,w,h with non-negative integers");
        }
        parts.push_back(static_cast<std::size_t>(value));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (parts.size() != 4) {
        throw Error("defect region must be rect=x,y,w,h");
    }
    return {parts[0], parts[1], parts[2], parts[3]};
}

fs::path sibling(const fs::path& base, const std::string& suffix) {
    auto out = base;
    out.replace_filename(base.stem().string() + suffix + base.extension().string());
    return out;
}

// detect/eval take their configuration from the model; explicit flags must agree.
struct ModelOverrides {
    std::optional<unsigned> levels;
    std::optional<std::size_t> window;
    std::optional<std::string> mode;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--levels", levels, "Must match the model if given");
        cmd->add_option("--window", window, "Must match the model if given");
        cmd->add_option("--mode", mode, "Must match the model if given");
    }

    void check(const DefectModel& m) const {
        if (levels && *levels != m.config.levels) {
            throw Error("--levels " + std::to_string(*levels) + " contradicts model levels " +
                        std::to_string(m.config.levels));
        }
        if (window && *window != m.config.window) {
            throw Error("--window " + std::to_string(*window) + " contradicts model window " +
                        std::to_string(m.config.window));
        }
        if (mode && parse_energy_mode(*mode) != m.config.energy_mode) {
            throw Error("--mode " + *mode + " contradicts model energy mode " +
                        std::string(to_string(m.config.energy_mode)));
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Texture defect detection from directional GLCM energy differences"};
    app.require_subcommand(1);

    // train
    std::vector<std::string> train_inputs;
    std::string train_out;
    TrainConfig config;
    std::string train_mode = "asm";
    auto* train_cmd = app.add_subcommand("train", "Fit a model on defect-free images");
    train_cmd->add_option("--input", train_inputs, "Training images or directories")->required();
    train_cmd->add_option("--out", train_out, "Model file to write")->required();
    train_cmd->add_option("--levels", config.levels, "Gray levels after quantization")
        ->capture_default_str();
    train_cmd->add_option("--window", config.window, "Window side in pixels")->capture_default_str();
    train_cmd->add_option("--mode", train_mode, "Energy mode: asm | histogram")
        ->capture_default_str();
    train_cmd->add_option("--margin", config.threshold_margin, "Threshold multiplier (>= 1)")
        ->capture_default_str();

    // detect
    std::string detect_model;
    std::string detect_image;
    std::string detect_report;
    std::string detect_overlay;
    ModelOverrides detect_overrides;
    auto* detect_cmd = app.add_subcommand("detect", "Classify the windows of one image");
    detect_cmd->add_option("--model", detect_model, "Model file")->required();
    detect_cmd->add_option("--image", detect_image, "Image to inspect")->required();
    detect_cmd->add_option("--report", detect_report, "Report file to write")->required();
    detect_cmd->add_option("--overlay", detect_overlay, "Optional PNG with defects highlighted");
    detect_overrides.add_to(detect_cmd);

    // eval
    std::string eval_model;
    std::vector<std::string> eval_images;
    std::vector<std::string> eval_masks;
    double coverage = kDefaultCoverage;
    ModelOverrides eval_overrides;
    auto* eval_cmd = app.add_subcommand("eval", "Detection rate against ground-truth masks");
    eval_cmd->add_option("--model", eval_model, "Model file")->required();
    eval_cmd->add_option("--image", eval_images, "Test image (repeatable)")->required();
    eval_cmd->add_option("--mask", eval_masks, "Mask per image, 0 healthy / 255 defect")
        ->required();
    eval_cmd->add_option("--coverage", coverage, "Mask fraction that makes a window defective")
        ->capture_default_str();
    eval_overrides.add_to(eval_cmd);

    // synth
    std::string texture = "stripes";
    std::size_t period = 8;
    std::size_t size = 256;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string synth_out;
    std::string defect_spec;
    std::string defect_kind = "rotate90";
    std::string defect_out;
    std::string mask_out;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic texture");
    synth_cmd->add_option("--texture", texture, "stripes | checker | sinusoid")
        ->capture_default_str();
    synth_cmd->add_option("--period", period, "Pattern period in pixels")->capture_default_str();
    synth_cmd->add_option("--size", size, "Image side in pixels")->capture_default_str();
    synth_cmd->add_option("--noise", noise, "Gaussian noise sigma")->capture_default_str();
    synth_cmd->add_option("--seed", seed, "Noise / defect seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Texture file to write")->required();
    synth_cmd->add_option("--defect", defect_spec, "Inject a defect: rect=x,y,w,h");
    synth_cmd->add_option("--kind", defect_kind, "rotate90 | blur | level-shift")
        ->capture_default_str();
    synth_cmd->add_option("--defect-out", defect_out, "Defected image (default <out>_defect)");
    synth_cmd->add_option("--mask-out", mask_out, "Defect mask (default <out>_mask)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            config.energy_mode = parse_energy_mode(train_mode);
            config.validate();
            const auto paths = collect_images(train_inputs);
            if (paths.empty()) {
                throw Error("no training images");
            }
            std::vector<GrayImage> images;
            images.reserve(paths.size());
            for (const auto& p : paths) {
                images.push_back(load_image(p));
            }
            const auto model = train(images, config);
            save_model(model, train_out);
            std::printf("trained_windows=%zu threshold=%.17g\n", model.trained_windows,
                        model.threshold);
        } else if (*detect_cmd) {
            const auto model = load_model(detect_model);
            detect_overrides.check(model);
            const auto img = load_image(detect_image);
            const auto map = detect(img, model);
            write_file_atomic(detect_report, report_to_json(map));
            if (!detect_overlay.empty()) {
                write_file_atomic(detect_overlay, encode_png(render_overlay(img, map)));
            }
            std::printf("defective_windows=%zu total_windows=%zu\n", map.defective_count(),
                        map.windows.size());
        } else if (*eval_cmd) {
            if (eval_images.size() != eval_masks.size()) {
                throw Error("every --image needs exactly one --mask");
            }
            const auto model = load_model(eval_model);
            eval_overrides.check(model);
            std::vector<DetectionCounts> runs;
            for (std::size_t i = 0; i < eval_images.size(); ++i) {
                const auto map = detect(load_image(eval_images[i]), model);
                const auto gt = mask_to_ground_truth(load_image(eval_masks[i]),
                                                     model.config.window, coverage);
                runs.push_back(count_detections(map, gt));
                if (eval_images.size() > 1) {
                    std::printf("%s DR=%s\n", eval_images[i].c_str(),
                                format_rate(detection_rate(runs.back())).c_str());
                }
            }
            std::printf("DR=%s\n", format_rate(pooled_detection_rate(runs)).c_str());
            if (runs.size() > 1) {
                std::printf("DR_macro=%s\n", format_rate(macro_detection_rate(runs)).c_str());
            }
        } else if (*synth_cmd) {
            const auto img = synth_texture(parse_texture_kind(texture), period, size, noise, seed);
            const fs::path out(synth_out);
            if (!defect_spec.empty()) {
                const auto defected =
                    inject_defect(img, parse_rect(defect_spec), parse_defect_kind(defect_kind), seed);
                save_image(img, out);
                save_image(defected.image, defect_out.empty() ? sibling(out, "_defect") : fs::path(defect_out));
                save_image(defected.mask, mask_out.empty() ? sibling(out, "_mask") : fs::path(mask_out));
            } else {
                save_image(img, out);
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
