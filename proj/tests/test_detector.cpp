#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "defectscan/detector.hpp"
#include "defectscan/error.hpp"
#include "defectscan/eval.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace defectscan;

namespace {

DefectModel model_with(double threshold, FeatureVector average) {
    DefectModel m;
    m.average = average;
    m.threshold = threshold;
    m.trained_windows = 1;
    return m;
}

// Stripes everywhere, with diagonal stripes inside `blob`.
GrayImage stripes_with_diagonal_blob(const Rect& blob, std::uint64_t seed) {
    auto img = synth_texture(TextureKind::Stripes, 8, 256, 8.0, seed);
    const auto noise_src = synth_texture(TextureKind::Stripes, 8, 256, 8.0, seed + 1);
    const auto clean = synth_texture(TextureKind::Stripes, 8, 256, 0.0, 0);
    for (std::size_t y = blob.y; y < blob.y + blob.height; ++y)
        for (std::size_t x = blob.x; x < blob.x + blob.width; ++x) {
            const int noise = noise_src.at(y, x) - clean.at(y, x);
            const int base = (x + y) % 8 < 4 ? 64 : 192;
            img.at(y, x) = static_cast<std::uint8_t>(std::clamp(base + noise, 0, 255));
        }
    return img;
}

}  // namespace

TEST_CASE("classify_window uses a strict threshold") {
    const FeatureVector avg{{1, 0, 0, 0, 0, 0}};
    // distance |x - 1| / (x + 1)
    const FeatureVector near{{9.0 / 11.0, 0, 0, 0, 0, 0}};  // 0.1
    const FeatureVector far{{3.0 / 7.0, 0, 0, 0, 0, 0}};    // 0.4
    const auto m = model_with(0.3, avg);
    CHECK_FALSE(classify_window(near, m).defective);
    CHECK(classify_window(far, m).defective);
    CHECK(classify_window(far, m).distance == doctest::Approx(0.4));

    const double exact = sorensen_distance(far, avg);
    CHECK_FALSE(classify_window(far, model_with(exact, avg)).defective);

    const FeatureVector flipped{{-1, 0, 0, 0, 0, 0}};
    const auto inf = classify_window(flipped, model_with(1e300, avg));
    CHECK(inf.distance == kInfiniteDistance);
    CHECK(inf.defective);
}

TEST_CASE("detect on a training image finds nothing and is deterministic") {
    const auto img = synth_texture(TextureKind::Sinusoid, 11, 200, 12.0, 5);
    TrainConfig cfg;
    cfg.window = 25;
    const auto m = train(std::vector{img}, cfg);
    const auto map = detect(img, m);
    CHECK(map.grid == tile(200, 200, 25));
    CHECK(map.windows.size() == 64);
    CHECK(map.defective_count() == 0);
    CHECK(detect(img, m) == map);
    for (std::size_t i = 0; i < map.windows.size(); ++i) {
        CHECK(map.windows[i].row == i / 8);
        CHECK(map.windows[i].col == i % 8);
        CHECK(map.windows[i].distance <= m.threshold);
    }

    CHECK_THROWS_AS(detect(GrayImage(24, 300), m), Error);
}

TEST_CASE("diagonal-stripe blob is flagged") {
    TrainConfig cfg;  // L = 32, W = 32, ASM
    const auto train_img = synth_texture(TextureKind::Stripes, 8, 256, 8.0, 100);
    const auto m = train(std::vector{train_img}, cfg);
    const Rect blob{96, 96, 64, 64};
    const auto test_img = stripes_with_diagonal_blob(blob, 200);
    const auto map = detect(test_img, m);

    const auto ref = oracle::fit(oracle::windows(train_img.pixels, 256, 256, 32, 32));
    const auto test_windows = oracle::windows(test_img.pixels, 256, 256, 32, 32);
    REQUIRE(test_windows.size() == map.windows.size());
    for (std::size_t i = 0; i < map.windows.size(); ++i) {
        const auto& v = map.windows[i];
        const double d = oracle::sorensen(oracle::features(test_windows[i]), ref.average);
        CHECK(v.distance == doctest::Approx(d).epsilon(1e-9));
        const bool inside = v.row >= 3 && v.row <= 4 && v.col >= 3 && v.col <= 4;
        if (inside) {
            CHECK(v.defective);
            CHECK(d > ref.threshold);
        }
    }
}

TEST_CASE("raising the threshold never adds defects") {
    const auto train_img = synth_texture(TextureKind::Checker, 8, 128, 10.0, 1);
    TrainConfig cfg;
    cfg.window = 16;
    const auto m = train(std::vector{train_img}, cfg);
    const auto test = inject_defect(synth_texture(TextureKind::Checker, 8, 128, 10.0, 2), {40, 40, 50, 50},
                                    DefectKind::Blur, 0);
    const auto map = detect(test.image, m);
    std::size_t previous = map.windows.size() + 1;
    for (double t = 0.0; t <= 2.0; t += 0.01) {
        const auto n = rescore(map, t).defective_count();
        CHECK(n <= previous);
        previous = n;
    }
    CHECK(rescore(map, m.threshold) == map);
    CHECK_THROWS_AS(rescore(map, NAN), Error);
}

TEST_CASE("report document schema") {
    DefectMap map;
    map.grid = {32, 1, 2};
    map.image_width = 70;
    map.image_height = 40;
    map.threshold = 0.25;
    map.windows = {{0, 0, 0.125, false}, {0, 1, kInfiniteDistance, true}};
    const auto j = nlohmann::json::parse(report_to_json(map));
    CHECK(j["rows"] == 1);
    CHECK(j["cols"] == 2);
    CHECK(j["window"] == 32);
    CHECK(j["threshold"] == 0.25);
    REQUIRE(j["windows"].size() == 2);
    CHECK(j["windows"][0]["distance"] == 0.125);
    CHECK(j["windows"][0]["defective"] == false);
    CHECK(j["windows"][1]["distance"] == "inf");
    CHECK(j["windows"][1]["col"] == 1);
    CHECK(j["windows"][1]["defective"] == true);
}

TEST_CASE("render_overlay") {
    std::mt19937 rng(9);
    const auto img = testing::random_gray(rng, 100, 70);
    DefectMap map;
    map.grid = tile(100, 70, 32);
    map.image_width = 100;
    map.image_height = 70;
    for (std::size_t r = 0; r < map.grid.rows; ++r)
        for (std::size_t c = 0; c < map.grid.cols; ++c) map.windows.push_back({r, c, 0.0, false});

    CHECK(render_overlay(img, map) == img);

    map.windows[0].defective = true;
    const auto out = render_overlay(img, map);
    for (std::size_t y = 0; y < 70; ++y)
        for (std::size_t x = 0; x < 100; ++x) {
            if (y < 32 && x < 32) {
                const bool border = y == 0 || x == 0 || y == 31 || x == 31;
                CHECK(out.at(y, x) == (border ? 255 : (img.at(y, x) + 256) / 2));
                CHECK(out.at(y, x) >= img.at(y, x));
            } else {
                CHECK(out.at(y, x) == img.at(y, x));
            }
        }

    CHECK_THROWS_AS(render_overlay(testing::random_gray(rng, 96, 70), map), Error);
    CHECK_THROWS_AS(render_overlay(testing::random_gray(rng, 100, 64), map), Error);
}
