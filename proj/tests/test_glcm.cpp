#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "defectscan/error.hpp"
#include "defectscan/glcm.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace defectscan;

namespace {

bool matches_oracle(const Glcm& g, const oracle::PairCounts& ref) {
    std::uint64_t seen = 0;
    for (const auto& [key, count] : ref) {
        if (g.at(static_cast<unsigned>(key.first), static_cast<unsigned>(key.second)) !=
            static_cast<std::uint32_t>(count)) {
            return false;
        }
        seen += static_cast<std::uint64_t>(count);
    }
    return g.total() == seen;
}

}  // namespace

TEST_CASE("direction offsets") {
    CHECK(offset(Direction::D0) == Offset{0, 1});
    CHECK(offset(Direction::D45) == Offset{-1, 1});
    CHECK(offset(Direction::D90) == Offset{-1, 0});
    CHECK(offset(Direction::D135) == Offset{-1, -1});
    CHECK(offset(Direction::D315) == Offset{1, 1});
    for (auto d : kAllDirections) {
        const auto a = offset(d);
        const auto b = offset(opposite(d));
        CHECK(a.drow == -b.drow);
        CHECK(a.dcol == -b.dcol);
        const auto [odr, odc] = oracle::step(degrees(d));
        CHECK(a.drow == odr);
        CHECK(a.dcol == odc);
    }
}

TEST_CASE("compute_glcm small examples") {
    const QuantizedImage zeros(2, 2, 2, {0, 0, 0, 0});
    const auto g = compute_glcm(zeros, Direction::D0);
    CHECK(g.at(0, 0) == 2);
    CHECK(g.total() == 2);

    const QuantizedImage img(3, 3, 3, {0, 0, 1, 1, 2, 2, 0, 1, 2});
    const auto h = compute_glcm(img, Direction::D0);
    CHECK(h.at(0, 0) == 1);
    CHECK(h.at(0, 1) == 2);
    CHECK(h.at(1, 2) == 2);
    CHECK(h.at(2, 2) == 1);
    CHECK(h.total() == 6);
    CHECK(matches_oracle(h, oracle::glcm(testing::to_oracle(img), 0)));

    CHECK(compute_glcm(img, Direction::D180) == h.transposed());
}

TEST_CASE("glcm_quad totals and preconditions") {
    const QuantizedImage zeros(2, 2, 2, {0, 0, 0, 0});
    const auto quad = glcm_quad(zeros);
    CHECK(quad[0].total() == 2);
    CHECK(quad[1].total() == 1);
    CHECK(quad[2].total() == 2);
    CHECK(quad[3].total() == 1);
    CHECK(quad[1].direction == Direction::D45);

    const QuantizedImage row(5, 1, 4, {0, 1, 2, 3, 0});
    CHECK(compute_glcm(row, Direction::D0).total() == 4);
    CHECK(compute_glcm(row, Direction::D180).total() == 4);
    CHECK_THROWS_AS(compute_glcm(row, Direction::D90), Error);
    CHECK_THROWS_AS(compute_glcm(row, Direction::D45), Error);
    CHECK_THROWS_AS(glcm_quad(row), Error);

    const QuantizedImage single(1, 1, 2, {1});
    for (auto d : kAllDirections) {
        CHECK_THROWS_AS(compute_glcm(single, d), Error);
    }
}

TEST_CASE("glcm matches naive enumeration, conserves mass, obeys the transpose law") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const auto ref = oracle::random_image(rng, 16, 8, 2);
        const auto q = testing::to_quantized(ref);
        for (auto d : kAllDirections) {
            const auto g = compute_glcm(q, d);
            CHECK(matches_oracle(g, oracle::glcm(ref, degrees(d))));
            CHECK(g.total() == pair_count(q.width, q.height, d));
            CHECK(compute_glcm(q, opposite(d)) == g.transposed());
        }
        CHECK(compute_glcm(q, Direction::D0).total() == q.height * (q.width - 1));
        CHECK(compute_glcm(q, Direction::D90).total() == (q.height - 1) * q.width);
        CHECK(compute_glcm(q, Direction::D45).total() == (q.height - 1) * (q.width - 1));
    }
}

TEST_CASE("glcm on a strided window view") {
    std::mt19937 rng(3);
    const auto q = quantize(testing::random_gray(rng, 20, 12), 8);
    const auto grid = tile(q, 5);
    const auto view = window_at(q, grid, 1, 2);
    oracle::Image ref{5, 5, 8, {}};
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 5; ++c) ref.px.push_back(q.at(5 + r, 10 + c));
    for (auto d : kAllDirections) {
        CHECK(matches_oracle(compute_glcm(view, d), oracle::glcm(ref, degrees(d))));
    }
}

TEST_CASE("relabeling gray levels permutes rows and columns") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ref = oracle::random_image(rng, 12, 8, 2);
        std::vector<int> perm(static_cast<std::size_t>(ref.levels));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto relabeled = ref;
        for (auto& p : relabeled.px) p = perm[static_cast<std::size_t>(p)];
        const auto a = testing::to_quantized(ref);
        const auto b = testing::to_quantized(relabeled);
        for (auto d : kAllDirections) {
            const auto ga = compute_glcm(a, d);
            const auto gb = compute_glcm(b, d);
            for (unsigned i = 0; i < a.levels; ++i)
                for (unsigned j = 0; j < a.levels; ++j)
                    CHECK(gb.at(static_cast<unsigned>(perm[i]), static_cast<unsigned>(perm[j])) == ga.at(i, j));
        }
    }
}

TEST_CASE("csv dump") {
    const QuantizedImage img(3, 3, 3, {0, 0, 1, 1, 2, 2, 0, 1, 2});
    CHECK(to_csv(compute_glcm(img, Direction::D0)) == "1,2,0\n0,0,2\n0,0,1\n");
}
