#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "thsmooth/guidance.hpp"

using namespace thsmooth;

TEST_CASE("guidance distance") {
    ImageGrid gray(1, 2, 1, {0.2, 0.7});
    CHECK(guidance_distance(gray, 0, 1) == doctest::Approx(0.5));
    ImageGrid rgb(1, 2, 3, {0.0, 0.0, 0.0, 0.3, 0.6, 0.9});
    CHECK(guidance_distance(rgb, 0, 1) == doctest::Approx(0.6));
    CHECK(guidance_distance(rgb, 1, 1) == 0.0);
    CHECK_THROWS_AS((void)guidance_distance(gray, 0, 2), ContractError);
}

TEST_CASE("guidance weight") {
    CHECK(guidance_weight(0.0, 0.0, 1e-7) == 1.0);
    CHECK(guidance_weight(0.25, 0.5, 0.0) == doctest::Approx(2.0));
    CHECK(guidance_weight(0.0, 0.5, 1e-6) == doctest::Approx(1000.0));
    CHECK(guidance_weight(0.5, 0.2, 1e-7) > guidance_weight(0.6, 0.2, 1e-7));
}

TEST_CASE("weight field matches a direct evaluation and is symmetric") {
    std::mt19937_64 rng(3);
    const ImageGrid g = oracle::random_image(rng, 6, 7, 3);
    SmoothingParams p;
    p.alpha = 0.5;
    p.r_s = 2;
    const WeightField w = build_weight_field(g, p);
    CHECK(w.offset_count() == 24);
    const Extent e = g.extent();
    for (int y = 0; y < e.height; ++y) {
        for (int x = 0; x < e.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
            for (std::size_t k = 0; k < w.offset_count(); ++k) {
                const auto j = neighbor_index(y, x, w.offsets()[k], e);
                if (j < 0) {
                    CHECK(w.weight(i, k) == 0.0);
                    continue;
                }
                const auto jj = static_cast<std::size_t>(j);
                double d = 0.0;
                for (int c = 0; c < 3; ++c) d += std::abs(g.data()[i * 3 + c] - g.data()[jj * 3 + c]);
                CHECK(w.weight(i, k) == doctest::Approx(std::pow(d / 3.0 + p.delta, -0.5)));
                CHECK(w.weight(i, k) == w.weight(jj, w.offsets().mirror(k)));
            }
        }
    }
}

TEST_CASE("alpha zero gives unit weights") {
    std::mt19937_64 rng(5);
    const ImageGrid g = oracle::random_image(rng, 4, 4);
    SmoothingParams p;
    const WeightField w = build_weight_field(g, p);
    for (std::size_t i = 0; i < g.pixels(); ++i) {
        for (std::size_t k = 0; k < w.offset_count(); ++k) {
            const double v = w.weight(i, k);
            CHECK((v == 0.0 || v == 1.0));
        }
    }
}

TEST_CASE("guide extent must match") {
    ImageGrid g(4, 4, 1);
    CHECK_THROWS_AS((void)build_weight_field(g, SmoothingParams{}, Extent{4, 5}), ContractError);
    CHECK_THROWS_AS(WeightField(Extent{2, 2}, 1, 0.0, 1e-7, std::vector<double>(3)), ContractError);
}
