#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thsmooth/pipeline.hpp"

using namespace thsmooth;

TEST_CASE("preset names round-trip") {
    for (Preset p : all_presets()) CHECK(preset_from_name(preset_name(p)) == p);
    CHECK(all_presets().size() == 7);
    CHECK_THROWS_AS((void)preset_from_name("group5"), PresetError);
}

TEST_CASE("preset regimes resolve to their documented parameters") {
    const double eps = 1e-7;
    SUBCASE("tv_approx") {
        const auto s = preset(Preset::tv_approx);
        CHECK(s.a_d == s.b_d);
        CHECK(s.a_d > 1.0);
        CHECK(s.a_s == eps);
        CHECK(s.b_s > 1.0);
        CHECK(s.alpha == 0.0);
        CHECK(s.r_d == 0);
        CHECK(s.r_s == 1);
    }
    SUBCASE("wls_like") {
        const auto s = preset(Preset::wls_like);
        CHECK(s.alpha == 0.2);
        CHECK(s.n_iters == 1);
    }
    SUBCASE("tvl1_like") {
        const auto s = preset(Preset::tvl1_like);
        CHECK(s.a_d == eps);
        CHECK(s.b_d > 1.0);
        CHECK(s.alpha == 0.0);
    }
    SUBCASE("group1_detail") {
        const auto s = preset(Preset::group1_detail, {.lambda = 30.0, .radius = 3});
        CHECK(s.r_d == 3);
        CHECK(s.r_s == 3);
        CHECK(s.alpha == 0.2);
        CHECK(s.n_iters == 1);
        CHECK(s.lambda == 30.0);
        CHECK(s.b_s > 1.0);
    }
    SUBCASE("group2 and group3") {
        for (Preset p : {Preset::group2_sharpen, Preset::group3_guided}) {
            const auto s = preset(p, {.b = 0.15});
            CHECK(s.b_d == 0.15);
            CHECK(s.b_s == 0.15);
            CHECK(s.a_d == eps);
            CHECK(s.alpha == 0.5);
            CHECK(s.n_iters == 10);
            CHECK(s.r_d == s.r_s);
        }
        CHECK_FALSE(preset_uses_self_guidance(Preset::group3_guided));
        CHECK(preset_uses_self_guidance(Preset::group2_sharpen));
    }
    SUBCASE("group4_texture") {
        const auto s = preset(Preset::group4_texture);
        CHECK(s.b_d > 1.0);
        CHECK(s.alpha == 0.5);
        CHECK(s.n_iters == 10);
        CHECK(s.lambda <= 1.0);
    }
}

TEST_CASE("presets reject knobs their regime fixes") {
    CHECK_THROWS_AS((void)preset(Preset::tv_approx, {.alpha = 0.3}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::group4_texture, {.b = 0.1}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::group4_texture, {.radius = 4}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::group2_sharpen, {.b = 0.3}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::group2_sharpen, {.n_iters = 3}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::wls_like, {.n_iters = 2}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::group1_detail, {.radius = 0}), PresetError);
    CHECK_THROWS_AS((void)preset(Preset::group1_detail, {.lambda = -1.0}), PresetError);
    CHECK(preset(Preset::tv_approx, {.n_iters = 3}).n_iters == 3);
}

TEST_CASE("constant image is a fixed point for every preset") {
    ImageGrid f(6, 7, 3);
    for (double& v : f.data()) v = 0.37;
    for (Preset p : all_presets()) {
        const auto r = smooth(f, f, preset(p));
        for (std::size_t i = 0; i < f.data().size(); ++i) {
            CHECK(r.u.data()[i] == doctest::Approx(0.37).epsilon(1e-8));
        }
    }
}

TEST_CASE("zero iterations return the input") {
    std::mt19937_64 rng(1);
    const ImageGrid f = oracle::random_image(rng, 5, 5);
    SmoothingParams p;
    p.n_iters = 0;
    CHECK(smooth(f, f, p).u == f);
}

// Flipping reorders the floating-point sums, and ten non-convex iterations
// amplify the rounding a little, so equality holds to 1e-3 rather than 1e-6.
TEST_CASE("horizontal flip commutes with smoothing") {
    std::mt19937_64 rng(2);
    const ImageGrid f = oracle::patchy_image(rng, 10, 12, 3);
    ImageGrid flipped = f;
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            for (int c = 0; c < 3; ++c) flipped.at(y, x, c) = f.at(y, f.width() - 1 - x, c);
    const auto p = preset(Preset::group2_sharpen, {.lambda = 2.0});
    const auto a = smooth(f, f, p).u;
    const auto b = smooth(flipped, flipped, p).u;
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            for (int c = 0; c < 3; ++c)
                CHECK(std::abs(b.at(y, x, c) - a.at(y, f.width() - 1 - x, c)) < 1e-3);
}

TEST_CASE("audit leaves the output bit-identical and records a descending chain") {
    std::mt19937_64 rng(3);
    const ImageGrid f = oracle::patchy_image(rng, 12, 12, 3);
    for (Preset p : {Preset::group2_sharpen, Preset::group4_texture, Preset::tvl1_like}) {
        SmoothOptions audit;
        audit.audit = true;
        const auto plain = smooth(f, f, preset(p));
        const auto checked = smooth(f, f, preset(p), audit);
        CHECK(plain.u == checked.u);
        CHECK(plain.reports.empty());
        REQUIRE(checked.reports.size() == static_cast<std::size_t>(preset(p).n_iters) + 1);
        for (std::size_t k = 0; k < checked.reports.size(); ++k) {
            const auto& r = checked.reports[k];
            CHECK(r.iteration == static_cast<int>(k));
            CHECK(r.e_ul == doctest::Approx(r.e_u).epsilon(1e-8));
            CHECK(r.e_ulmu == doctest::Approx(r.e_u).epsilon(1e-8));
            if (k > 0) CHECK(r.e_u <= checked.reports[k - 1].e_u + 1e-10);
        }
    }
}

TEST_CASE("guided smoothing with a separate guide") {
    std::mt19937_64 rng(4);
    const ImageGrid f = oracle::patchy_image(rng, 10, 10);
    const ImageGrid g = oracle::patchy_image(rng, 10, 10, 3);
    const auto r = smooth(f, g, preset(Preset::group3_guided, {.radius = 1}));
    CHECK(r.u.channels() == 1);
    CHECK(r.solves.size() == 10);
    const ImageGrid wrong(9, 10, 3);
    CHECK_THROWS_AS((void)smooth(f, wrong, preset(Preset::group3_guided)), ContractError);
}

TEST_CASE("hooks see every iteration and channel") {
    std::mt19937_64 rng(5);
    const ImageGrid f = oracle::random_image(rng, 6, 6, 3);
    int aux_calls = 0;
    int sys_calls = 0;
    SmoothOptions o;
    o.on_aux = [&](int, int, const AuxFields&) { ++aux_calls; };
    o.on_system = [&](int, int, const SparseSystem&) { ++sys_calls; };
    (void)smooth(f, f, preset(Preset::group4_texture), o);
    CHECK(aux_calls == 30);
    CHECK(sys_calls == 30);
}

TEST_CASE("b above the range keeps every outlier absorber at zero") {
    std::mt19937_64 rng(6);
    const ImageGrid f = oracle::patchy_image(rng, 10, 10);
    SmoothOptions o;
    bool all_zero = true;
    o.on_aux = [&](int, int, const AuxFields& aux) {
        for (double l : aux.l_d) all_zero = all_zero && l == 0.0;
        for (double l : aux.l_s) all_zero = all_zero && l == 0.0;
    };
    (void)smooth(f, f, preset(Preset::group4_texture, {.lambda = 1.0}), o);
    CHECK(all_zero);
}

TEST_CASE("a = b never takes the linear branch") {
    std::mt19937_64 rng(7);
    const ImageGrid f = oracle::patchy_image(rng, 10, 10);
    for (double ab : {10.0, 0.1}) {
        SmoothingParams p;
        p.a_d = p.b_d = p.a_s = p.b_s = ab;
        p.r_d = 1;
        p.n_iters = 3;
        set_branch_counting(true);
        reset_branch_counters();
        SmoothOptions o;
        o.audit = true;
        (void)smooth(f, f, p, o);
        const auto c = branch_counters();
        set_branch_counting(false);
        CHECK(c.huber_linear == 0);
        CHECK(c.mu_linear == 0);
    }
}
