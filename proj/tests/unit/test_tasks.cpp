#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "thsmooth/tasks.hpp"

using namespace thsmooth;

namespace {

double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_CASE("detail enhancement recombination") {
    std::mt19937_64 rng(1);
    const ImageGrid f = oracle::patchy_image(rng, 16, 16, 3);
    CHECK(max_abs_diff(enhance_detail(f, 20.0, 1.0), f) < 1e-6);
    const ImageGrid base = enhance_detail(f, 20.0, 0.0);
    ImageGrid ref = smooth(f, f, preset(Preset::group1_detail, {.lambda = 20.0})).u;
    ref.clamp();
    CHECK(max_abs_diff(base, ref) == 0.0);
    const ImageGrid boosted = enhance_detail(f, 20.0, 3.0);
    for (double v : boosted.data()) CHECK((v >= 0.0 && v <= 1.0));
    CHECK_THROWS_AS((void)enhance_detail(f, 20.0, -1.0), ContractError);
}

TEST_CASE("clip-art cleanup leaves clean art alone and flattens ringing") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const SyntheticClipart ca = make_synthetic_clipart(seed);
        CHECK(max_abs_diff(remove_clipart_artifacts(ca.clean, 0.2, 1, 1.0), ca.clean) < 0.01);
        const ImageGrid out = remove_clipart_artifacts(ca.degraded, 0.2, 1, 1.0);
        const RegionStats in = region_stats(ca.degraded, ca.region, ca.region_count, 2);
        const RegionStats after = region_stats(out, ca.region, ca.region_count, 2);
        const RegionStats clean = region_stats(ca.clean, ca.region, ca.region_count, 2);
        for (int k = 0; k < ca.region_count; ++k) {
            if (in.pixels[k] == 0) continue;
            CHECK(in.variance[k] >= 10.0 * after.variance[k]);
            CHECK(std::abs(after.mean[k] - clean.mean[k]) < 0.02);
        }
    }
    CHECK_THROWS_AS((void)remove_clipart_artifacts(ImageGrid(4, 4, 1), 0.3, 1, 1.0), PresetError);
}

TEST_CASE("texture removal") {
    ImageGrid flat(8, 8, 1);
    for (double& v : flat.data()) v = 0.6;
    CHECK(max_abs_diff(remove_texture(flat, 0.5, 1), flat) < 1e-8);
    const ImageGrid ramp = make_checker_ramp();
    const ImageGrid out = remove_texture(ramp, 1.0, 2);
    CHECK(high_band_tv(ramp) >= 20.0 * high_band_tv(out));
    CHECK_THROWS_AS((void)remove_texture(flat, 0.5, 4), PresetError);
}

TEST_CASE("bicubic resize") {
    ImageGrid c(4, 5, 1);
    for (double& v : c.data()) v = 0.3;
    const ImageGrid up = bicubic_resize(c, {16, 20});
    for (double v : up.data()) CHECK(v == doctest::Approx(0.3));
    std::mt19937_64 rng(2);
    const ImageGrid r = oracle::random_image(rng, 6, 7);
    CHECK(max_abs_diff(bicubic_resize(r, r.extent()), r) < 1e-12);
    // A horizontal ramp stays a ramp away from the clamped border.
    ImageGrid ramp(2, 8, 1);
    for (int x = 0; x < 8; ++x) ramp.at(0, x) = ramp.at(1, x) = 0.1 * x;
    const ImageGrid wide = bicubic_resize(ramp, {4, 16});
    for (int x = 4; x < 12; ++x) CHECK(wide.at(1, x) == doctest::Approx(0.05 * x - 0.025));
}

TEST_CASE("depth samples") {
    const SyntheticDepth sd = make_synthetic_depth(3);
    CHECK_NOTHROW(validate_depth_sample(sd.sample));
    CHECK(sd.sample.guide.extent() == Extent{64, 64});
    CHECK(sd.sample.low_res.extent() == Extent{16, 16});
    CHECK(sd.textured_flat.size() == 64 * 64);
    CHECK(std::count(sd.textured_flat.begin(), sd.textured_flat.end(), 1) > 100);

    DepthSample bad = sd.sample;
    bad.scale = 2;
    CHECK_THROWS_AS(validate_depth_sample(bad), ContractError);
    CHECK_THROWS_AS((void)upsample_depth(bad, preset(Preset::group3_guided)), ContractError);

    // Ground truth fed back at scale 1 is left essentially untouched.
    DepthSample same;
    same.low_res = *sd.sample.ground_truth;
    same.guide = sd.sample.guide;
    same.ground_truth = sd.sample.ground_truth;
    const ImageGrid u =
        upsample_depth(same, preset(Preset::group3_guided, {.lambda = 2.5, .radius = 1, .b = 0.2}));
    CHECK(mae(u, *same.ground_truth).value < 0.01);
}

TEST_CASE("guided upsampling beats bicubic without copying texture") {
    const auto params = preset(Preset::group3_guided, {.lambda = 2.5, .radius = 1, .b = 0.2});
    for (std::uint64_t seed : {0u, 5u}) {
        const SyntheticDepth sd = make_synthetic_depth(seed);
        const ImageGrid u = upsample_depth(sd.sample, params);
        ImageGrid base = bicubic_resize(sd.sample.low_res, sd.sample.guide.extent());
        base.clamp();
        CHECK(mae(u, *sd.sample.ground_truth).value < mae(base, *sd.sample.ground_truth).value);
        CHECK(mean_gradient(u, sd.textured_flat) < 0.1 * mean_gradient(sd.sample.guide, sd.textured_flat));
    }
}

TEST_CASE("mae") {
    ImageGrid a(3, 3, 1);
    ImageGrid b(3, 3, 1);
    for (double& v : b.data()) v = 1.0;
    CHECK(mae(a, a).value == 0.0);
    CHECK(mae(a, b).value == 1.0);
    CHECK(mae(a, b).pixels == 9);
    CHECK_THROWS_AS((void)mae(a, ImageGrid(3, 3, 3)), ContractError);
}

TEST_CASE("1-D fixtures") {
    for (FixtureKind k : {FixtureKind::step_details, FixtureKind::pulses, FixtureKind::blurred_step}) {
        CHECK(fixture_from_name(fixture_name(k)) == k);
        const ImageGrid a = gen_1d_fixture(k, 4);
        CHECK(a == gen_1d_fixture(k, 4));
        CHECK(a.width() == 256);
        CHECK(a.height() == 1);
    }
    CHECK_THROWS_AS((void)fixture_from_name("ramp"), ContractError);

    const auto step = gen_1d_fixture(FixtureKind::step_details, 0);
    const auto sd = step.data();
    const auto [lo, hi] = std::minmax_element(sd.begin(), sd.end());
    CHECK(*hi - *lo == doctest::Approx(0.8).epsilon(0.01));
    CHECK(sd[128] - sd[127] > 0.5);

    const auto pulses = gen_1d_fixture(FixtureKind::pulses, 2);
    const PulseLayout L = pulse_layout(2);
    CHECK(L.small_end - L.small_begin == 5);
    CHECK(L.large_end - L.large_begin == 40);
    CHECK(pulses.data()[L.small_begin] == doctest::Approx(0.9));
    CHECK(pulses.data()[L.large_begin + 20] == doctest::Approx(0.4));
    const PulseScores untouched = score_pulses(pulses.data(), 2);
    CHECK(untouched.small_residual == doctest::Approx(0.8));
    CHECK(untouched.large_level == doctest::Approx(0.3));

    const auto blurred = gen_1d_fixture(FixtureKind::blurred_step, 1);
    const int w = transition_width(blurred.data());
    CHECK(w >= 5);
    CHECK(w <= 7);
}

TEST_CASE("1-D scoring helpers") {
    const std::vector<double> f{0.0, 0.0, 1.0, 1.0};
    CHECK(window_overshoot(f, f, 1) == 0.0);
    CHECK(window_overshoot(f, std::vector<double>{0.0, -0.2, 1.0, 1.1}, 1) == doctest::Approx(0.2));
    CHECK(monotone_across_step(f, std::vector<double>{0.0, 0.3, 0.6, 1.0}, 2));
    CHECK_FALSE(monotone_across_step(f, std::vector<double>{0.0, 0.4, 0.3, 1.0}, 2));
    std::vector<double> sharp(256, 0.2);
    std::fill(sharp.begin() + 128, sharp.end(), 0.8);
    CHECK(transition_width(sharp) == 0);
    CHECK_THROWS_AS((void)transition_width(std::vector<double>(10, 0.0)), ContractError);
}

TEST_CASE("region statistics honor the margin") {
    ImageGrid img(4, 8, 1);
    std::vector<int> region(32);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x) {
            region[y * 8 + x] = x < 4 ? 0 : 1;
            img.at(y, x) = x < 4 ? 0.25 : 0.75 + 0.1 * (y % 2);
        }
    const RegionStats s0 = region_stats(img, region, 2, 0);
    CHECK(s0.pixels[0] == 16);
    CHECK(s0.mean[0] == doctest::Approx(0.25));
    CHECK(s0.variance[0] == doctest::Approx(0.0));
    CHECK(s0.mean[1] == doctest::Approx(0.8));
    CHECK(s0.variance[1] == doctest::Approx(0.0025));
    const RegionStats s2 = region_stats(img, region, 2, 2);
    CHECK(s2.pixels[0] == 8);
    CHECK(s2.pixels[1] == 8);
}

TEST_CASE("synthetic generators are deterministic") {
    CHECK(make_synthetic_clipart(3).degraded == make_synthetic_clipart(3).degraded);
    CHECK_FALSE(make_synthetic_clipart(3).degraded == make_synthetic_clipart(4).degraded);
    CHECK(make_bench_image(30, 40, 2) == make_bench_image(30, 40, 2));
    CHECK(make_bench_image(30, 40).channels() == 3);
    CHECK(high_band_tv(make_checker_ramp(32, 0.0)) < 1e-9);
}

TEST_CASE("evaluation csv") {
    std::ostringstream os;
    write_mae_csv(os, {{"art", 4, 1.5, 2.5}});
    CHECK(os.str().rfind("sample,scale,mae,baseline_mae\n", 0) == 0);
    CHECK(os.str().find("art,4,") != std::string::npos);
}
