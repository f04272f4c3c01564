#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thsmooth/grid.hpp"
#include "thsmooth/io.hpp"
#include "thsmooth/pipeline.hpp"

namespace thsmooth {

// --- applications ------------------------------------------------------------

struct TaskOptions {
    SmoothOptions smooth;
    /// Receives the energy reports of the underlying smooth call (audit mode).
    std::vector<EnergyReport>* reports = nullptr;
};

/// Base/detail decomposition with group1_detail, then
/// clamp(base + boost * (f - base)).
[[nodiscard]] ImageGrid enhance_detail(const ImageGrid& f, double lambda, double boost = 3.0,
                                       int radius = 2, const TaskOptions& options = {});

/// group2_sharpen with b_d = b_s = b; output clamped.
[[nodiscard]] ImageGrid remove_clipart_artifacts(const ImageGrid& f, double b, int radius,
                                                 double lambda, const TaskOptions& options = {});

/// group4_texture; output clamped.
[[nodiscard]] ImageGrid remove_texture(const ImageGrid& f, double lambda, int radius,
                                       const TaskOptions& options = {});

struct DepthSample {
    ImageGrid low_res;
    ImageGrid guide;
    std::optional<ImageGrid> ground_truth;
    int scale = 1;
};

/// Checks the extent relation guide = scale * low_res (and ground truth).
void validate_depth_sample(const DepthSample& sample);

/// Keys cubic convolution (a = -0.5), pixel-center aligned, clamped borders.
[[nodiscard]] ImageGrid bicubic_resize(const ImageGrid& src, Extent target);

/// Bicubic initialization to the guide's extent, then group3_guided with the
/// guide as g. Single-channel output, clamped.
[[nodiscard]] ImageGrid upsample_depth(const DepthSample& sample, const SmoothingParams& params,
                                       const TaskOptions& options = {});

struct MaeScore {
    double value = 0.0;
    std::size_t pixels = 0;
};

[[nodiscard]] MaeScore mae(const ImageGrid& a, const ImageGrid& b);

// --- fixtures ------------------------------------------------------------------

enum class FixtureKind { step_details, pulses, blurred_step };

[[nodiscard]] std::string_view fixture_name(FixtureKind kind);
[[nodiscard]] FixtureKind fixture_from_name(std::string_view name);

/// 1 x 256 test signals; the seed only moves phase/position.
///
///   step_details  0.2 + 0.6 [x >= 128] + 0.1 sin(2 pi x / 16 + phase)
///   pulses        0.1 + 0.8 on a width-5 pulse + 0.3 on a width-40 pulse
///   blurred_step  0.2 + 0.6 logistic((x - c) / s), 10-90% rise over 6 px
[[nodiscard]] ImageGrid gen_1d_fixture(FixtureKind kind, std::uint64_t seed);

/// Geometry of the pulses fixture for a given seed (half-open ranges).
struct PulseLayout {
    int small_begin = 0;
    int small_end = 0;
    int large_begin = 0;
    int large_end = 0;
};
[[nodiscard]] PulseLayout pulse_layout(std::uint64_t seed);

/// Scores for a smoothed pulses fixture, measured above the 0.1 baseline:
/// peak over the small pulse, mean over the large pulse minus 5 px per side.
struct PulseScores {
    double small_residual = 0.0;
    double large_level = 0.0;
};
[[nodiscard]] PulseScores score_pulses(std::span<const double> u, std::uint64_t seed);

/// Largest excursion of u outside [min f, max f] over the radius window.
[[nodiscard]] double window_overshoot(std::span<const double> f, std::span<const double> u,
                                      int radius = 3);

/// Whether u is non-decreasing wherever f is, on the stretch around
/// position `step` over which f rises monotonically.
[[nodiscard]] bool monotone_across_step(std::span<const double> f, std::span<const double> u,
                                        int step);

/// Samples strictly between the 10% and 90% levels of a rising edge whose
/// plateaus are estimated from the first and last `plateau` samples.
[[nodiscard]] int transition_width(std::span<const double> signal, int plateau = 32);

// --- synthetic benchmarks ----------------------------------------------------

struct SyntheticDepth {
    DepthSample sample;
    /// 1 where depth is constant but the guide is textured, away from edges.
    std::vector<std::uint8_t> textured_flat;
};

/// Piecewise-constant depth with an aligned color guide, one textured
/// constant-depth region, box-downsampled by `scale` plus Gaussian noise.
[[nodiscard]] SyntheticDepth make_synthetic_depth(std::uint64_t seed, int size = 64,
                                                  int scale = 4, double noise_sigma = 0.005);

/// Piecewise-constant gray clip art and a JPEG-like degraded copy: 8x8
/// block DCT with frequency-weighted coefficient quantization.
struct SyntheticClipart {
    ImageGrid clean;
    ImageGrid degraded;
    /// Region id per pixel.
    std::vector<int> region;
    int region_count = 0;
};

[[nodiscard]] SyntheticClipart make_synthetic_clipart(std::uint64_t seed, int size = 64,
                                                      double quant_step = 0.02);

/// Per-region statistics of `img` over pixels at least `margin` px (Chebyshev)
/// from any other region.
struct RegionStats {
    std::vector<double> mean;
    std::vector<double> variance;
    /// Pixels that contributed; regions with none report mean = variance = 0.
    std::vector<std::size_t> pixels;
};
[[nodiscard]] RegionStats region_stats(const ImageGrid& img, std::span<const int> region,
                                       int region_count, int margin = 0);

/// Horizontal ramp from 0.2 to 0.8 plus a period-4 checkerboard (2x2 cells)
/// of the given peak-to-peak amplitude.
[[nodiscard]] ImageGrid make_checker_ramp(int size = 64, double amplitude = 0.2);

/// RGB test card for timing runs: smooth shading, 40 px blocks, a 2 px
/// checker of amplitude 0.05 and Gaussian noise (sigma 0.02), clamped.
[[nodiscard]] ImageGrid make_bench_image(int height, int width, std::uint64_t seed = 1);

/// Total variation (sum of absolute forward differences) of img minus its
/// 4x4 box average, over pixels whose box lies inside the frame.
[[nodiscard]] double high_band_tv(const ImageGrid& img);

/// Mean central-difference gradient magnitude over `mask` (channel mean).
[[nodiscard]] double mean_gradient(const ImageGrid& img, std::span<const std::uint8_t> mask);

struct MaeRow {
    std::string sample;
    int scale = 0;
    double mae = 0.0;
    double baseline_mae = 0.0;
};

/// Runs upsample_depth on every manifest entry; baseline is bicubic alone.
/// `intensity_scale` converts normalized MAE into reporting units.
[[nodiscard]] std::vector<MaeRow> evaluate_manifest(const std::vector<ManifestEntry>& entries,
                                                    const SmoothingParams& params,
                                                    double intensity_scale = 255.0);

/// CSV with header `sample,scale,mae,baseline_mae`.
void write_mae_csv(std::ostream& out, const std::vector<MaeRow>& rows);

}  // namespace thsmooth
