#include "thsmooth/tasks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace thsmooth {
namespace {

constexpr int kSignalWidth = 256;

// mt19937_64 is fully specified, so these draws are identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

double cubic_kernel(double t) {
    constexpr double a = -0.5;
    t = std::abs(t);
    if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0) return a * (((t - 5.0) * t + 8.0) * t - 4.0);
    return 0.0;
}

ImageGrid clamped(ImageGrid g) {
    g.clamp();
    return g;
}

ImageGrid run_smooth(const ImageGrid& f, const ImageGrid& g, const SmoothingParams& params,
                     const TaskOptions& options) {
    SmoothResult r = smooth(f, g, params, options.smooth);
    if (options.reports != nullptr) {
        *options.reports = std::move(r.reports);
    }
    return std::move(r.u);
}

}  // namespace

ImageGrid enhance_detail(const ImageGrid& f, double lambda, double boost, int radius,
                         const TaskOptions& options) {
    if (!(boost >= 0.0)) {
        throw ContractError("enhance_detail: boost must be >= 0");
    }
    PresetOverrides o;
    o.lambda = lambda;
    o.radius = radius;
    const SmoothingParams params = preset(Preset::group1_detail, o);
    const ImageGrid base = run_smooth(f, f, params, options);
    ImageGrid out = base;
    auto od = out.data();
    const auto fd = f.data();
    const auto bd = base.data();
    for (std::size_t i = 0; i < od.size(); ++i) {
        od[i] = bd[i] + boost * (fd[i] - bd[i]);
    }
    out.clamp();
    return out;
}

ImageGrid remove_clipart_artifacts(const ImageGrid& f, double b, int radius, double lambda,
                                   const TaskOptions& options) {
    PresetOverrides o;
    o.b = b;
    o.radius = radius;
    o.lambda = lambda;
    return clamped(run_smooth(f, f, preset(Preset::group2_sharpen, o), options));
}

ImageGrid remove_texture(const ImageGrid& f, double lambda, int radius,
                         const TaskOptions& options) {
    PresetOverrides o;
    o.lambda = lambda;
    o.radius = radius;
    return clamped(run_smooth(f, f, preset(Preset::group4_texture, o), options));
}

void validate_depth_sample(const DepthSample& s) {
    if (s.scale < 1) {
        throw ContractError("depth sample: scale must be >= 1");
    }
    if (s.low_res.channels() != 1) {
        throw ContractError("depth sample: low-resolution depth must be single-channel");
    }
    const Extent expected{s.low_res.height() * s.scale, s.low_res.width() * s.scale};
    if (s.guide.extent() != expected) {
        throw ContractError("depth sample: guide extent must be scale x low-res extent");
    }
    if (s.ground_truth && s.ground_truth->extent() != expected) {
        throw ContractError("depth sample: ground-truth extent must match the guide");
    }
}

ImageGrid bicubic_resize(const ImageGrid& src, Extent target) {
    ImageGrid out(target.height, target.width, src.channels(), src.intensity_max());
    const double sy = static_cast<double>(src.height()) / target.height;
    const double sx = static_cast<double>(src.width()) / target.width;
    for (int y = 0; y < target.height; ++y) {
        const double fy = (y + 0.5) * sy - 0.5;
        const int y0 = static_cast<int>(std::floor(fy));
        std::array<double, 4> wy{};
        for (int m = 0; m < 4; ++m) wy[m] = cubic_kernel(fy - (y0 - 1 + m));
        for (int x = 0; x < target.width; ++x) {
            const double fx = (x + 0.5) * sx - 0.5;
            const int x0 = static_cast<int>(std::floor(fx));
            std::array<double, 4> wx{};
            for (int m = 0; m < 4; ++m) wx[m] = cubic_kernel(fx - (x0 - 1 + m));
            for (int c = 0; c < src.channels(); ++c) {
                double acc = 0.0;
                for (int my = 0; my < 4; ++my) {
                    const int yy = std::clamp(y0 - 1 + my, 0, src.height() - 1);
                    for (int mx = 0; mx < 4; ++mx) {
                        const int xx = std::clamp(x0 - 1 + mx, 0, src.width() - 1);
                        acc += wy[my] * wx[mx] * src.at(yy, xx, c);
                    }
                }
                out.at(y, x, c) = acc;
            }
        }
    }
    return out;
}

ImageGrid upsample_depth(const DepthSample& sample, const SmoothingParams& params,
                         const TaskOptions& options) {
    validate_depth_sample(sample);
    const ImageGrid init = bicubic_resize(sample.low_res, sample.guide.extent());
    return clamped(run_smooth(init, sample.guide, params, options));
}

MaeScore mae(const ImageGrid& a, const ImageGrid& b) {
    if (a.extent() != b.extent() || a.channels() != 1 || b.channels() != 1) {
        throw ContractError("mae: inputs must be single-channel with equal extent");
    }
    const auto ad = a.data();
    const auto bd = b.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < ad.size(); ++i) sum += std::abs(ad[i] - bd[i]);
    return {sum / static_cast<double>(ad.size()), ad.size()};
}

std::string_view fixture_name(FixtureKind kind) {
    switch (kind) {
        case FixtureKind::step_details:
            return "step_details";
        case FixtureKind::pulses:
            return "pulses";
        case FixtureKind::blurred_step:
            return "blurred_step";
    }
    return "unknown";
}

FixtureKind fixture_from_name(std::string_view name) {
    for (auto k : {FixtureKind::step_details, FixtureKind::pulses, FixtureKind::blurred_step}) {
        if (fixture_name(k) == name) return k;
    }
    throw ContractError("unknown fixture kind: " + std::string(name));
}

PulseLayout pulse_layout(std::uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const int shift = static_cast<int>(rng.uniform() * 17.0) - 8;
    return {60 + shift, 65 + shift, 150 + shift, 190 + shift};
}

ImageGrid gen_1d_fixture(FixtureKind kind, std::uint64_t seed) {
    std::vector<double> v(kSignalWidth);
    switch (kind) {
        case FixtureKind::step_details: {
            Rng rng(seed);
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            for (int x = 0; x < kSignalWidth; ++x) {
                v[x] = 0.2 + (x >= kSignalWidth / 2 ? 0.6 : 0.0) +
                       0.1 * std::sin(2.0 * std::numbers::pi * x / 16.0 + phase);
            }
            break;
        }
        case FixtureKind::pulses: {
            const PulseLayout p = pulse_layout(seed);
            for (int x = 0; x < kSignalWidth; ++x) {
                v[x] = 0.1;
                if (x >= p.small_begin && x < p.small_end) v[x] += 0.8;
                if (x >= p.large_begin && x < p.large_end) v[x] += 0.3;
            }
            break;
        }
        case FixtureKind::blurred_step: {
            Rng rng(seed);
            const double center = kSignalWidth / 2 + rng.uniform() - 0.5;
            // Logistic 10-90% rise is 2 ln 9 * s; s chosen for 6 px.
            const double s = 6.0 / (2.0 * std::log(9.0));
            for (int x = 0; x < kSignalWidth; ++x) {
                v[x] = 0.2 + 0.6 / (1.0 + std::exp(-(x - center) / s));
            }
            break;
        }
    }
    return ImageGrid(1, kSignalWidth, 1, std::move(v));
}

PulseScores score_pulses(std::span<const double> u, std::uint64_t seed) {
    if (u.size() != static_cast<std::size_t>(kSignalWidth)) {
        throw ContractError("score_pulses: expected a fixture-length signal");
    }
    const PulseLayout L = pulse_layout(seed);
    PulseScores s;
    for (int x = L.small_begin; x < L.small_end; ++x) {
        s.small_residual = std::max(s.small_residual, u[x] - 0.1);
    }
    for (int x = L.large_begin + 5; x < L.large_end - 5; ++x) s.large_level += u[x] - 0.1;
    s.large_level /= (L.large_end - L.large_begin - 10);
    return s;
}

double window_overshoot(std::span<const double> f, std::span<const double> u, int radius) {
    if (f.size() != u.size() || radius < 0) {
        throw ContractError("window_overshoot: length mismatch or negative radius");
    }
    const int n = static_cast<int>(u.size());
    double out = 0.0;
    for (int x = 0; x < n; ++x) {
        const int lo = std::max(0, x - radius);
        const int hi = std::min(n, x + radius + 1);
        const auto [mn, mx] = std::minmax_element(f.begin() + lo, f.begin() + hi);
        out = std::max({out, u[x] - *mx, *mn - u[x]});
    }
    return out;
}

bool monotone_across_step(std::span<const double> f, std::span<const double> u, int step) {
    const int n = static_cast<int>(f.size());
    if (u.size() != f.size() || step < 1 || step >= n) {
        throw ContractError("monotone_across_step: bad step or length mismatch");
    }
    int lo = step - 1;
    while (lo > 0 && f[lo] >= f[lo - 1]) --lo;
    int hi = step;
    while (hi + 1 < n && f[hi + 1] >= f[hi]) ++hi;
    for (int x = lo; x < hi; ++x) {
        if (u[x + 1] < u[x]) return false;
    }
    return true;
}

int transition_width(std::span<const double> signal, int plateau) {
    const int n = static_cast<int>(signal.size());
    if (n < 2 * plateau) {
        throw ContractError("transition_width: signal shorter than two plateaus");
    }
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < plateau; ++i) {
        lo += signal[i];
        hi += signal[n - 1 - i];
    }
    lo /= plateau;
    hi /= plateau;
    const double t10 = lo + 0.1 * (hi - lo);
    const double t90 = lo + 0.9 * (hi - lo);
    int count = 0;
    for (double v : signal) {
        if (v > std::min(t10, t90) && v < std::max(t10, t90)) ++count;
    }
    return count;
}

SyntheticDepth make_synthetic_depth(std::uint64_t seed, int size, int scale, double noise_sigma) {
    if (size % scale != 0) {
        throw ContractError("make_synthetic_depth: size must be a multiple of scale");
    }
    Rng rng(seed);
    ImageGrid gt(size, size, 1);
    ImageGrid guide(size, size, 3);

    // Region 0: background (left half textured in the guide).
    // Region 1: rectangle. Region 2: disc.
    const double s = size / 64.0;
    const int ry0 = static_cast<int>(rng.uniform(6, 12) * s);
    const int rx0 = static_cast<int>(rng.uniform(6, 12) * s);
    const int ry1 = ry0 + static_cast<int>(rng.uniform(20, 28) * s);
    const int rx1 = rx0 + static_cast<int>(rng.uniform(14, 20) * s);
    const double cy = rng.uniform(40, 48) * s;
    const double cx = rng.uniform(40, 48) * s;
    const double radius = rng.uniform(9, 13) * s;
    const std::array<double, 3> depth{rng.uniform(0.2, 0.35), rng.uniform(0.6, 0.8),
                                      rng.uniform(0.45, 0.55)};
    std::array<std::array<double, 3>, 3> color{};
    for (auto& c : color) {
        for (double& ch : c) ch = rng.uniform(0.2, 0.8);
    }
    // Keep regions distinguishable in the guide.
    color[1][0] = std::min(1.0, color[0][0] + 0.35);
    color[2][2] = std::max(0.0, color[0][2] - 0.3);
    const double texture_amp = 0.25;
    const int stripe = std::max(2, static_cast<int>(rng.uniform(3, 5)));

    std::vector<int> region(static_cast<std::size_t>(size) * size, 0);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            int r = 0;
            if (y >= ry0 && y < ry1 && x >= rx0 && x < rx1) r = 1;
            if ((y + 0.5 - cy) * (y + 0.5 - cy) + (x + 0.5 - cx) * (x + 0.5 - cx) <
                radius * radius) {
                r = 2;
            }
            region[static_cast<std::size_t>(y) * size + x] = r;
            gt.at(y, x) = depth[r];
            const bool textured = r == 0 && x < size / 2;
            const double t = textured ? ((((x / stripe) + (y / stripe)) % 2) ? 0.5 : -0.5) : 0.0;
            for (int c = 0; c < 3; ++c) {
                guide.at(y, x, c) = std::clamp(color[r][c] + texture_amp * t, 0.0, 1.0);
            }
        }
    }

    const int lh = size / scale;
    ImageGrid low(lh, lh, 1);
    for (int y = 0; y < lh; ++y) {
        for (int x = 0; x < lh; ++x) {
            double acc = 0.0;
            for (int dy = 0; dy < scale; ++dy) {
                for (int dx = 0; dx < scale; ++dx) acc += gt.at(y * scale + dy, x * scale + dx);
            }
            low.at(y, x) = std::clamp(acc / (scale * scale) + noise_sigma * rng.gaussian(), 0.0,
                                      1.0);
        }
    }

    SyntheticDepth out;
    out.sample.low_res = std::move(low);
    out.sample.guide = std::move(guide);
    out.sample.ground_truth = std::move(gt);
    out.sample.scale = scale;

    // Textured and flat: background, textured half, at least `margin` px from
    // any other region and from the image border.
    const int margin = 3;
    out.textured_flat.assign(region.size(), 0);
    for (int y = margin; y < size - margin; ++y) {
        for (int x = margin; x < size / 2 - margin; ++x) {
            bool flat = true;
            for (int dy = -margin; dy <= margin && flat; ++dy) {
                for (int dx = -margin; dx <= margin && flat; ++dx) {
                    flat = region[static_cast<std::size_t>(y + dy) * size + x + dx] == 0;
                }
            }
            out.textured_flat[static_cast<std::size_t>(y) * size + x] = flat ? 1 : 0;
        }
    }
    return out;
}

SyntheticClipart make_synthetic_clipart(std::uint64_t seed, int size, double quant_step) {
    if (size < 16 || size % 8 != 0) {
        throw ContractError("make_synthetic_clipart: size must be a multiple of 8, at least 16");
    }
    Rng rng(seed);
    const double s = size / 64.0;
    SyntheticClipart out;
    out.clean = ImageGrid(size, size, 1);
    out.region.assign(static_cast<std::size_t>(size) * size, 0);
    out.region_count = 4;

    // Background, a rectangle, a disc and a ring around the disc.
    std::array<double, 4> level{0.15, 0.45, 0.7, 0.95};
    for (std::size_t i = level.size() - 1; i > 0; --i) {
        const auto j = std::min(i, static_cast<std::size_t>(rng.uniform(0, 1) * (i + 1)));
        std::swap(level[i], level[j]);
    }
    // Odd coordinates keep the rectangle edges off the 8x8 block grid, so
    // every region sees ringing.
    const int ry0 = static_cast<int>(rng.uniform(5, 10) * s) | 1;
    const int rx0 = static_cast<int>(rng.uniform(5, 10) * s) | 1;
    const int ry1 = (ry0 + static_cast<int>(rng.uniform(18, 26) * s)) | 1;
    const int rx1 = (rx0 + static_cast<int>(rng.uniform(18, 26) * s)) | 1;
    const double cy = rng.uniform(38, 46) * s;
    const double cx = rng.uniform(38, 46) * s;
    const double r_in = rng.uniform(8, 11) * s;
    const double r_out = r_in + 4.0 * s;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double d2 = (y + 0.5 - cy) * (y + 0.5 - cy) + (x + 0.5 - cx) * (x + 0.5 - cx);
            int r = 0;
            if (y >= ry0 && y < ry1 && x >= rx0 && x < rx1) r = 1;
            if (d2 < r_out * r_out) r = 3;
            if (d2 < r_in * r_in) r = 2;
            out.region[static_cast<std::size_t>(y) * size + x] = r;
            out.clean.at(y, x) = level[static_cast<std::size_t>(r)];
        }
    }

    // Orthonormal 8x8 DCT-II basis.
    std::array<std::array<double, 8>, 8> basis{};
    for (int k = 0; k < 8; ++k) {
        const double norm = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
        for (int n = 0; n < 8; ++n) basis[k][n] = norm * std::cos(std::numbers::pi * (n + 0.5) * k / 8.0);
    }
    out.degraded = out.clean;
    for (int by = 0; by < size; by += 8) {
        for (int bx = 0; bx < size; bx += 8) {
            std::array<std::array<double, 8>, 8> coef{};
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    double acc = 0.0;
                    for (int y = 0; y < 8; ++y) {
                        for (int x = 0; x < 8; ++x) {
                            acc += basis[u][y] * basis[v][x] * out.clean.at(by + y, bx + x);
                        }
                    }
                    const double q = quant_step * (1.0 + 0.5 * (u + v));
                    coef[u][v] = std::round(acc / q) * q;
                }
            }
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 8; ++x) {
                    double acc = 0.0;
                    for (int u = 0; u < 8; ++u) {
                        for (int v = 0; v < 8; ++v) acc += basis[u][y] * basis[v][x] * coef[u][v];
                    }
                    out.degraded.at(by + y, bx + x) = std::clamp(acc, 0.0, 1.0);
                }
            }
        }
    }
    return out;
}

RegionStats region_stats(const ImageGrid& img, std::span<const int> region, int region_count,
                         int margin) {
    const Extent e = img.extent();
    if (img.channels() != 1 || region.size() != e.pixels()) {
        throw ContractError("region_stats: expects a 1-channel image and one label per pixel");
    }
    std::vector<double> sum(region_count, 0.0), sq(region_count, 0.0);
    std::vector<std::size_t> count(region_count, 0);
    for (int y = 0; y < e.height; ++y) {
        for (int x = 0; x < e.width; ++x) {
            const int r = region[static_cast<std::size_t>(y) * e.width + x];
            bool interior = true;
            for (int dy = -margin; dy <= margin && interior; ++dy) {
                for (int dx = -margin; dx <= margin && interior; ++dx) {
                    const int yy = std::clamp(y + dy, 0, e.height - 1);
                    const int xx = std::clamp(x + dx, 0, e.width - 1);
                    interior = region[static_cast<std::size_t>(yy) * e.width + xx] == r;
                }
            }
            if (!interior) continue;
            const double v = img.at(y, x);
            sum[r] += v;
            sq[r] += v * v;
            ++count[r];
        }
    }
    RegionStats stats;
    for (int r = 0; r < region_count; ++r) {
        const double n = static_cast<double>(std::max<std::size_t>(count[r], 1));
        const double m = sum[r] / n;
        stats.mean.push_back(m);
        stats.variance.push_back(std::max(0.0, sq[r] / n - m * m));
        stats.pixels.push_back(count[r]);
    }
    return stats;
}

ImageGrid make_checker_ramp(int size, double amplitude) {
    ImageGrid img(size, size, 1);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double ramp = 0.2 + 0.6 * x / std::max(1, size - 1);
            const double sign = ((x / 2 + y / 2) % 2) ? 0.5 : -0.5;
            img.at(y, x) = ramp + amplitude * sign;
        }
    }
    return img;
}

ImageGrid make_bench_image(int height, int width, std::uint64_t seed) {
    if (height < 1 || width < 1) {
        throw ContractError("make_bench_image: extent must be positive");
    }
    ImageGrid f(height, width, 3);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double block = ((x / 40 + y / 40) % 2) != 0 ? 0.15 : 0.0;
            const double checker = 0.05 * (((x / 2) + (y / 2)) % 2);
            for (int c = 0; c < 3; ++c) {
                const double v = 0.3 + 0.2 * std::sin(x * 0.02 + c) + 0.2 * std::cos(y * 0.03) +
                                 block + checker + noise(rng);
                f.at(y, x, c) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return f;
}

double high_band_tv(const ImageGrid& img) {
    const Extent e = img.extent();
    if (e.height < 5 || e.width < 5) {
        throw ContractError("high_band_tv: image smaller than 5x5");
    }
    // Box over rows y-2..y+1 and columns x-2..x+1 (even size, so no center).
    const int h = e.height - 3;
    const int w = e.width - 3;
    std::vector<double> band(static_cast<std::size_t>(h) * w);
    double tv = 0.0;
    for (int c = 0; c < img.channels(); ++c) {
        for (int y = 2; y < e.height - 1; ++y) {
            for (int x = 2; x < e.width - 1; ++x) {
                double acc = 0.0;
                for (int dy = -2; dy <= 1; ++dy) {
                    for (int dx = -2; dx <= 1; ++dx) acc += img.at(y + dy, x + dx, c);
                }
                band[static_cast<std::size_t>(y - 2) * w + (x - 2)] = img.at(y, x, c) - acc / 16.0;
            }
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double v = band[static_cast<std::size_t>(y) * w + x];
                if (x + 1 < w) tv += std::abs(band[static_cast<std::size_t>(y) * w + x + 1] - v);
                if (y + 1 < h) tv += std::abs(band[static_cast<std::size_t>(y + 1) * w + x] - v);
            }
        }
    }
    return tv;
}

double mean_gradient(const ImageGrid& img, std::span<const std::uint8_t> mask) {
    if (mask.size() != img.pixels()) {
        throw ContractError("mean_gradient: mask size mismatch");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!mask[static_cast<std::size_t>(y) * img.width() + x]) continue;
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, img.width() - 1);
            const int ym = std::max(y - 1, 0);
            const int yp = std::min(y + 1, img.height() - 1);
            double g = 0.0;
            for (int c = 0; c < img.channels(); ++c) {
                const double gx = 0.5 * (img.at(y, xp, c) - img.at(y, xm, c));
                const double gy = 0.5 * (img.at(yp, x, c) - img.at(ym, x, c));
                g += std::hypot(gx, gy);
            }
            sum += g / img.channels();
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

std::vector<MaeRow> evaluate_manifest(const std::vector<ManifestEntry>& entries,
                                      const SmoothingParams& params, double intensity_scale) {
    std::vector<MaeRow> rows;
    for (const auto& e : entries) {
        DepthSample s;
        s.low_res = to_gray(load_image(e.low_res));
        s.guide = load_image(e.guide);
        s.ground_truth = to_gray(load_image(e.ground_truth));
        s.scale = e.scale;
        validate_depth_sample(s);
        const ImageGrid baseline = bicubic_resize(s.low_res, s.guide.extent());
        const ImageGrid ours = upsample_depth(s, params);
        MaeRow row;
        row.sample = e.ground_truth.stem().string();
        row.scale = e.scale;
        row.mae = mae(ours, *s.ground_truth).value * intensity_scale;
        row.baseline_mae = mae(clamped(baseline), *s.ground_truth).value * intensity_scale;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_mae_csv(std::ostream& out, const std::vector<MaeRow>& rows) {
    out << "sample,scale,mae,baseline_mae\n";
    const auto old = out.precision(6);
    for (const auto& r : rows) {
        out << r.sample << ',' << r.scale << ',' << r.mae << ',' << r.baseline_mae << '\n';
    }
    out.precision(old);
}

}  // namespace thsmooth
