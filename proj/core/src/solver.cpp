#include "thsmooth/solver.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace thsmooth {
namespace {

constexpr std::size_t kChunk = 4096;

// Chunked dot product: chunk partials are combined in a fixed order so the
// value is independent of the thread count.
double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(n, lo + kChunk);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Visits the in-bounds neighbors (k, j) of every pixel; interior pixels skip
// the bounds test.
template <typename Fn>
void for_each_pair_in_row(int y, const Extent& e, const NeighborOffsets& offsets,
                          std::span<const std::ptrdiff_t> flat, Fn&& fn) {
    const int r = offsets.radius();
    const bool row_interior = y >= r && y < e.height - r;
    for (int x = 0; x < e.width; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
        if (row_interior && x >= r && x < e.width - r) {
            for (std::size_t k = 0; k < offsets.size(); ++k) {
                fn(i, k, static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + flat[k]));
            }
        } else {
            for (std::size_t k = 0; k < offsets.size(); ++k) {
                const auto j = neighbor_index(y, x, offsets[k], e);
                if (j >= 0) fn(i, k, static_cast<std::size_t>(j));
            }
        }
    }
}

std::vector<std::ptrdiff_t> flat_offsets(const NeighborOffsets& offsets, const Extent& e) {
    std::vector<std::ptrdiff_t> out;
    out.reserve(offsets.size());
    for (const Offset& o : offsets) {
        out.push_back(static_cast<std::ptrdiff_t>(o.dy) * e.width + o.dx);
    }
    return out;
}

// Modified zero fill-in incomplete Cholesky M ~ L L' on the stencil's own
// pattern: fill that falls outside the pattern is dropped and its amount taken
// off both pivots, so L L' keeps the row sums of M. Offsets are row-major and
// point-symmetric, so the first half point to earlier pixels and
// lower_[i * half + a] holds L(i, i + offset a). Factored right-looking in
// raster order.
class IncompleteCholesky {
public:
    explicit IncompleteCholesky(const SparseSystem& sys)
        : extent_(sys.extent),
          offsets_(sys.offsets),
          flat_(flat_offsets(sys.offsets, sys.extent)),
          half_(sys.offsets.size() / 2),
          lower_(sys.size() * half_, 0.0),
          pivot_(sys.diag) {
        // Later neighbors of pixel k are i = k - offset a. For a pair a1 < a2
        // the entry (i1, i2) sits in row i1 under offset a1 - a2, if that is
        // a stencil offset; otherwise it is fill.
        std::vector<std::vector<std::pair<std::size_t, std::ptrdiff_t>>> pairs(half_);
        for (std::size_t a1 = 0; a1 < half_; ++a1) {
            for (std::size_t a2 = a1 + 1; a2 < half_; ++a2) {
                const int dy = offsets_[a1].dy - offsets_[a2].dy;
                const int dx = offsets_[a1].dx - offsets_[a2].dx;
                std::ptrdiff_t slot = -1;
                for (std::size_t c = 0; c < half_; ++c) {
                    if (offsets_[c].dy == dy && offsets_[c].dx == dx) {
                        slot = static_cast<std::ptrdiff_t>(c);
                    }
                }
                pairs[a1].emplace_back(a2, slot);
            }
        }
        const std::size_t kc = offsets_.size();
        const double two_lambda = 2.0 * sys.lambda;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            for (std::size_t a = 0; a < half_; ++a) {
                lower_[i * half_ + a] = -two_lambda * sys.affinity[i * kc + a];
            }
        }
        std::vector<std::ptrdiff_t> later(half_);
        for (int y = 0; y < extent_.height; ++y) {
            for (int x = 0; x < extent_.width; ++x) {
                const std::size_t k = static_cast<std::size_t>(y) * extent_.width + x;
                // Positive for valid systems; fall back to the Jacobi pivot.
                const double d = pivot_[k] > 0.0 ? pivot_[k] : sys.diag[k];
                pivot_[k] = std::sqrt(d);
                for (std::size_t a = 0; a < half_; ++a) {
                    const Offset& o = offsets_[a];
                    later[a] = neighbor_index(y, x, Offset{-o.dy, -o.dx}, extent_);
                    if (later[a] >= 0) lower_[static_cast<std::size_t>(later[a]) * half_ + a] /= pivot_[k];
                }
                for (std::size_t a1 = 0; a1 < half_; ++a1) {
                    if (later[a1] < 0) continue;
                    const auto i1 = static_cast<std::size_t>(later[a1]);
                    const double l1 = lower_[i1 * half_ + a1];
                    pivot_[i1] -= l1 * l1;
                    for (const auto& [a2, slot] : pairs[a1]) {
                        if (later[a2] < 0) continue;
                        const auto i2 = static_cast<std::size_t>(later[a2]);
                        const double v = l1 * lower_[i2 * half_ + a2];
                        if (slot >= 0) {
                            lower_[i1 * half_ + static_cast<std::size_t>(slot)] -= v;
                        } else {
                            pivot_[i1] -= v;
                            pivot_[i2] -= v;
                        }
                    }
                }
            }
        }
        inverse_pivot_.resize(pivot_.size());
        for (std::size_t i = 0; i < pivot_.size(); ++i) inverse_pivot_[i] = 1.0 / pivot_[i];
    }

    // z = (L L')^{-1} r. Both sweeps are serial through the adjacent pixel
    // (offset half - 1 is (0, -1)), so that term is applied last to keep the
    // dependency chain short.
    void apply(std::span<const double> r, std::span<double> z) const {
        const int rad = offsets_.radius();
        const std::size_t last = half_ - 1;
        const std::size_t kc = offsets_.size();
        for (int y = 0; y < extent_.height; ++y) {
            const bool row_interior = y >= rad;
            for (int x = 0; x < extent_.width; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * extent_.width + x;
                const double* li = &lower_[i * half_];
                double v = r[i];
                if (row_interior && x >= rad && x < extent_.width - rad) {
                    double acc = 0.0;
                    for (std::size_t a = 0; a < last; ++a) {
                        acc += li[a] * z[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + flat_[a])];
                    }
                    v -= acc;
                    v -= li[last] * z[i - 1];
                } else {
                    for (std::size_t a = 0; a < half_; ++a) {
                        const auto j = neighbor_index(y, x, offsets_[a], extent_);
                        if (j >= 0) v -= li[a] * z[static_cast<std::size_t>(j)];
                    }
                }
                z[i] = v * inverse_pivot_[i];
            }
        }
        // L' row i holds L(j, i) for the later neighbors j, stored in row j
        // under the same offset index.
        for (int y = extent_.height - 1; y >= 0; --y) {
            const bool row_interior = y < extent_.height - rad;
            for (int x = extent_.width - 1; x >= 0; --x) {
                const std::size_t i = static_cast<std::size_t>(y) * extent_.width + x;
                double v = z[i];
                if (row_interior && x >= rad && x < extent_.width - rad) {
                    double acc = 0.0;
                    for (std::size_t a = 0; a < last; ++a) {
                        const auto j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - flat_[a]);
                        acc += lower_[j * half_ + a] * z[j];
                    }
                    v -= acc;
                    v -= lower_[(i + 1) * half_ + last] * z[i + 1];
                } else {
                    for (std::size_t a = 0; a < half_; ++a) {
                        const auto j = neighbor_index(y, x, offsets_[kc - 1 - a], extent_);
                        if (j >= 0) {
                            v -= lower_[static_cast<std::size_t>(j) * half_ + a] *
                                 z[static_cast<std::size_t>(j)];
                        }
                    }
                }
                z[i] = v * inverse_pivot_[i];
            }
        }
    }

private:
    Extent extent_;
    NeighborOffsets offsets_;
    std::vector<std::ptrdiff_t> flat_;
    std::size_t half_;
    std::vector<double> lower_;
    std::vector<double> pivot_;
    std::vector<double> inverse_pivot_;
};

template <typename T>
void put(std::ostream& out, T value) {
    static_assert(std::endian::native == std::endian::little,
                  "system dump assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw std::runtime_error("system dump: truncated file");
    }
    return value;
}

}  // namespace

void SparseSystem::multiply(std::span<const double> x, std::span<double> out) const {
    const auto flat = flat_offsets(offsets, extent);
    const std::size_t kc = offsets.size();
    const double two_lambda = 2.0 * lambda;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < extent.height; ++y) {
        const std::size_t row0 = static_cast<std::size_t>(y) * extent.width;
        for (int x0 = 0; x0 < extent.width; ++x0) {
            out[row0 + x0] = data_diag[row0 + x0] * x[row0 + x0];
        }
        for_each_pair_in_row(y, extent, offsets, flat,
                             [&](std::size_t i, std::size_t k, std::size_t j) {
                                 out[i] += two_lambda * affinity[i * kc + k] * (x[i] - x[j]);
                             });
    }
}

std::vector<double> SparseSystem::dense() const {
    const std::size_t n = size();
    std::vector<double> m(n * n, 0.0);
    const auto flat = flat_offsets(offsets, extent);
    const std::size_t kc = offsets.size();
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = diag[i];
    for (int y = 0; y < extent.height; ++y) {
        for_each_pair_in_row(y, extent, offsets, flat,
                             [&](std::size_t i, std::size_t k, std::size_t j) {
                                 m[i * n + j] -= 2.0 * lambda * affinity[i * kc + k];
                             });
    }
    return m;
}

SparseSystem assemble(std::span<const double> f, std::span<const double> u_prev,
                      const AuxFields& aux, const WeightField& weights,
                      const SmoothingParams& params) {
    const Extent e = aux.extent;
    if (f.size() != e.pixels() || u_prev.size() != e.pixels() || weights.extent() != e ||
        weights.offset_count() != aux.smooth_count()) {
        throw ContractError("assemble: shape mismatch");
    }
    if (!all_finite(f) || !all_finite(u_prev) || !all_finite(aux.l_d) || !all_finite(aux.mu_d) ||
        !all_finite(aux.l_s) || !all_finite(aux.mu_s)) {
        throw ContractError("assemble: non-finite input");
    }

    SparseSystem sys;
    sys.extent = e;
    sys.offsets = aux.smooth_offsets;
    sys.lambda = params.lambda;
    const std::size_t n = e.pixels();
    const std::size_t kd = aux.data_count();
    const std::size_t ks = aux.smooth_count();
    sys.diag.assign(n, 0.0);
    sys.data_diag.assign(n, 0.0);
    sys.rhs.assign(n, 0.0);
    sys.affinity.assign(n * ks, 0.0);

    const auto flat_s = flat_offsets(aux.smooth_offsets, e);
    const auto flat_d = flat_offsets(aux.data_offsets, e);
    const double two_lambda = 2.0 * params.lambda;
    const auto& w = weights.values();

#pragma omp parallel for schedule(static)
    for (int y = 0; y < e.height; ++y) {
        for_each_pair_in_row(y, e, aux.data_offsets, flat_d,
                             [&](std::size_t i, std::size_t k, std::size_t j) {
                                 const double mu = aux.mu_d[i * kd + k];
                                 sys.diag[i] += mu;
                                 sys.data_diag[i] += mu;
                                 sys.rhs[i] += mu * (f[j] + aux.l_d[i * kd + k]);
                             });
        for_each_pair_in_row(
            y, e, aux.smooth_offsets, flat_s, [&](std::size_t i, std::size_t k, std::size_t j) {
                const std::size_t km = ks - 1 - k;
                const double forward = w[i * ks + k] * aux.mu_s[i * ks + k];
                const double backward = w[j * ks + km] * aux.mu_s[j * ks + km];
                const double pair = 0.5 * (forward + backward);
                sys.affinity[i * ks + k] = pair;
                sys.diag[i] += two_lambda * pair;
                const double s =
                    0.5 * (forward * aux.l_s[i * ks + k] - backward * aux.l_s[j * ks + km]);
                sys.rhs[i] += two_lambda * s;
            });
    }
    return sys;
}

SpdReport spd_check(const SparseSystem& sys) {
    SpdReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    const Extent& e = sys.extent;
    const auto flat = flat_offsets(sys.offsets, e);
    const std::size_t kc = sys.offsets.size();
    std::vector<double> off_sum(sys.size(), 0.0);
    for (int y = 0; y < e.height; ++y) {
        for_each_pair_in_row(y, e, sys.offsets, flat,
                             [&](std::size_t i, std::size_t k, std::size_t j) {
                                 const double a = sys.affinity[i * kc + k];
                                 off_sum[i] += std::abs(2.0 * sys.lambda * a);
                                 if (a != sys.affinity[j * kc + (kc - 1 - k)]) {
                                     report.symmetric = false;
                                 }
                             });
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double margin = sys.diag[i] - off_sum[i];
        if (margin < report.worst_margin) {
            report.worst_margin = margin;
            report.worst_row = i;
        }
    }
    if (sys.size() == 0) report.worst_margin = 0.0;
    // The margin must exceed the rounding noise of the diagonal it came from.
    const double scale = sys.size() == 0 ? 0.0 : std::abs(sys.diag[report.worst_row]);
    report.ok = report.symmetric && sys.size() > 0 &&
                report.worst_margin > 64.0 * std::numeric_limits<double>::epsilon() * scale;
    return report;
}

namespace {

constexpr double kStagnationRatio = 16.0 * std::numeric_limits<double>::epsilon();
// CG's attainable accuracy sits a small multiple above the one-ulp floor.
constexpr double kFloorSlack = 10.0;
constexpr int kMaxRestarts = 3;

// eps * || |M||x| + |b| || / ||b||: the relative residual that rounding x to
// double alone can produce. Strong pairs make it exceed 1e-8 on some systems.
double rounding_floor(const SparseSystem& sys, std::span<const double> x, double b_norm) {
    const std::size_t n = sys.size();
    const auto flat = flat_offsets(sys.offsets, sys.extent);
    const std::size_t kc = sys.offsets.size();
    const double two_lambda = 2.0 * sys.lambda;
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        row[i] = sys.diag[i] * std::abs(x[i]) + std::abs(sys.rhs[i]);
    }
    for (int y = 0; y < sys.extent.height; ++y) {
        for_each_pair_in_row(y, sys.extent, sys.offsets, flat,
                             [&](std::size_t i, std::size_t k, std::size_t j) {
                                 row[i] += two_lambda * sys.affinity[i * kc + k] * std::abs(x[j]);
                             });
    }
    return std::numeric_limits<double>::epsilon() * std::sqrt(dot(row, row)) / b_norm;
}

}  // namespace

SolveResult solve(const SparseSystem& sys, std::span<const double> warm_start,
                  const SolveOptions& options) {
    const std::size_t n = sys.size();
    if (warm_start.size() != n || sys.data_diag.size() != n || sys.rhs.size() != n ||
        sys.affinity.size() != n * sys.offset_count()) {
        throw ContractError("solve: warm start has the wrong size");
    }
    const SpdReport spd = spd_check(sys);
    if (!spd.ok) {
        std::ostringstream msg;
        msg << "solve: system is not strictly diagonally dominant (worst margin "
            << spd.worst_margin << " at row " << spd.worst_row << ")";
        throw ContractError(msg.str());
    }
    const std::size_t max_iters = options.max_iterations ? options.max_iterations : 10 * n;

    SolveResult result;
    result.solution.assign(warm_start.begin(), warm_start.end());
    auto& x = result.solution;

    std::vector<double> r(n), z(n), p(n), q(n);
    std::optional<IncompleteCholesky> ic;
    if (options.preconditioner == Preconditioner::incomplete_cholesky) ic.emplace(sys);
    auto precondition = [&]() {
        if (ic) {
            ic->apply(r, z);
        } else {
            for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / sys.diag[i];
        }
    };
    const double b_norm_raw = std::sqrt(dot(sys.rhs, sys.rhs));
    const double b_norm = b_norm_raw > 0.0 ? b_norm_raw : 1.0;

    auto true_residual = [&]() {
        sys.multiply(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - q[i];
        return std::sqrt(dot(r, r)) / b_norm;
    };

    std::vector<double> history;
    double rel = true_residual();
    history.push_back(rel);

    // CG does not decrease the residual 2-norm monotonically; along long
    // chains it can grow for hundreds of steps while the front propagates.
    // The error energy norm does fall monotonically, by rz^2 / (2 pq) per
    // step, but after the stiff modes are gone its drops sit at rounding level
    // relative to the cumulative drop even while the residual still improves.
    // Stagnation therefore needs both: no new best residual over a window and
    // a window energy drop at rounding level. A restart whose true residual
    // is no better than the previous one is stagnation too.
    std::vector<double> drops;
    double window_drop = 0.0;
    double total_drop = 0.0;
    double restart_residual = rel;
    double floor = rounding_floor(sys, x, b_norm);
    double best = rel;
    std::size_t best_iter = 0;
    std::size_t iter = 0;
    int restarts = 0;
    bool stalled = false;

    while (true) {
        // Restart from the true residual; the recursive one drifts on
        // long runs.
        precondition();
        std::copy(z.begin(), z.end(), p.begin());
        double rz = dot(r, z);

        while (rel > std::max(options.tolerance, floor) && iter < max_iters) {
            sys.multiply(p, q);
            const double pq = dot(p, q);
            if (!(pq > 0.0)) {
                throw SolverStagnation("solve: search direction lost positive curvature",
                                       history);
            }
            const double step = rz / pq;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += step * p[i];
                r[i] -= step * q[i];
            }
            ++iter;
            rel = std::sqrt(dot(r, r)) / b_norm;
            history.push_back(rel);
            if (rel < best) {
                best = rel;
                best_iter = iter;
            }

            const std::size_t window = options.stagnation_window;
            drops.push_back(0.5 * rz * step);
            window_drop += drops.back();
            total_drop += drops.back();
            if (window > 0 && drops.size() > window) {
                window_drop -= drops[drops.size() - 1 - window];
            }
            if (window > 0 && drops.size() >= window && iter - best_iter >= window &&
                rel > std::max(options.tolerance, floor) &&
                !(window_drop > kStagnationRatio * total_drop)) {
                stalled = true;
                break;
            }
            precondition();
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }

        rel = true_residual();
        floor = rounding_floor(sys, x, b_norm);
        if (rel <= options.tolerance) {
            break;
        }
        if (rel <= kFloorSlack * floor) {
            result.precision_limited = true;
            break;
        }
        if (iter >= max_iters) {
            break;
        }
        if (stalled && restarts >= kMaxRestarts) {
            std::ostringstream msg;
            msg << "solve: no progress over " << options.stagnation_window
                << " iterations (relative residual " << rel << ")";
            throw SolverStagnation(msg.str(), history);
        }
        if (restarts >= kMaxRestarts) {
            break;
        }
        if (options.stagnation_window > 0 && !(rel < restart_residual)) {
            std::ostringstream msg;
            msg << "solve: restart did not lower the true residual (" << rel << ")";
            history.push_back(rel);
            throw SolverStagnation(msg.str(), history);
        }
        restart_residual = rel;
        ++restarts;
        stalled = false;
    }

    result.iterations = iter;
    result.relative_residual = rel;
    result.converged = rel <= options.tolerance;
    result.precision_limited = result.precision_limited && !result.converged;
    return result;
}

void write_system_dump(const SparseSystem& sys, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("system dump: cannot open " + path.string());
    }
    out.write("THSMSYS1", 8);
    put<std::uint64_t>(out, sys.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(sys.extent.height));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(sys.extent.width));
    put<double>(out, sys.lambda);
    put<std::int32_t>(out, sys.offsets.radius());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(sys.offsets.size()));
    for (const Offset& o : sys.offsets) {
        put<std::int32_t>(out, o.dy);
        put<std::int32_t>(out, o.dx);
    }
    for (double v : sys.diag) put(out, v);
    for (double v : sys.affinity) put(out, v);
    for (double v : sys.rhs) put(out, v);
    out.write("DATADIAG", 8);
    for (double v : sys.data_diag) put(out, v);
    if (!out) {
        throw std::runtime_error("system dump: write failed for " + path.string());
    }
}

SparseSystem read_system_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("system dump: cannot open " + path.string());
    }
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::memcmp(magic.data(), "THSMSYS1", 8) != 0) {
        throw std::runtime_error("system dump: bad magic");
    }
    SparseSystem sys;
    const auto n = get<std::uint64_t>(in);
    sys.extent.height = static_cast<int>(get<std::uint32_t>(in));
    sys.extent.width = static_cast<int>(get<std::uint32_t>(in));
    sys.lambda = get<double>(in);
    const auto radius = get<std::int32_t>(in);
    const auto k = get<std::uint32_t>(in);
    sys.offsets = NeighborOffsets(radius, false);
    if (n != sys.extent.pixels() || k != sys.offsets.size()) {
        throw std::runtime_error("system dump: inconsistent header");
    }
    for (std::uint32_t i = 0; i < k; ++i) {
        const Offset o{get<std::int32_t>(in), get<std::int32_t>(in)};
        if (!(o == sys.offsets[i])) {
            throw std::runtime_error("system dump: unexpected offset list");
        }
    }
    sys.diag.resize(n);
    sys.affinity.resize(n * k);
    sys.rhs.resize(n);
    for (double& v : sys.diag) v = get<double>(in);
    for (double& v : sys.affinity) v = get<double>(in);
    for (double& v : sys.rhs) v = get<double>(in);
    std::array<char, 8> trailer{};
    in.read(trailer.data(), trailer.size());
    if (in && std::memcmp(trailer.data(), "DATADIAG", 8) == 0) {
        sys.data_diag.resize(n);
        for (double& v : sys.data_diag) v = get<double>(in);
        return sys;
    }
    sys.data_diag = sys.diag;
    const auto flat = flat_offsets(sys.offsets, sys.extent);
    for (int y = 0; y < sys.extent.height; ++y) {
        for_each_pair_in_row(y, sys.extent, sys.offsets, flat,
                             [&](std::size_t i, std::size_t kk, std::size_t) {
                                 sys.data_diag[i] -= 2.0 * sys.lambda * sys.affinity[i * k + kk];
                             });
    }
    return sys;
}

}  // namespace thsmooth
