#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "thsmooth/aux_fields.hpp"
#include "thsmooth/grid.hpp"
#include "thsmooth/guidance.hpp"

namespace thsmooth {

/// The per-iteration linear system M u = rhs with
///   M = diag(A) - 2*lambda*W,
///   A_ii  = sum_d mu_d + 2*lambda * sum_s W_ij,
///   rhs_i = sum_d mu_d (f_j + l_d) + 2*lambda * S_i.
///
/// W is stored per (pixel, smoothness offset) with clipped entries at 0.
struct SparseSystem {
    Extent extent;
    NeighborOffsets offsets{1, false};
    double lambda = 0.0;
    std::vector<double> diag;
    /// Data part of diag, sum_d mu_d. Products are formed as
    /// data_diag_i x_i + 2 lambda sum_j W_ij (x_i - x_j), which avoids the
    /// cancellation between a huge diagonal and its neighbors.
    std::vector<double> data_diag;
    std::vector<double> affinity;
    std::vector<double> rhs;

    [[nodiscard]] std::size_t size() const { return diag.size(); }
    [[nodiscard]] std::size_t offset_count() const { return offsets.size(); }

    /// out = M x
    void multiply(std::span<const double> x, std::span<double> out) const;
    /// Dense copy of M, row-major n*n. Intended for small test systems.
    [[nodiscard]] std::vector<double> dense() const;
};

/// Builds the system whose solution minimizes the quadratic surrogate for the
/// current (l, mu). Directed pair weights omega*mu are averaged with their
/// mirrored pair so that M is exactly symmetric.
[[nodiscard]] SparseSystem assemble(std::span<const double> f, std::span<const double> u_prev,
                                    const AuxFields& aux, const WeightField& weights,
                                    const SmoothingParams& params);

struct SpdReport {
    bool ok = true;
    /// min_i (diag_i - 2*lambda*sum_j |W_ij|)
    double worst_margin = 0.0;
    std::size_t worst_row = 0;
    bool symmetric = true;
};

/// Row-wise strict diagonal dominance (plus exact symmetry) check.
[[nodiscard]] SpdReport spd_check(const SparseSystem& sys);

enum class Preconditioner { jacobi, incomplete_cholesky };

struct SolveOptions {
    double tolerance = 1e-8;
    /// incomplete_cholesky is the modified zero fill-in variant. Jacobi takes
    /// thousands of iterations once flat regions lock with 1/(2a) weights.
    Preconditioner preconditioner = Preconditioner::incomplete_cholesky;
    /// 0 selects 10 * n.
    std::size_t max_iterations = 0;
    std::size_t stagnation_window = 50;
};

struct SolveResult {
    std::vector<double> solution;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    /// Stopped above the tolerance because the residual reached the level
    /// that rounding the solution to double already produces.
    bool precision_limited = false;
};

/// Residual stopped decreasing; carries the residual history.
class SolverStagnation : public std::runtime_error {
public:
    SolverStagnation(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}
    [[nodiscard]] const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Preconditioned conjugate gradients from `warm_start`.
/// Hitting max_iterations or the rounding floor is reported through
/// `converged`, not thrown. Throws SolverStagnation when a window of
/// iterations makes no energy-norm progress or a restart does not lower the
/// true residual.
[[nodiscard]] SolveResult solve(const SparseSystem& sys, std::span<const double> warm_start,
                                const SolveOptions& options = {});

/// Binary dump, little-endian:
///   char[8] "THSMSYS1"; u64 n; u32 height; u32 width; f64 lambda; i32 r_s;
///   u32 K; K x (i32 dy, i32 dx); f64 diag[n]; f64 affinity[n*K]; f64 rhs[n]
///   then an optional trailer: char[8] "DATADIAG"; f64 data_diag[n].
/// Without the trailer, data_diag is recomputed from diag and affinity.
void write_system_dump(const SparseSystem& sys, const std::filesystem::path& path);
[[nodiscard]] SparseSystem read_system_dump(const std::filesystem::path& path);

}  // namespace thsmooth
