#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thsmooth/grid.hpp"
#include "thsmooth/penalty.hpp"

namespace thsmooth {

/// Per-(pixel, offset) auxiliary variables of one channel plane: the outlier
/// absorbers l and half-quadratic weights mu for the data window (center
/// included, radius r_d) and the smoothness window (center excluded, r_s).
///
/// Clipped entries hold l = 0 and mu = 1/(2a) and are ignored downstream.
struct AuxFields {
    AuxFields(Extent extent, const SmoothingParams& params);

    Extent extent;
    NeighborOffsets data_offsets;
    NeighborOffsets smooth_offsets;
    std::vector<double> l_d;
    std::vector<double> mu_d;
    std::vector<double> l_s;
    std::vector<double> mu_s;

    [[nodiscard]] std::size_t data_count() const { return data_offsets.size(); }
    [[nodiscard]] std::size_t smooth_count() const { return smooth_offsets.size(); }
};

[[nodiscard]] inline HuberSpec data_spec(const SmoothingParams& p) { return {p.a_d, p.b_d}; }
[[nodiscard]] inline HuberSpec smooth_spec(const SmoothingParams& p) { return {p.a_s, p.b_s}; }

/// l <- l_update(grad) then mu <- mu_update(grad - l) for every pair, with
/// grad_d = u_i - f_j and grad_s = u_i - u_j evaluated at `u`.
void update_aux(AuxFields& aux, std::span<const double> u, std::span<const double> f,
                const SmoothingParams& params);

[[nodiscard]] AuxFields compute_aux(Extent extent, std::span<const double> u,
                                    std::span<const double> f, const SmoothingParams& params);

}  // namespace thsmooth
