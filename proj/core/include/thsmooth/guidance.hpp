#pragma once

#include <cstddef>
#include <vector>

#include "thsmooth/grid.hpp"

namespace thsmooth {

/// Distance between two guide pixels: |g_i - g_j| for one channel, the mean
/// of per-channel absolute differences for color guides.
[[nodiscard]] double guidance_distance(const ImageGrid& g, std::size_t i, std::size_t j);

/// 1 / (dist + delta)^alpha
[[nodiscard]] double guidance_weight(double dist, double alpha, double delta);

/// Static pair weights over the smoothness window (center excluded).
///
/// Stored per (pixel, offset); entries whose neighbor falls outside the image
/// hold 0 and are never read by the energy or the solver.
class WeightField {
public:
    WeightField(Extent extent, int radius, double alpha, double delta,
                std::vector<double> weights);

    [[nodiscard]] const Extent& extent() const { return extent_; }
    [[nodiscard]] const NeighborOffsets& offsets() const { return offsets_; }
    [[nodiscard]] std::size_t offset_count() const { return offsets_.size(); }
    [[nodiscard]] int radius() const { return offsets_.radius(); }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double delta() const { return delta_; }

    [[nodiscard]] double weight(std::size_t pixel, std::size_t k) const {
        return weights_[pixel * offsets_.size() + k];
    }
    [[nodiscard]] const std::vector<double>& values() const { return weights_; }

private:
    Extent extent_;
    NeighborOffsets offsets_;
    double alpha_;
    double delta_;
    std::vector<double> weights_;
};

/// Computes omega for every in-bounds pair of the r_s window on guide g.
/// Throws ContractError when g's extent differs from `target`.
[[nodiscard]] WeightField build_weight_field(const ImageGrid& g, const SmoothingParams& params,
                                             Extent target);
[[nodiscard]] WeightField build_weight_field(const ImageGrid& g, const SmoothingParams& params);

}  // namespace thsmooth
