#include "thsmooth/guidance.hpp"

#include <cmath>

namespace thsmooth {

double guidance_distance(const ImageGrid& g, std::size_t i, std::size_t j) {
    if (i >= g.pixels() || j >= g.pixels()) {
        throw ContractError("guidance_distance: pixel index out of bounds");
    }
    const auto data = g.data();
    const int c = g.channels();
    if (c == 1) {
        return std::abs(data[i] - data[j]);
    }
    double sum = 0.0;
    for (int ch = 0; ch < c; ++ch) {
        sum += std::abs(data[i * c + ch] - data[j * c + ch]);
    }
    return sum / c;
}

double guidance_weight(double dist, double alpha, double delta) {
    return 1.0 / std::pow(dist + delta, alpha);
}

WeightField::WeightField(Extent extent, int radius, double alpha, double delta,
                         std::vector<double> weights)
    : extent_(extent),
      offsets_(radius, false),
      alpha_(alpha),
      delta_(delta),
      weights_(std::move(weights)) {
    if (weights_.size() != extent_.pixels() * offsets_.size()) {
        throw ContractError("WeightField: weight count does not match extent and radius");
    }
}

WeightField build_weight_field(const ImageGrid& g, const SmoothingParams& params,
                               Extent target) {
    if (g.extent() != target) {
        throw ContractError("build_weight_field: guide extent does not match the input");
    }
    return build_weight_field(g, params);
}

WeightField build_weight_field(const ImageGrid& g, const SmoothingParams& params) {
    const Extent e = g.extent();
    const NeighborOffsets window(params.r_s, false);
    const std::size_t k_count = window.size();
    std::vector<double> w(e.pixels() * k_count, 0.0);

#pragma omp parallel for schedule(static)
    for (int y = 0; y < e.height; ++y) {
        for (int x = 0; x < e.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
            for (std::size_t k = 0; k < k_count; ++k) {
                const auto j = neighbor_index(y, x, window[k], e);
                if (j < 0) {
                    continue;
                }
                const double d = guidance_distance(g, i, static_cast<std::size_t>(j));
                w[i * k_count + k] = guidance_weight(d, params.alpha, params.delta);
            }
        }
    }
    return WeightField(e, params.r_s, params.alpha, params.delta, std::move(w));
}

}  // namespace thsmooth
