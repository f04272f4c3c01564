#include "thsmooth/aux_fields.hpp"

namespace thsmooth {

AuxFields::AuxFields(Extent e, const SmoothingParams& params)
    : extent(e),
      data_offsets(params.r_d, true),
      smooth_offsets(params.r_s, false),
      l_d(e.pixels() * data_offsets.size(), 0.0),
      mu_d(e.pixels() * data_offsets.size(), 1.0 / (2.0 * params.a_d)),
      l_s(e.pixels() * smooth_offsets.size(), 0.0),
      mu_s(e.pixels() * smooth_offsets.size(), 1.0 / (2.0 * params.a_s)) {}

void update_aux(AuxFields& aux, std::span<const double> u, std::span<const double> f,
                const SmoothingParams& params) {
    const Extent e = aux.extent;
    if (u.size() != e.pixels() || f.size() != e.pixels()) {
        throw ContractError("update_aux: plane size does not match extent");
    }
    const HuberSpec sd = data_spec(params);
    const HuberSpec ss = smooth_spec(params);
    const std::size_t kd = aux.data_count();
    const std::size_t ks = aux.smooth_count();

#pragma omp parallel for schedule(static)
    for (int y = 0; y < e.height; ++y) {
        for (int x = 0; x < e.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
            for (std::size_t k = 0; k < kd; ++k) {
                const auto j = neighbor_index(y, x, aux.data_offsets[k], e);
                if (j < 0) continue;
                const double grad = u[i] - f[static_cast<std::size_t>(j)];
                const double l = l_update(grad, sd);
                aux.l_d[i * kd + k] = l;
                aux.mu_d[i * kd + k] = mu_update(grad - l, sd.a);
            }
            for (std::size_t k = 0; k < ks; ++k) {
                const auto j = neighbor_index(y, x, aux.smooth_offsets[k], e);
                if (j < 0) continue;
                const double grad = u[i] - u[static_cast<std::size_t>(j)];
                const double l = l_update(grad, ss);
                aux.l_s[i * ks + k] = l;
                aux.mu_s[i * ks + k] = mu_update(grad - l, ss.a);
            }
        }
    }
}

AuxFields compute_aux(Extent extent, std::span<const double> u, std::span<const double> f,
                      const SmoothingParams& params) {
    AuxFields aux(extent, params);
    update_aux(aux, u, f, params);
    return aux;
}

}  // namespace thsmooth
