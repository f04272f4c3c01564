#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "thsmooth/aux_fields.hpp"
#include "thsmooth/grid.hpp"
#include "thsmooth/guidance.hpp"

namespace thsmooth {

/// One audit row per outer iteration k, energies evaluated at u^k with the
/// auxiliary fields freshly updated from u^k.
struct EnergyReport {
    int iteration = 0;
    double e_u = 0.0;
    double e_ul = 0.0;
    double e_ulmu = 0.0;
    double residual = 0.0;
    double millis = 0.0;
};

/// Objective: data term over N_d plus lambda * omega-weighted smoothness
/// term over N_s, both with the truncated Huber penalty.
[[nodiscard]] double energy_u(Extent extent, std::span<const double> u, std::span<const double> f,
                              const WeightField& weights, const SmoothingParams& params);

/// Sum of energy_u over all channels, omega shared.
[[nodiscard]] double energy_u(const ImageGrid& u, const ImageGrid& f, const WeightField& weights,
                              const SmoothingParams& params);

/// Huber plus weighted L0 form with explicit l fields (mu fields ignored).
[[nodiscard]] double energy_ul(std::span<const double> u, std::span<const double> f,
                               const AuxFields& aux, const WeightField& weights,
                               const SmoothingParams& params);

/// Quadratic-in-u form with explicit l and mu fields. Throws ContractError when
/// any in-bounds mu leaves (0, 1/(2a)].
[[nodiscard]] double energy_ulmu(std::span<const double> u, std::span<const double> f,
                                 const AuxFields& aux, const WeightField& weights,
                                 const SmoothingParams& params);

/// CSV with header `k,e_u,e_ul,e_ulmu,residual,millis`.
void write_energy_csv(std::ostream& out, const std::vector<EnergyReport>& reports);

}  // namespace thsmooth
