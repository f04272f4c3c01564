#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "thsmooth/aux_fields.hpp"
#include "thsmooth/energy.hpp"
#include "thsmooth/grid.hpp"
#include "thsmooth/solver.hpp"

namespace thsmooth {

/// Named parameter regimes.
///
///   tv_approx       a_d = b_d > I_m, a_s = eps, b_s > I_m, alpha = 0, r_d = 0, r_s = 1
///   wls_like        tv_approx with alpha = 0.2, g = f, N = 1
///   tvl1_like       a_d = eps, b_d > I_m, a_s = eps, b_s > I_m, alpha = 0, r_d = 0, r_s = 1
///   group1_detail   a = eps, b > I_m, r_d = r_s (2), alpha = 0.2, g = f, N = 1, lambda usually 1..50
///   group2_sharpen  a = eps, b_d = b_s in [0.05, 0.2] I_m, alpha = 0.5, r in 1..5, N = 10
///   group3_guided   as group2_sharpen, with a separate guide image
///   group4_texture  a = eps, b > I_m, r_d = r_s in 1..3, alpha = 0.5, g = f, N = 10, lambda usually <= 1 on images
///
/// "b > I_m" is materialized as b = 10 I_m.
enum class Preset {
    tv_approx,
    wls_like,
    tvl1_like,
    group1_detail,
    group2_sharpen,
    group3_guided,
    group4_texture,
};

/// Knobs a caller may adjust on top of a preset. Which ones are allowed
/// depends on the preset; anything regime-defining is rejected.
struct PresetOverrides {
    std::optional<double> lambda;
    std::optional<double> alpha;
    /// Sets r_d = r_s (or r_s alone for presets with r_d = 0).
    std::optional<int> radius;
    /// Sets b_d = b_s.
    std::optional<double> b;
    std::optional<int> n_iters;
};

class PresetError : public ContractError {
public:
    using ContractError::ContractError;
};

[[nodiscard]] std::string_view preset_name(Preset p);
/// Throws PresetError for unknown names.
[[nodiscard]] Preset preset_from_name(std::string_view name);
[[nodiscard]] const std::vector<Preset>& all_presets();

/// Fully resolved parameters for a preset; throws PresetError when an override
/// touches a knob the regime fixes or leaves its documented range.
[[nodiscard]] SmoothingParams preset(Preset p, const PresetOverrides& overrides = {});

/// Whether the preset expects g = f (everything except group3_guided).
[[nodiscard]] bool preset_uses_self_guidance(Preset p);

/// Energy increased between iterations beyond the allowed slack.
class DescentViolation : public std::runtime_error {
public:
    DescentViolation(const std::string& what, std::vector<EnergyReport> reports)
        : std::runtime_error(what), reports_(std::move(reports)) {}
    [[nodiscard]] const std::vector<EnergyReport>& reports() const { return reports_; }

private:
    std::vector<EnergyReport> reports_;
};

struct SmoothOptions {
    /// Evaluate the energy chain per iteration and enforce descent.
    bool audit = false;
    /// Absolute slack on E_u(u^{k+1}) <= E_u(u^k).
    double descent_slack = 1e-10;
    SolveOptions solver;
    /// Called after the auxiliary update of every (iteration, channel).
    std::function<void(int iteration, int channel, const AuxFields&)> on_aux;
    /// Called with every assembled system before it is solved.
    std::function<void(int iteration, int channel, const SparseSystem&)> on_system;
};

struct SolveStats {
    int iteration = 0;
    int channel = 0;
    std::size_t cg_iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    bool precision_limited = false;
};

struct SmoothResult {
    ImageGrid u;
    /// One row per iterate u^0 .. u^N when audit is enabled.
    std::vector<EnergyReport> reports;
    std::vector<SolveStats> solves;
};

/// Runs exactly params.n_iters outer iterations starting from u^0 = f:
/// update l, update mu, assemble, solve. Channels are solved independently
/// with a shared guidance weight field. The result is not clamped.
[[nodiscard]] SmoothResult smooth(const ImageGrid& f, const ImageGrid& g,
                                  const SmoothingParams& params, const SmoothOptions& options = {});

}  // namespace thsmooth
