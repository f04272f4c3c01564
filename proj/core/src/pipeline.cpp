#include "thsmooth/pipeline.hpp"

#include <array>
#include <chrono>
#include <sstream>

#include "thsmooth/guidance.hpp"

namespace thsmooth {
namespace {

constexpr double kAboveRange = 10.0;  // b > I_m with I_m = 1

struct PresetInfo {
    Preset id;
    std::string_view name;
};

constexpr std::array<PresetInfo, 7> kPresets{{
    {Preset::tv_approx, "tv_approx"},
    {Preset::wls_like, "wls_like"},
    {Preset::tvl1_like, "tvl1_like"},
    {Preset::group1_detail, "group1_detail"},
    {Preset::group2_sharpen, "group2_sharpen"},
    {Preset::group3_guided, "group3_guided"},
    {Preset::group4_texture, "group4_texture"},
}};

[[noreturn]] void reject(Preset p, std::string_view what) {
    std::ostringstream msg;
    msg << "preset " << preset_name(p) << ": " << what;
    throw PresetError(msg.str());
}

void forbid(Preset p, bool present, std::string_view knob) {
    if (present) {
        std::ostringstream msg;
        msg << knob << " is fixed by this regime and cannot be overridden";
        reject(p, msg.str());
    }
}

int radius_in(Preset p, const std::optional<int>& r, int fallback, int lo, int hi) {
    if (!r) return fallback;
    if (*r < lo || *r > hi) {
        std::ostringstream msg;
        msg << "radius must lie in [" << lo << ", " << hi << "]";
        reject(p, msg.str());
    }
    return *r;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
        .count();
}

}  // namespace

std::string_view preset_name(Preset p) {
    for (const auto& info : kPresets) {
        if (info.id == p) return info.name;
    }
    return "unknown";
}

Preset preset_from_name(std::string_view name) {
    for (const auto& info : kPresets) {
        if (info.name == name) return info.id;
    }
    throw PresetError("unknown preset: " + std::string(name));
}

const std::vector<Preset>& all_presets() {
    static const std::vector<Preset> presets = [] {
        std::vector<Preset> v;
        for (const auto& info : kPresets) v.push_back(info.id);
        return v;
    }();
    return presets;
}

bool preset_uses_self_guidance(Preset p) { return p != Preset::group3_guided; }

SmoothingParams preset(Preset p, const PresetOverrides& o) {
    SmoothingParams s;
    const double eps = s.epsilon;
    forbid(p, o.alpha.has_value(), "alpha");

    switch (p) {
        case Preset::tv_approx:
        case Preset::wls_like:
        case Preset::tvl1_like: {
            forbid(p, o.radius.has_value(), "radius");
            forbid(p, o.b.has_value(), "b");
            s.r_d = 0;
            s.r_s = 1;
            s.a_s = eps;
            s.b_s = kAboveRange;
            s.b_d = kAboveRange;
            if (p == Preset::tvl1_like) {
                s.a_d = eps;
            } else {
                s.a_d = kAboveRange;
            }
            s.lambda = o.lambda.value_or(1.0);
            if (p == Preset::wls_like) {
                forbid(p, o.n_iters.has_value(), "n_iters");
                s.alpha = 0.2;
                s.n_iters = 1;
            } else {
                s.alpha = 0.0;
                s.n_iters = o.n_iters.value_or(10);
            }
            break;
        }
        case Preset::group1_detail: {
            forbid(p, o.b.has_value(), "b");
            forbid(p, o.n_iters.has_value(), "n_iters");
            s.a_d = s.a_s = eps;
            s.b_d = s.b_s = kAboveRange;
            s.r_d = s.r_s = radius_in(p, o.radius, 2, 1, 5);
            s.alpha = 0.2;
            s.n_iters = 1;
            s.lambda = o.lambda.value_or(20.0);
            break;
        }
        case Preset::group2_sharpen:
        case Preset::group3_guided: {
            forbid(p, o.n_iters.has_value(), "n_iters");
            const double b = o.b.value_or(0.1);
            if (b < 0.05 || b > 0.2) {
                reject(p, "b must lie in [0.05, 0.2] * I_m");
            }
            s.a_d = s.a_s = eps;
            s.b_d = s.b_s = b;
            s.r_d = s.r_s = radius_in(p, o.radius, p == Preset::group2_sharpen ? 1 : 2, 1, 5);
            s.alpha = 0.5;
            s.n_iters = 10;
            s.lambda = o.lambda.value_or(p == Preset::group2_sharpen ? 1.0 : 0.1);
            break;
        }
        case Preset::group4_texture: {
            forbid(p, o.b.has_value(), "b");
            forbid(p, o.n_iters.has_value(), "n_iters");
            s.a_d = s.a_s = eps;
            s.b_d = s.b_s = kAboveRange;
            s.r_d = s.r_s = radius_in(p, o.radius, 1, 1, 3);
            s.alpha = 0.5;
            s.n_iters = 10;
            s.lambda = o.lambda.value_or(0.5);
            break;
        }
    }
    const auto violations = validate_params(s);
    if (!violations.empty()) {
        reject(p, "resolved parameters are invalid: " + violations.front());
    }
    return s;
}

SmoothResult smooth(const ImageGrid& f, const ImageGrid& g, const SmoothingParams& params,
                    const SmoothOptions& options) {
    require_valid(params);
    if (f.extent() != g.extent()) {
        throw ContractError("smooth: guide extent does not match the input");
    }

    SmoothResult result;
    result.u = f;
    const Extent e = f.extent();
    const int channels = f.channels();
    const WeightField weights = build_weight_field(g, params, e);

    std::vector<std::vector<double>> f_planes;
    std::vector<std::vector<double>> u_planes;
    for (int c = 0; c < channels; ++c) {
        f_planes.push_back(f.channel_plane(c));
        u_planes.push_back(f_planes.back());
    }

    auto audit_row = [&](int k, const std::vector<AuxFields>& aux) {
        EnergyReport row;
        row.iteration = k;
        for (int c = 0; c < channels; ++c) {
            row.e_u += energy_u(e, u_planes[c], f_planes[c], weights, params);
            row.e_ul += energy_ul(u_planes[c], f_planes[c], aux[c], weights, params);
            row.e_ulmu += energy_ulmu(u_planes[c], f_planes[c], aux[c], weights, params);
        }
        return row;
    };

    std::vector<AuxFields> aux;
    aux.reserve(static_cast<std::size_t>(channels));
    for (int c = 0; c < channels; ++c) aux.emplace_back(e, params);

    for (int k = 0; k < params.n_iters; ++k) {
        const auto start = std::chrono::steady_clock::now();
        for (int c = 0; c < channels; ++c) {
            update_aux(aux[c], u_planes[c], f_planes[c], params);
            if (options.on_aux) options.on_aux(k, c, aux[c]);
        }
        EnergyReport row;
        if (options.audit) row = audit_row(k, aux);

        for (int c = 0; c < channels; ++c) {
            const SparseSystem sys = assemble(f_planes[c], u_planes[c], aux[c], weights, params);
            if (options.on_system) options.on_system(k, c, sys);
            SolveResult solved = solve(sys, u_planes[c], options.solver);
            result.solves.push_back(
                {k, c, solved.iterations, solved.relative_residual, solved.converged,
                 solved.precision_limited});
            row.residual = std::max(row.residual, solved.relative_residual);
            u_planes[c] = std::move(solved.solution);
        }
        if (options.audit) {
            row.millis = elapsed_ms(start);
            result.reports.push_back(row);
        }
    }

    if (options.audit) {
        for (int c = 0; c < channels; ++c) {
            update_aux(aux[c], u_planes[c], f_planes[c], params);
        }
        result.reports.push_back(audit_row(params.n_iters, aux));
        for (std::size_t k = 1; k < result.reports.size(); ++k) {
            const double before = result.reports[k - 1].e_u;
            const double after = result.reports[k].e_u;
            if (after > before + options.descent_slack) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "energy increased at iteration " << k << ": " << before << " -> "
                    << after;
                throw DescentViolation(msg.str(), result.reports);
            }
        }
    }

    for (int c = 0; c < channels; ++c) {
        result.u.set_channel_plane(c, u_planes[c]);
    }
    return result;
}

}  // namespace thsmooth
