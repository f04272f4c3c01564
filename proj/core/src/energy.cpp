#include "thsmooth/energy.hpp"

#include <cmath>
#include <exception>
#include <ostream>

#include "thsmooth/penalty.hpp"

namespace thsmooth {
namespace {

// Neumaier compensated accumulator.
struct Accumulator {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

void require_shapes(Extent e, std::span<const double> u, std::span<const double> f,
                    const WeightField& w) {
    if (u.size() != e.pixels() || f.size() != e.pixels() || w.extent() != e) {
        throw ContractError("energy: shape mismatch between u, f and the weight field");
    }
}

void require_aux(const AuxFields& aux, const WeightField& w) {
    if (aux.extent != w.extent() || aux.smooth_count() != w.offset_count()) {
        throw ContractError("energy: auxiliary fields do not match the weight field");
    }
}

// Row-parallel reduction; rows are combined in order so the result does not
// depend on the thread count.
template <typename RowFn>
double reduce_rows(int height, RowFn&& row_fn) {
    std::vector<Accumulator> rows(static_cast<std::size_t>(height));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(height));
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        try {
            row_fn(y, rows[static_cast<std::size_t>(y)]);
        } catch (...) {
            errors[static_cast<std::size_t>(y)] = std::current_exception();
        }
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    Accumulator total;
    for (const auto& r : rows) {
        total.add(r.sum);
        total.add(r.carry);
    }
    return total.value();
}

double l0(double l) { return l != 0.0 ? 1.0 : 0.0; }

void check_mu(double mu, double a) {
    if (!(mu > 0.0) || mu > 1.0 / (2.0 * a)) {
        throw ContractError("energy_ulmu: mu outside (0, 1/(2a)]");
    }
}

}  // namespace

double energy_u(Extent e, std::span<const double> u, std::span<const double> f,
                const WeightField& weights, const SmoothingParams& p) {
    require_shapes(e, u, f, weights);
    const NeighborOffsets data_win(p.r_d, true);
    const auto& smooth_win = weights.offsets();
    const HuberSpec sd{p.a_d, p.b_d};
    const HuberSpec ss{p.a_s, p.b_s};
    return reduce_rows(e.height, [&](int y, Accumulator& acc) {
        for (int x = 0; x < e.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
            for (const Offset& o : data_win) {
                const auto j = neighbor_index(y, x, o, e);
                if (j >= 0) acc.add(truncated_huber(u[i] - f[j], sd));
            }
            for (std::size_t k = 0; k < smooth_win.size(); ++k) {
                const auto j = neighbor_index(y, x, smooth_win[k], e);
                if (j >= 0) {
                    acc.add(p.lambda * weights.weight(i, k) * truncated_huber(u[i] - u[j], ss));
                }
            }
        }
    });
}

double energy_u(const ImageGrid& u, const ImageGrid& f, const WeightField& weights,
                const SmoothingParams& params) {
    if (u.extent() != f.extent() || u.channels() != f.channels()) {
        throw ContractError("energy_u: u and f differ in shape");
    }
    Accumulator total;
    for (int c = 0; c < u.channels(); ++c) {
        const auto uc = u.channel_plane(c);
        const auto fc = f.channel_plane(c);
        total.add(energy_u(u.extent(), uc, fc, weights, params));
    }
    return total.value();
}

double energy_ul(std::span<const double> u, std::span<const double> f, const AuxFields& aux,
                 const WeightField& weights, const SmoothingParams& p) {
    const Extent e = aux.extent;
    require_shapes(e, u, f, weights);
    require_aux(aux, weights);
    const std::size_t kd = aux.data_count();
    const std::size_t ks = aux.smooth_count();
    const double cap_d = p.b_d - 0.5 * p.a_d;
    const double cap_s = p.b_s - 0.5 * p.a_s;
    return reduce_rows(e.height, [&](int y, Accumulator& acc) {
        for (int x = 0; x < e.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
            for (std::size_t k = 0; k < kd; ++k) {
                const auto j = neighbor_index(y, x, aux.data_offsets[k], e);
                if (j < 0) continue;
                const double l = aux.l_d[i * kd + k];
                acc.add(huber(u[i] - f[j] - l, p.a_d) + cap_d * l0(l));
            }
            for (std::size_t k = 0; k < ks; ++k) {
                const auto j = neighbor_index(y, x, aux.smooth_offsets[k], e);
                if (j < 0) continue;
                const double l = aux.l_s[i * ks + k];
                acc.add(p.lambda * weights.weight(i, k) *
                        (huber(u[i] - u[j] - l, p.a_s) + cap_s * l0(l)));
            }
        }
    });
}

double energy_ulmu(std::span<const double> u, std::span<const double> f, const AuxFields& aux,
                   const WeightField& weights, const SmoothingParams& p) {
    const Extent e = aux.extent;
    require_shapes(e, u, f, weights);
    require_aux(aux, weights);
    const std::size_t kd = aux.data_count();
    const std::size_t ks = aux.smooth_count();
    const double cap_d = p.b_d - 0.5 * p.a_d;
    const double cap_s = p.b_s - 0.5 * p.a_s;
    return reduce_rows(e.height, [&](int y, Accumulator& acc) {
        for (int x = 0; x < e.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * e.width + x;
            for (std::size_t k = 0; k < kd; ++k) {
                const auto j = neighbor_index(y, x, aux.data_offsets[k], e);
                if (j < 0) continue;
                const double l = aux.l_d[i * kd + k];
                const double mu = aux.mu_d[i * kd + k];
                check_mu(mu, p.a_d);
                const double r = u[i] - f[j] - l;
                acc.add(mu * r * r + psi(mu, p.a_d) + cap_d * l0(l));
            }
            for (std::size_t k = 0; k < ks; ++k) {
                const auto j = neighbor_index(y, x, aux.smooth_offsets[k], e);
                if (j < 0) continue;
                const double l = aux.l_s[i * ks + k];
                const double mu = aux.mu_s[i * ks + k];
                check_mu(mu, p.a_s);
                const double r = u[i] - u[j] - l;
                acc.add(p.lambda * weights.weight(i, k) *
                        (mu * r * r + psi(mu, p.a_s) + cap_s * l0(l)));
            }
        }
    });
}

void write_energy_csv(std::ostream& out, const std::vector<EnergyReport>& reports) {
    out << "k,e_u,e_ul,e_ulmu,residual,millis\n";
    const auto old_precision = out.precision(17);
    for (const auto& r : reports) {
        out << r.iteration << ',' << r.e_u << ',' << r.e_ul << ',' << r.e_ulmu << ','
            << r.residual << ',' << r.millis << '\n';
    }
    out.precision(old_precision);
}

}  // namespace thsmooth
