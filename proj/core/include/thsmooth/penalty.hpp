#pragma once

#include <cstdint>

namespace thsmooth {

/// Parameters {a, b} of the truncated Huber penalty. Requires 0 < a <= b.
struct HuberSpec {
    double a = 1e-7;
    double b = 10.0;

    [[nodiscard]] bool valid() const { return a > 0.0 && a <= b; }
    /// Constant value taken beyond the truncation point.
    [[nodiscard]] double ceiling() const { return b - 0.5 * a; }
};

/// Huber penalty: x^2/(2a) for |x| < a, |x| - a/2 otherwise.
[[nodiscard]] double huber(double x, double a);

/// huber(x, a) for |x| <= b, and the constant b - a/2 beyond.
[[nodiscard]] double truncated_huber(double x, const HuberSpec& spec);

/// Outlier absorber: 0 when |grad| <= b, grad itself otherwise.
[[nodiscard]] inline double l_update(double grad, const HuberSpec& spec) {
    return (grad <= spec.b && grad >= -spec.b) ? 0.0 : grad;
}

/// Half-quadratic weight for residual = grad - l, in (0, 1/(2a)].
[[nodiscard]] double mu_update(double residual, double a);

/// Companion term of the half-quadratic form of huber:
/// min over mu in (0, 1/(2a)] of mu*x^2 + psi(mu, a) equals huber(x, a).
/// Closed form 1/(4mu) - a/2.
[[nodiscard]] double psi(double mu, double a);

/// Counts of linear-branch evaluations, used to check that a configuration
/// stays inside the quadratic regime (a = b). Counting is off unless enabled.
struct BranchCounters {
    std::uint64_t huber_linear = 0;
    std::uint64_t mu_linear = 0;
};

void set_branch_counting(bool enabled);
void reset_branch_counters();
[[nodiscard]] BranchCounters branch_counters();

}  // namespace thsmooth
