#include "thsmooth/penalty.hpp"

#include <atomic>
#include <cmath>

#include "thsmooth/grid.hpp"

namespace thsmooth {
namespace {

std::atomic<bool> g_counting{false};
std::atomic<std::uint64_t> g_huber_linear{0};
std::atomic<std::uint64_t> g_mu_linear{0};

void bump(std::atomic<std::uint64_t>& counter) {
    if (g_counting.load(std::memory_order_relaxed)) {
        counter.fetch_add(1, std::memory_order_relaxed);
    }
}

}  // namespace

double huber(double x, double a) {
    if (!(a > 0.0)) {
        throw ContractError("huber: a must be > 0");
    }
    const double ax = std::abs(x);
    if (ax < a) {
        return x * x / (2.0 * a);
    }
    bump(g_huber_linear);
    return ax - 0.5 * a;
}

double truncated_huber(double x, const HuberSpec& spec) {
    if (!spec.valid()) {
        throw ContractError("truncated_huber: requires 0 < a <= b");
    }
    if (std::abs(x) <= spec.b) {
        return huber(x, spec.a);
    }
    return spec.ceiling();
}

double mu_update(double residual, double a) {
    const double r = std::abs(residual);
    if (r < a) {
        return 1.0 / (2.0 * a);
    }
    bump(g_mu_linear);
    return 1.0 / (2.0 * r);
}

double psi(double mu, double a) {
    if (!(a > 0.0) || !(mu > 0.0) || mu > 1.0 / (2.0 * a)) {
        throw ContractError("psi: mu must lie in (0, 1/(2a)]");
    }
    return 1.0 / (4.0 * mu) - 0.5 * a;
}

void set_branch_counting(bool enabled) { g_counting.store(enabled); }

void reset_branch_counters() {
    g_huber_linear.store(0);
    g_mu_linear.store(0);
}

BranchCounters branch_counters() {
    return {g_huber_linear.load(), g_mu_linear.load()};
}

}  // namespace thsmooth
