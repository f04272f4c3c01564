#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "thsmooth/aux_fields.hpp"
#include "thsmooth/energy.hpp"
#include "thsmooth/guidance.hpp"

using namespace thsmooth;

namespace {

SmoothingParams sharpening(double lambda = 0.8) {
    SmoothingParams p;
    p.lambda = lambda;
    p.alpha = 0.5;
    p.a_d = p.a_s = 1e-7;
    p.b_d = p.b_s = 0.15;
    p.r_d = p.r_s = 1;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("energy_u matches the direct definition") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 10; ++t) {
        const ImageGrid f = oracle::patchy_image(rng, 9, 8);
        const ImageGrid u = oracle::random_image(rng, 9, 8);
        const ImageGrid g = oracle::random_image(rng, 9, 8, 3);
        SmoothingParams p = sharpening(0.3 + t);
        p.r_d = t % 3;
        p.r_s = 1 + t % 2;
        const WeightField w = build_weight_field(g, p);
        CHECK(rel(energy_u(u, f, w, p), oracle::energy(u, f, g, p)) < 1e-12);
    }
}

TEST_CASE("constant image has zero energy at u = f") {
    ImageGrid f(5, 5, 1);
    for (double& v : f.data()) v = 0.4;
    const SmoothingParams p = sharpening();
    const WeightField w = build_weight_field(f, p);
    CHECK(energy_u(f, f, w, p) == 0.0);
}

TEST_CASE("sandwich equalities at the updated auxiliaries") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 10; ++t) {
        const ImageGrid f = oracle::patchy_image(rng, 8, 8);
        ImageGrid u = f;
        std::normal_distribution<double> N(0.0, 0.1);
        for (double& v : u.data()) v += (t % 2) ? N(rng) : 0.0;
        const SmoothingParams p = sharpening(0.5 * (t + 1));
        const WeightField w = build_weight_field(f, p);
        const auto uf = u.channel_plane(0);
        const auto ff = f.channel_plane(0);
        const AuxFields aux = compute_aux(f.extent(), uf, ff, p);
        const double eu = energy_u(f.extent(), uf, ff, w, p);
        CHECK(rel(energy_ul(uf, ff, aux, w, p), eu) < 1e-8);
        CHECK(rel(energy_ulmu(uf, ff, aux, w, p), eu) < 1e-8);
    }
}

TEST_CASE("E_u is the minimum over l and E_ul the minimum over mu") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> Mu(0.5, 1.0);
    const ImageGrid f = oracle::random_image(rng, 6, 6);
    const ImageGrid u = oracle::random_image(rng, 6, 6);
    const SmoothingParams p = sharpening();
    const WeightField w = build_weight_field(f, p);
    const auto uf = u.channel_plane(0);
    const auto ff = f.channel_plane(0);
    const AuxFields best = compute_aux(f.extent(), uf, ff, p);
    const double eu = energy_u(f.extent(), uf, ff, w, p);
    const double eul = energy_ul(uf, ff, best, w, p);
    for (int t = 0; t < 20; ++t) {
        AuxFields other = best;
        for (double& l : other.l_d) l = (t % 3 == 0) ? 0.0 : U(rng);
        for (double& l : other.l_s) l = (t % 3 == 1) ? 0.0 : U(rng);
        CHECK(energy_ul(uf, ff, other, w, p) >= eu - 1e-9 * eu);
        AuxFields scaled = best;
        for (double& mu : scaled.mu_d) mu *= Mu(rng);
        for (double& mu : scaled.mu_s) mu *= Mu(rng);
        CHECK(energy_ulmu(uf, ff, scaled, w, p) >= eul - 1e-9 * eul);
    }
}

TEST_CASE("energy_ulmu rejects weights outside (0, 1/(2a)]") {
    const ImageGrid f(3, 3, 1);
    const SmoothingParams p = sharpening();
    const WeightField w = build_weight_field(f, p);
    const auto ff = f.channel_plane(0);
    AuxFields aux(f.extent(), p);
    aux.mu_s[0 * aux.smooth_count() + 7] = 2.0 / p.a_s;
    CHECK_THROWS_AS((void)energy_ulmu(ff, ff, aux, w, p), ContractError);
    aux = AuxFields(f.extent(), p);
    aux.mu_d[4] = 0.0;
    CHECK_THROWS_AS((void)energy_ulmu(ff, ff, aux, w, p), ContractError);
}

TEST_CASE("shape mismatches are contract errors") {
    const ImageGrid f(3, 3, 1);
    const SmoothingParams p = sharpening();
    const WeightField w = build_weight_field(f, p);
    const std::vector<double> short_plane(8, 0.0);
    const auto ff = f.channel_plane(0);
    CHECK_THROWS_AS((void)energy_u(f.extent(), short_plane, ff, w, p), ContractError);
    SmoothingParams wide = p;
    wide.r_s = 2;
    const AuxFields aux(f.extent(), wide);
    CHECK_THROWS_AS((void)energy_ul(ff, ff, aux, w, p), ContractError);
}

TEST_CASE("energy csv") {
    std::ostringstream os;
    write_energy_csv(os, {{0, 3.0, 3.0, 3.0, 0.0, 1.5}, {1, 2.0, 2.0, 2.0, 1e-9, 2.5}});
    const std::string s = os.str();
    CHECK(s.rfind("k,e_u,e_ul,e_ulmu,residual,millis\n", 0) == 0);
    CHECK(s.find("\n1,2,2,2,1.0000000000000001e-09,2.5\n") != std::string::npos);
}
