#include <doctest.h>

#include <algorithm>
#include <set>

#include "thsmooth/grid.hpp"

using namespace thsmooth;

TEST_CASE("grid rejects bad shapes") {
    CHECK_THROWS_AS(ImageGrid(0, 4, 1), ContractError);
    CHECK_THROWS_AS(ImageGrid(4, 4, 2), ContractError);
    CHECK_THROWS_AS(ImageGrid(4, 4, 1, 0.0), ContractError);
    CHECK_THROWS_AS(ImageGrid(2, 2, 1, std::vector<double>(3)), ContractError);
    CHECK_NOTHROW(ImageGrid(1, 1, 3));
}

TEST_CASE("samples are row-major and channel-interleaved") {
    ImageGrid g(2, 3, 3);
    g.at(1, 2, 1) = 0.5;
    CHECK(g.data()[(1 * 3 + 2) * 3 + 1] == 0.5);
    CHECK(g.pixels() == 6);
    CHECK(g.extent() == Extent{2, 3});
}

TEST_CASE("channel planes round-trip") {
    ImageGrid g(3, 4, 3);
    for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] = 0.01 * static_cast<double>(i);
    ImageGrid h(3, 4, 3);
    for (int c = 0; c < 3; ++c) h.set_channel_plane(c, g.channel_plane(c));
    CHECK(h == g);
    CHECK_THROWS_AS((void)g.channel_plane(3), ContractError);
    CHECK_THROWS_AS(h.set_channel_plane(0, std::vector<double>(5)), ContractError);
}

TEST_CASE("clamp only touches out-of-range samples") {
    ImageGrid g(1, 4, 1, {-0.5, 0.25, 1.0, 1.5});
    g.clamp();
    CHECK(g.data()[0] == 0.0);
    CHECK(g.data()[1] == 0.25);
    CHECK(g.data()[2] == 1.0);
    CHECK(g.data()[3] == 1.0);
}

TEST_CASE("validate_params reports every violation") {
    SmoothingParams p;
    CHECK(validate_params(p).empty());
    p.lambda = 0.0;
    p.a_d = 2.0;
    p.b_d = 1.0;
    p.r_s = -1;
    const auto v = validate_params(p);
    CHECK(v.size() == 3);
    CHECK_THROWS_AS(require_valid(p), ContractError);
    p = {};
    p.delta = 0.0;
    CHECK(validate_params(p).size() == 1);
}

TEST_CASE("neighbor windows") {
    for (int r = 0; r <= 5; ++r) {
        const NeighborOffsets with(r, true);
        const NeighborOffsets without(r, false);
        CHECK(with.size() == static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));
        CHECK(without.size() + 1 == with.size());
        for (std::size_t k = 0; k < without.size(); ++k) {
            const Offset a = without[k];
            const Offset b = without[without.mirror(k)];
            CHECK(a.dy == -b.dy);
            CHECK(a.dx == -b.dx);
        }
    }
    CHECK_THROWS_AS(NeighborOffsets(-1, false), ContractError);
}

TEST_CASE("neighbors clip at the border") {
    const Extent e{5, 7};
    CHECK(neighbors(0, 1, e, false).size() == 3);
    CHECK(neighbors(0, 1, e, true).size() == 4);
    CHECK(neighbors(3, 1, e, false).size() == 5);
    CHECK(neighbors(8, 1, e, false).size() == 8);
    CHECK(neighbors(0, 0, e, true) == std::vector<std::size_t>{0});
    CHECK(neighbors(0, 0, e, false).empty());
    // r = 2 at a corner of a 5x7 grid: 3x3 in-bounds block minus the center.
    CHECK(neighbors(34, 2, e, false).size() == 8);
    CHECK_THROWS_AS((void)neighbors(35, 1, e, false), ContractError);

    // Every neighbor relation is mutual.
    for (std::size_t i = 0; i < e.pixels(); ++i) {
        for (std::size_t j : neighbors(i, 2, e, false)) {
            const auto back = neighbors(j, 2, e, false);
            CHECK(std::find(back.begin(), back.end(), i) != back.end());
        }
    }
}

TEST_CASE("neighbor_index") {
    const Extent e{3, 3};
    CHECK(neighbor_index(0, 0, {-1, 0}, e) == -1);
    CHECK(neighbor_index(1, 1, {1, 1}, e) == 8);
    CHECK(neighbor_index(2, 2, {0, 1}, e) == -1);
}
