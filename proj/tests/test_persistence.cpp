#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pterrace/error.hpp"
#include "pterrace/persistence.hpp"

using namespace pterrace;

namespace {

Barcode bars(std::vector<PersistencePair> pairs) {
    Barcode b;
    b.pairs = std::move(pairs);
    b.max_dim = 1;
    return b;
}

Barcode compute(const oracle::Shape& shape, const std::vector<double>& v, int max_dim) {
    return superlevel_persistence(shape, v, max_dim);
}

long euler_from_barcode(const Barcode& b, int max_dim, double y) {
    long chi = 0;
    for (int k = 0; k <= max_dim; ++k) chi += (k % 2 ? -1 : 1) * static_cast<long>(betti_at(b, k, y));
    return chi;
}

}  // namespace

TEST_CASE("constant grid gives a single clamped essential class") {
    for (const oracle::Shape& shape : {oracle::Shape{5}, oracle::Shape{4, 3}, oracle::Shape{3, 3, 3}}) {
        const std::vector<double> v(oracle::volume(shape), 2.5);
        const auto b = compute(shape, v, static_cast<int>(shape.size()));
        REQUIRE(b.pairs.size() == 1);
        CHECK(b.pairs[0] == PersistencePair{0, 2.5, 2.5, true});
    }
}

TEST_CASE("1D grid [1, 0, 2]") {
    const auto b = compute({3}, {1.0, 0.0, 2.0}, 0);
    REQUIRE(b.pairs.size() == 2);
    CHECK(b.pairs[0] == PersistencePair{0, 2.0, 0.0, true});
    CHECK(b.pairs[1] == PersistencePair{0, 1.0, 0.0, false});
    for (double y : {2.0, 1.5, 1.0, 0.5, 0.0})
        CHECK(betti_at(b, 0, y) == oracle::components_above({3}, {1.0, 0.0, 2.0}, y));
}

TEST_CASE("5x5 ring has one loop from 1 down to 0") {
    std::vector<double> v(25, 0.0);
    for (std::size_t r = 1; r <= 3; ++r)
        for (std::size_t c = 1; c <= 3; ++c)
            if (!(r == 2 && c == 2)) v[r * 5 + c] = 1.0;
    const auto b = compute({5, 5}, v, 2);
    const auto loops = b.in_dim(1);
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].birth == 1.0);
    CHECK(loops[0].death == 0.0);
    CHECK(b.in_dim(2).empty());
    // Cross-check with the Euler and component oracles at both levels.
    for (double y : {1.0, 0.0}) {
        CHECK(euler_from_barcode(b, 2, y) == oracle::euler_above({5, 5}, v, y));
        CHECK(betti_at(b, 0, y) == oracle::components_above({5, 5}, v, y));
    }
}

TEST_CASE("3x3x3 shell encloses one void") {
    std::vector<double> v(27, 1.0);
    v[13] = 0.0;
    const auto b = compute({3, 3, 3}, v, 3);
    const auto voids = b.in_dim(2);
    REQUIRE(voids.size() == 1);
    CHECK(voids[0].birth == 1.0);
    CHECK(voids[0].death == 0.0);
    CHECK(b.in_dim(1).empty());
}

TEST_CASE("dim-0 bars equal local maxima on distinct-valued grids") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = oracle::random_grid(gen, 36);
        const auto b = compute({6, 6}, v, 1);
        CHECK(b.in_dim(0).size() == oracle::local_maxima({6, 6}, v));
    }
}

TEST_CASE("dim-0 betti numbers match union-find at every threshold") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<std::size_t> side(1, 8);
    for (int trial = 0; trial < 60; ++trial) {
        const oracle::Shape shape{side(gen), side(gen)};
        const auto v = oracle::random_grid(gen, oracle::volume(shape));
        const auto b = compute(shape, v, 1);
        for (double y : v) CHECK(betti_at(b, 0, y) == oracle::components_above(shape, v, y));
    }
}

TEST_CASE("ties: repeated values still satisfy both oracles") {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> level(0, 3);
    for (int trial = 0; trial < 40; ++trial) {
        const oracle::Shape shape{7, 6};
        std::vector<double> v(42);
        for (double& x : v) x = level(gen);
        const auto b = compute(shape, v, 2);
        for (double y : {0.0, 1.0, 2.0, 3.0}) {
            CHECK(betti_at(b, 0, y) == oracle::components_above(shape, v, y));
            CHECK(euler_from_barcode(b, 2, y) == oracle::euler_above(shape, v, y));
        }
    }
}

TEST_CASE("Euler identity on random 2D and 3D grids") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        const oracle::Shape shape{9, 11};
        const auto v = oracle::random_grid(gen, oracle::volume(shape));
        const auto b = compute(shape, v, 2);
        for (double y : v) CHECK(euler_from_barcode(b, 2, y) == oracle::euler_above(shape, v, y));
    }
    for (int trial = 0; trial < 4; ++trial) {
        const oracle::Shape shape{5, 4, 6};
        const auto v = oracle::random_grid(gen, oracle::volume(shape));
        const auto b = compute(shape, v, 3);
        for (double y : v) CHECK(euler_from_barcode(b, 3, y) == oracle::euler_above(shape, v, y));
    }
}

TEST_CASE("barcode invariants") {
    std::mt19937_64 gen(31);
    std::uniform_int_distribution<int> ticks(0, 4096);
    for (int trial = 0; trial < 20; ++trial) {
        const oracle::Shape shape{8, 8};
        std::vector<double> v(64);
        // Dyadic values keep the shifted grid exactly representable.
        for (double& x : v) x = ticks(gen) / 1024.0;
        const auto b = compute(shape, v, 1);
        const double lo = *std::min_element(v.begin(), v.end());
        const double hi = *std::max_element(v.begin(), v.end());
        CHECK(b.grid_min == lo);
        CHECK(b.grid_max == hi);
        std::size_t essential0 = 0;
        for (const auto& p : b.pairs) {
            CHECK(p.birth <= hi);
            CHECK(p.death >= lo);
            if (p.essential) {
                CHECK(p.death == lo);
                essential0 += p.dim == 0;
            } else {
                CHECK(p.death < p.birth);
            }
        }
        CHECK(essential0 == 1);

        auto shifted = v;
        for (double& x : shifted) x += 8.0;
        auto s = compute(shape, shifted, 1);
        REQUIRE(s.pairs.size() == b.pairs.size());
        for (std::size_t i = 0; i < s.pairs.size(); ++i) {
            CHECK(s.pairs[i].birth == b.pairs[i].birth + 8.0);
            CHECK(s.pairs[i].death == b.pairs[i].death + 8.0);
        }

        auto twice = v;
        for (double& x : twice) x = -(-x);
        CHECK(compute(shape, twice, 1) == b);
        CHECK(compute(shape, v, 1) == b);
    }
}

TEST_CASE("max_dim above the grid dimension is rejected") {
    CHECK_THROWS_AS(compute({3, 3}, std::vector<double>(9, 0.0), 3), Error);
    CHECK_THROWS_AS(compute({3}, std::vector<double>(3, 0.0), 2), Error);
}

TEST_CASE("betti_at: half-open containment") {
    const auto one = bars({{1, 0.8, 0.2, false}});
    CHECK(betti_at(one, 1, 0.5) == 1);
    CHECK(betti_at(one, 1, 0.8) == 1);
    CHECK(betti_at(one, 1, 0.2) == 0);
    CHECK(betti_at(one, 1, 0.9) == 0);
    CHECK(betti_at(bars({}), 1, 0.3) == 0);
    CHECK(betti_at(bars({}), 0, 0.0) == 0);
    const auto two = bars({{1, 0.8, 0.2, false}, {1, 0.6, 0.4, false}});
    CHECK(betti_at(two, 1, 0.5) == 2);
    CHECK(betti_at(two, 0, 0.5) == 0);
}

TEST_CASE("barcode CSV export") {
    const auto b = compute({3}, {1.0, 0.0, 2.0}, 0);
    const std::string comments[] = {"# grid"};
    const auto csv = barcode_to_csv(b, comments);
    CHECK(csv.find("# grid\ndim,birth,death,essential\n") == 0);
    CHECK(csv.find("0,2,0,1\n") != std::string::npos);
    CHECK(csv.find("0,1,0,0\n") != std::string::npos);
}
