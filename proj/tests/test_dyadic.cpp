#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "carleson/dyadic.hpp"
#include "carleson/rng.hpp"

using namespace carleson;
using namespace carleson::dyadic;

namespace {

GridParams identity_grid() { return {1.0, 0.0, 0.0}; }

// brute-force sparseness predicate on real endpoints (independent of the
// library's integer-arithmetic route)
bool sparse_by_hand(const std::vector<Tile>& tiles, int M) {
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        for (std::size_t j = i + 1; j < tiles.size(); ++j) {
            const Interval a = tiles[i].freq.real();
            const Interval b = tiles[j].freq.real();
            if (std::abs(a.lo - b.lo) < 1e-12 && std::abs(a.hi - b.hi) < 1e-12) continue;
            const double la = a.length(), lb = b.length();
            if (std::abs(la - lb) < 1e-12 * la) {
                if (a.dilated(M).intersects(b.dilated(M))) return false;
            } else if (la < lb) {
                if (!(2.0 * M * la < lb * (1.0 + 1e-12))) return false;
            } else {
                if (!(2.0 * M * lb < la * (1.0 + 1e-12))) return false;
            }
        }
    }
    return true;
}

} // namespace

TEST_CASE("grid interval endpoints") {
    const auto g = identity_grid();
    const auto a = grid_interval(g, 0, 5);
    CHECK(a.lo() == 5.0);
    CHECK(a.hi() == 6.0);
    const auto b = grid_interval(g, 1, 2);
    CHECK(b.lo() == 4.0);
    CHECK(b.hi() == 6.0);

    // evaluate the defining formula at extended precision
    const auto c = grid_interval({1.05, 0.3, 0.5}, 0, 0);
    const long double lo = 1.05L * std::exp2(0.5L) * 0.0L - 0.3L;
    const long double hi = 1.05L * std::exp2(0.5L) * 1.0L - 0.3L;
    CHECK(std::abs(c.lo() - static_cast<double>(lo)) < 1e-15);
    CHECK(std::abs(c.hi() - static_cast<double>(hi)) < 1e-14);

    CHECK_THROWS_AS(grid_interval(g, 2000, 0), std::range_error);
}

TEST_CASE("nesting or disjointness of grid intervals") {
    Rng rng(11);
    const GridParams g{1.02, 0.37, 0.41};
    for (int t = 0; t < 10000; ++t) {
        const int k1 = static_cast<int>(rng.uniform_int(-6, 6));
        const int k2 = static_cast<int>(rng.uniform_int(-6, 6));
        const auto a = grid_interval(g, k1, rng.uniform_int(-40, 40));
        const auto b = grid_interval(g, k2, rng.uniform_int(-40, 40));
        if (a.intersects(b)) {
            CHECK((a.contains(b) || b.contains(a)));
        } else {
            CHECK(!a.contains(b));
            CHECK(!b.contains(a));
        }
    }
}

TEST_CASE("tile orderings") {
    const auto g = identity_grid();
    // P = [0,1] x [0,1], Q = [0,2] x [0, 1/2]
    const Tile P = make_tile(g, 0, 0, 0);
    const Tile Q{grid_interval(g, 1, 0), grid_interval(g, -1, 0)};
    CHECK(compare_tiles(P, Q, OrderKind::less, 2));
    CHECK(compare_tiles(P, Q, OrderKind::less_equal, 2));

    CHECK(!compare_tiles(P, P, OrderKind::less, 2));
    CHECK(compare_tiles(P, P, OrderKind::less_equal, 2));

    // disjoint spatial intervals never compare
    const Tile R = make_tile(g, 0, 5, 0);
    for (auto kind : {OrderKind::less, OrderKind::less_equal, OrderKind::lesssim,
                      OrderKind::lesssim_strict, OrderKind::fefferman})
        CHECK(!compare_tiles(P, R, kind, 2));
}

TEST_CASE("order coherence: less implies lesssim for M >= 1") {
    Rng rng(5);
    const GridParams g{1.01, 0.13, 0.29};
    int hits = 0;
    for (int t = 0; t < 20000; ++t) {
        const int k1 = static_cast<int>(rng.uniform_int(0, 3));
        const int k2 = static_cast<int>(rng.uniform_int(0, 3));
        const Tile P = make_tile(g, k1, rng.uniform_int(0, 8), rng.uniform_int(-12, 12));
        const Tile Q = make_tile(g, k2, rng.uniform_int(0, 8), rng.uniform_int(-12, 12));
        for (int M : {1, 2, 3}) {
            if (compare_tiles(P, Q, OrderKind::less, M)) {
                ++hits;
                CHECK(compare_tiles(P, Q, OrderKind::lesssim, M));
            }
        }
    }
    CHECK(hits > 50); // the sample actually exercised the implication
}

TEST_CASE("sparse split") {
    const auto g = identity_grid();
    const int M = 3;

    SUBCASE("singleton") {
        const std::vector<Tile> one{make_tile(g, 0, 0, 0)};
        CHECK(sparse_split(one, M).size() == 1);
    }

    SUBCASE("equal-scale close frequencies are separated") {
        const std::vector<Tile> two{make_tile(g, 0, 0, 0), make_tile(g, 0, 1, 1)};
        CHECK(!is_sparse(two, M));
        CHECK(sparse_split(two, M).size() == 2);
    }

    SUBCASE("random family: parts are sparse, partition exact, idempotent") {
        Rng rng(31);
        std::vector<Tile> tiles;
        for (int i = 0; i < 200; ++i)
            tiles.push_back(make_tile(g, static_cast<int>(rng.uniform_int(-5, 5)),
                                      rng.uniform_int(0, 30), rng.uniform_int(-40, 40)));
        const auto parts = sparse_split(tiles, M);
        CHECK(parts.size() <= 16u * M * M);
        std::size_t total = 0;
        std::multiset<Tile> seen;
        for (const auto& part : parts) {
            CHECK(is_sparse(part, M));
            CHECK(sparse_by_hand(part, M));
            total += part.size();
            for (const auto& t : part) seen.insert(t);
            // idempotence
            const auto again = sparse_split(part, M);
            REQUIRE(again.size() == 1);
            CHECK(again.front() == part);
        }
        CHECK(total == tiles.size());
        const std::multiset<Tile> orig(tiles.begin(), tiles.end());
        CHECK(seen == orig);
    }
}

TEST_CASE("vector tile linkage is exact") {
    const GridParams g1{1.01, 0.2, 0.3};
    const GridParams g2{1.005, -0.4, 0.3};
    const VectorTile4 vt{grid_interval(identity_grid(), 0, 0), grid_interval(g1, 0, 7),
                         grid_interval(g2, 0, -3), 2, 1};
    CHECK(vt.omega3().l == 5);
    CHECK(vt.omega4().l == -4);
    // omega3 = omega1 - j1 * |omega1|; derived endpoints agree to the ulp
    CHECK(vt.omega3().lo() ==
          doctest::Approx(vt.omega1.lo() - 2.0 * vt.omega1.length()).epsilon(1e-15));
    CHECK(vt.omega3().hi() ==
          doctest::Approx(vt.omega1.hi() - 2.0 * vt.omega1.length()).epsilon(1e-15));

    // subtraction rule in plain numbers: j1 = 2, omega1 = [4,6] -> omega3 = [0,2]
    const VectorTile4 w{grid_interval(identity_grid(), -1, 0), grid_interval(identity_grid(), 1, 2),
                        grid_interval(identity_grid(), 1, 2), 2, 2};
    CHECK(w.omega3().lo() == 0.0);
    CHECK(w.omega3().hi() == 2.0);
}

TEST_CASE("vector tile family enumeration") {
    const GlobalParams global{2, 0.01};

    SUBCASE("single scale, unit window: one spatial cell per frequency pair") {
        const auto fam = build_vector_tile_family(2, 1, identity_grid(), identity_grid(), global,
                                                  {0}, {0.0, 1.0}, {0.0, 4.0});
        std::set<std::pair<std::int64_t, std::int64_t>> freq_pairs;
        for (const auto& vt : fam) {
            CHECK(vt.spatial.lo() == 0.0);
            CHECK(vt.spatial.hi() == 1.0);
            freq_pairs.insert({vt.omega1.l, vt.omega2.l});
        }
        CHECK(fam.size() == freq_pairs.size());
        CHECK(fam.size() == 16);
    }

    SUBCASE("family size matches direct enumeration of the index set") {
        const Interval sw{0.0, 4.0}, fw{0.0, 8.0};
        const std::vector<int> ks{-2, -1, 0, 1, 2};
        const auto fam = build_vector_tile_family(2, 2, identity_grid(), identity_grid(), global,
                                                  ks, sw, fw);
        std::size_t expect = 0;
        for (int k : ks) {
            const double ls = std::exp2(-k), lf = std::exp2(k);
            std::size_t ns = 0, nf = 0;
            for (std::int64_t l = -100; l < 100; ++l)
                if (l * ls < sw.hi && (l + 1) * ls > sw.lo) ++ns;
            for (std::int64_t l = -100; l < 100; ++l)
                if (l * lf < fw.hi && (l + 1) * lf > fw.lo) ++nf;
            expect += ns * nf * nf;
        }
        CHECK(fam.size() == expect);

        // every member satisfies the linkage invariants
        for (const auto& vt : fam) {
            CHECK(vt.omega3().l == vt.omega1.l - 2);
            CHECK(vt.omega4().l == vt.omega2.l - 2);
        }
    }

    SUBCASE("empty window yields empty family") {
        const auto fam = build_vector_tile_family(2, 1, identity_grid(), identity_grid(), global,
                                                  {0}, {1.0, 1.0}, {0.0, 4.0});
        CHECK(fam.empty());
    }
}

TEST_CASE("projection removes duplicates") {
    const GlobalParams global{2, 0.01};
    const auto fam = build_vector_tile_family(2, 2, identity_grid(), identity_grid(), global,
                                              {0, 1}, {0.0, 2.0}, {0.0, 4.0});
    CHECK(project(std::vector<VectorTile4>{}, 1).empty());

    const auto p1 = project(fam, 1);
    // pairwise-comparison distinct count
    std::vector<Tile> distinct;
    for (const auto& vt : fam) {
        const Tile t = vt.tile(1);
        bool dup = false;
        for (const auto& d : distinct) dup = dup || d == t;
        if (!dup) distinct.push_back(t);
    }
    CHECK(p1.size() == distinct.size());
    CHECK(p1.size() <= fam.size());

    // two vector tiles sharing P1 project to one tile
    std::vector<VectorTile4> pair{fam[0], fam[0]};
    pair[1].omega2.l += 1;
    CHECK(project(pair, 1).size() == 1);
}

TEST_CASE("serialization round trip") {
    const GlobalParams global{2, 0.01};
    const GridParams g{1.004, 0.25, 0.5};
    std::vector<Tile> tiles;
    for (int i = 0; i < 5; ++i) tiles.push_back(make_tile(g, i - 2, 3 * i, 7 - i));

    std::stringstream ss;
    write_tile_family(ss, tiles, g, global);
    GridParams g2;
    GlobalParams gl2;
    const auto back = read_tile_family(ss, g2, gl2);
    CHECK(back == tiles);
    CHECK(g2 == g);
    CHECK(gl2.M == global.M);

    const auto fam = build_vector_tile_family(2, 1, g, g, global, {0, 1}, {0.0, 2.0}, {0.0, 4.0});
    std::stringstream vs;
    write_vector_tile_family(vs, fam, g, g, 2, 1, global);
    GridParams h1, h2;
    GlobalParams gl3;
    const auto vback = read_vector_tile_family(vs, h1, h2, gl3);
    CHECK(vback == fam);
}
