#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "carleson/interval.hpp"

namespace carleson::dyadic {

/// Parameters of a translated, dilated dyadic grid: intervals
/// [alpha*2^{k+kappa}*l - t, alpha*2^{k+kappa}*(l+1) - t).
struct GridParams {
    double alpha = 1.0;
    double t = 0.0;
    double kappa = 0.0;

    friend bool operator==(const GridParams&, const GridParams&) = default;
};

struct GlobalParams {
    int M = 2;
    double sharp = 0.01; // must be < 1/M

    void validate() const;
};

/// Interval of a grid, stored as (scale, index); endpoints are derived.
/// Nesting/disjointness inside one grid is exact integer arithmetic.
struct GridInterval {
    GridParams grid;
    int k = 0;
    std::int64_t l = 0;

    double length() const;
    double lo() const;
    double hi() const;
    Interval real() const { return {lo(), hi()}; }

    GridInterval translated_by_own_length(std::int64_t steps) const {
        return {grid, k, l + steps};
    }
    /// Ancestor interval `up` scales coarser (length * 2^{up}).
    GridInterval ancestor(int up) const;

    bool same_grid(const GridInterval& o) const { return grid == o.grid; }
    bool contains(const GridInterval& o) const;         // exact, same grid
    bool strictly_contains(const GridInterval& o) const;
    bool intersects(const GridInterval& o) const;       // exact, same grid
    /// c-dilate containment: c*this contains c*o (c a positive integer).
    bool dilate_contains(const GridInterval& o, std::int64_t c) const;
    bool dilate_intersects(const GridInterval& o, std::int64_t c) const;

    friend bool operator==(const GridInterval&, const GridInterval&) = default;
    friend auto operator<=>(const GridInterval& a, const GridInterval& b) {
        return std::pair(a.k, a.l) <=> std::pair(b.k, b.l);
    }
};

GridInterval grid_interval(const GridParams& params, int k, std::int64_t l);

/// Grid interval of the given grid/scale containing x.
GridInterval locate(const GridParams& params, int k, double x);

/// Tile I x omega with I from the plain dyadic grid at scale -k and omega from
/// the frequency grid at scale k (the grid's kappa folds into the length).
struct Tile {
    GridInterval spatial;
    GridInterval freq;

    int scale() const { return freq.k; }
    friend bool operator==(const Tile&, const Tile&) = default;
    friend auto operator<=>(const Tile& a, const Tile& b) {
        return std::tuple(a.freq.k, a.spatial.l, a.freq.l) <=>
               std::tuple(b.freq.k, b.spatial.l, b.freq.l);
    }
};

Tile make_tile(const GridParams& freq_grid, int k, std::int64_t l_spatial, std::int64_t l_freq);

enum class OrderKind {
    less,           // I_P strictly inside I_Q and 3*omega_Q inside 3*omega_P
    less_equal,     // `less` or equal
    lesssim,        // I_P strictly inside I_Q and 3M*omega_Q inside 3M*omega_P
    lesssim_strict, // `lesssim` holds and `less_equal` fails
    fefferman,      // I_P strictly inside I_Q and omega_Q inside omega_P
};

/// True iff P `kind` Q (P the lower/smaller tile).
bool compare_tiles(const Tile& P, const Tile& Q, OrderKind kind, int M);

/// Sparseness of a tile family: distinct frequency intervals of different
/// length are 2M-separated in scale, distinct ones of equal length have
/// disjoint M-dilates. Identical frequency intervals are unconstrained.
bool is_sparse(const std::vector<Tile>& tiles, int M);

/// Partition into sparse parts via residue classes of scale and frequency
/// index. At most (ceil(log2(2M))+1)*(2M+1) parts, each sparse; re-splitting a
/// part returns it unchanged.
std::vector<std::vector<Tile>> sparse_split(const std::vector<Tile>& tiles, int M);

/// 4-tuple of tiles sharing one spatial interval: omega_1, omega_2 stored,
/// omega_3 = omega_1 - j1*|omega_1| and omega_4 = omega_2 - j2*|omega_2| are
/// derived, so the linkage is exact by construction.
struct VectorTile4 {
    GridInterval spatial;
    GridInterval omega1;
    GridInterval omega2;
    int j1 = 1;
    int j2 = 1;

    int scale() const { return omega1.k; }
    GridInterval omega3() const { return omega1.translated_by_own_length(-j1); }
    GridInterval omega4() const { return omega2.translated_by_own_length(-j2); }
    GridInterval omega(int i) const;
    Tile tile(int i) const;

    friend bool operator==(const VectorTile4&, const VectorTile4&) = default;
    friend auto operator<=>(const VectorTile4& a, const VectorTile4& b) {
        return std::tuple(a.omega1.k, a.spatial.l, a.omega1.l, a.omega2.l) <=>
               std::tuple(b.omega1.k, b.spatial.l, b.omega1.l, b.omega2.l);
    }
};

/// Projection of a VectorTile4 onto coordinates (3, 4).
struct VectorTile2 {
    GridInterval spatial;
    GridInterval omega3;
    GridInterval omega4;
    int j1 = 1;
    int j2 = 1;

    Interval union_translates3() const; // omega3 U ... U (omega3 + j1|omega3|)
    Interval union_translates4() const;

    friend bool operator==(const VectorTile2&, const VectorTile2&) = default;
    friend auto operator<=>(const VectorTile2& a, const VectorTile2& b) {
        return std::tuple(a.omega3.k, a.spatial.l, a.omega3.l, a.omega4.l) <=>
               std::tuple(b.omega3.k, b.spatial.l, b.omega3.l, b.omega4.l);
    }
};

VectorTile2 project_34(const VectorTile4& vt);

/// All vector-tiles with scale in k_range, spatial interval meeting the
/// spatial window and omega_1, omega_2 meeting the frequency window.
/// max(j1, j2) must equal global.M; grids must satisfy the GlobalParams bound.
std::vector<VectorTile4> build_vector_tile_family(int j1, int j2,
                                                  const GridParams& freq_grid1,
                                                  const GridParams& freq_grid2,
                                                  const GlobalParams& global,
                                                  const std::vector<int>& k_range,
                                                  const Interval& spatial_window,
                                                  const Interval& freq_window);

std::vector<Tile> project(const std::vector<VectorTile4>& family, int which); // which in {1,2}
std::vector<VectorTile2> project34(const std::vector<VectorTile4>& family);

/// Line-oriented text serialization with a JSON header line carrying the grid
/// and global parameters. Tile records: "k l_spatial l_freq grid_id".
void write_tile_family(std::ostream& os, const std::vector<Tile>& tiles,
                       const GridParams& grid, const GlobalParams& global);
std::vector<Tile> read_tile_family(std::istream& is, GridParams& grid, GlobalParams& global);

/// Vector-tile records: "k l_spatial l_omega1 l_omega2".
void write_vector_tile_family(std::ostream& os, const std::vector<VectorTile4>& tiles,
                              const GridParams& grid1, const GridParams& grid2,
                              int j1, int j2, const GlobalParams& global);
std::vector<VectorTile4> read_vector_tile_family(std::istream& is, GridParams& grid1,
                                                 GridParams& grid2, GlobalParams& global);

} // namespace carleson::dyadic
