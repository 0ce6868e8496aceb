#include "carleson/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace carleson::dyadic {

namespace {

constexpr int kMaxScale = 400;   // |k| beyond this overflows the double exponent budget
constexpr int kMaxShift = 62;    // exact comparisons cap the scale spread

/// Exact comparison of m1*2^{e1} vs m2*2^{e2}.
int cmp_scaled(std::int64_t m1, int e1, std::int64_t m2, int e2) {
    if (e1 < e2) return -cmp_scaled(m2, e2, m1, e1);
    const int shift = e1 - e2;
    if (shift > kMaxShift) throw std::range_error("grid scale spread too large for exact comparison");
    const __int128 a = static_cast<__int128>(m1) << shift;
    const __int128 b = m2;
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

void check_grid(const GridParams& g) {
    if (!(g.alpha >= 1.0 && g.alpha <= 2.0))
        throw std::invalid_argument("GridParams: alpha must lie in [1, 1+sharp]");
    if (!(g.kappa >= 0.0 && g.kappa <= 1.0))
        throw std::invalid_argument("GridParams: kappa must lie in [0, 1]");
}

} // namespace

void GlobalParams::validate() const {
    if (M < 1) throw std::invalid_argument("GlobalParams: M must be a positive integer");
    if (!(sharp > 0.0) || !(sharp < 1.0) || !(sharp < 1.0 / M))
        throw std::invalid_argument("GlobalParams: sharp must lie in (0,1) and below 1/M");
}

double GridInterval::length() const { return grid.alpha * std::exp2(static_cast<double>(k) + grid.kappa); }
double GridInterval::lo() const { return length() * static_cast<double>(l) - grid.t; }
double GridInterval::hi() const { return length() * static_cast<double>(l + 1) - grid.t; }

GridInterval GridInterval::ancestor(int up) const {
    if (up < 0) throw std::invalid_argument("ancestor: up must be nonnegative");
    if (up > kMaxShift) throw std::range_error("ancestor: scale spread too large");
    return {grid, k + up, l >> up};
}

bool GridInterval::contains(const GridInterval& o) const {
    // [lo, hi) endpoints are l*2^k, (l+1)*2^k in units of alpha*2^kappa (t cancels)
    return cmp_scaled(o.l, o.k, l, k) >= 0 && cmp_scaled(o.l + 1, o.k, l + 1, k) <= 0;
}

bool GridInterval::strictly_contains(const GridInterval& o) const {
    return contains(o) && !(k == o.k && l == o.l);
}

bool GridInterval::intersects(const GridInterval& o) const {
    return cmp_scaled(l, k, o.l + 1, o.k) < 0 && cmp_scaled(o.l, o.k, l + 1, k) < 0;
}

bool GridInterval::dilate_contains(const GridInterval& o, std::int64_t c) const {
    // endpoints of the c-dilate: ((2l+1) -+ c) * 2^{k-1} in common units
    return cmp_scaled(2 * l + 1 - c, k - 1, 2 * o.l + 1 - c, o.k - 1) <= 0 &&
           cmp_scaled(2 * o.l + 1 + c, o.k - 1, 2 * l + 1 + c, k - 1) <= 0;
}

bool GridInterval::dilate_intersects(const GridInterval& o, std::int64_t c) const {
    return cmp_scaled(2 * l + 1 - c, k - 1, 2 * o.l + 1 + c, o.k - 1) < 0 &&
           cmp_scaled(2 * o.l + 1 - c, o.k - 1, 2 * l + 1 + c, k - 1) < 0;
}

GridInterval grid_interval(const GridParams& params, int k, std::int64_t l) {
    check_grid(params);
    if (k < -kMaxScale || k > kMaxScale) throw std::range_error("grid_interval: scale out of range");
    return {params, k, l};
}

GridInterval locate(const GridParams& params, int k, double x) {
    GridInterval probe = grid_interval(params, k, 0);
    const double len = probe.length();
    auto l = static_cast<std::int64_t>(std::floor((x + params.t) / len));
    probe.l = l;
    // guard against floating rounding at cell edges
    if (probe.hi() <= x) probe.l += 1;
    else if (probe.lo() > x) probe.l -= 1;
    return probe;
}

Tile make_tile(const GridParams& freq_grid, int k, std::int64_t l_spatial, std::int64_t l_freq) {
    return {grid_interval(GridParams{}, -k, l_spatial), grid_interval(freq_grid, k, l_freq)};
}

bool compare_tiles(const Tile& P, const Tile& Q, OrderKind kind, int M) {
    if (!(P.spatial.same_grid(Q.spatial) && P.freq.same_grid(Q.freq)))
        throw std::invalid_argument("compare_tiles: tiles from incompatible grid families");
    switch (kind) {
    case OrderKind::less:
        return Q.spatial.strictly_contains(P.spatial) && P.freq.dilate_contains(Q.freq, 3);
    case OrderKind::less_equal:
        return P == Q || compare_tiles(P, Q, OrderKind::less, M);
    case OrderKind::lesssim:
        return Q.spatial.strictly_contains(P.spatial) &&
               P.freq.dilate_contains(Q.freq, 3 * static_cast<std::int64_t>(M));
    case OrderKind::lesssim_strict:
        return compare_tiles(P, Q, OrderKind::lesssim, M) &&
               !compare_tiles(P, Q, OrderKind::less_equal, M);
    case OrderKind::fefferman:
        return Q.spatial.strictly_contains(P.spatial) && P.freq.contains(Q.freq);
    }
    return false;
}

bool is_sparse(const std::vector<Tile>& tiles, int M) {
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        for (std::size_t j = i + 1; j < tiles.size(); ++j) {
            const auto& a = tiles[i].freq;
            const auto& b = tiles[j].freq;
            if (a == b) continue;
            if (a.k == b.k) {
                if (a.dilate_intersects(b, M)) return false;
            } else {
                const int dk = std::abs(a.k - b.k);
                // require 2^{dk} > 2M
                if (dk > kMaxShift) continue;
                if ((std::int64_t{1} << dk) <= 2 * static_cast<std::int64_t>(M)) return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<Tile>> sparse_split(const std::vector<Tile>& tiles, int M) {
    if (M < 1) throw std::invalid_argument("sparse_split: M must be positive");
    int s = 1;
    while ((std::int64_t{1} << s) <= 2 * static_cast<std::int64_t>(M)) ++s;
    ++s; // s = ceil(log2(2M)) + 1
    const std::int64_t q = 2 * static_cast<std::int64_t>(M) + 1;

    std::map<std::pair<int, std::int64_t>, std::vector<Tile>> parts;
    for (const auto& tl : tiles) {
        const int kr = ((tl.freq.k % s) + s) % s;
        const std::int64_t lr = ((tl.freq.l % q) + q) % q;
        parts[{kr, lr}].push_back(tl);
    }
    std::vector<std::vector<Tile>> out;
    out.reserve(parts.size());
    for (auto& [key, part] : parts) {
        std::sort(part.begin(), part.end());
        out.push_back(std::move(part));
    }
    return out;
}

GridInterval VectorTile4::omega(int i) const {
    switch (i) {
    case 1: return omega1;
    case 2: return omega2;
    case 3: return omega3();
    case 4: return omega4();
    default: throw std::invalid_argument("VectorTile4::omega: index must be 1..4");
    }
}

Tile VectorTile4::tile(int i) const { return {spatial, omega(i)}; }

Interval VectorTile2::union_translates3() const {
    return {omega3.lo(), omega3.translated_by_own_length(j1).hi()};
}
Interval VectorTile2::union_translates4() const {
    return {omega4.lo(), omega4.translated_by_own_length(j2).hi()};
}

VectorTile2 project_34(const VectorTile4& vt) {
    return {vt.spatial, vt.omega3(), vt.omega4(), vt.j1, vt.j2};
}

namespace {

// inclusive index range of grid cells meeting a window, empty if none
std::optional<std::pair<std::int64_t, std::int64_t>> cell_range(const GridParams& g, int k,
                                                                const Interval& window) {
    if (window.empty()) return std::nullopt;
    GridInterval first = locate(g, k, window.lo);
    if (first.hi() <= window.lo) first.l += 1;
    GridInterval last = locate(g, k, window.hi);
    if (last.lo() >= window.hi) last.l -= 1;
    if (last.l < first.l) return std::nullopt;
    return std::pair{first.l, last.l};
}

} // namespace

std::vector<VectorTile4> build_vector_tile_family(int j1, int j2, const GridParams& freq_grid1,
                                                  const GridParams& freq_grid2,
                                                  const GlobalParams& global,
                                                  const std::vector<int>& k_range,
                                                  const Interval& spatial_window,
                                                  const Interval& freq_window) {
    global.validate();
    if (j1 < 1 || j2 < 1 || std::max(j1, j2) != global.M)
        throw std::invalid_argument("build_vector_tile_family: need positive j1, j2 with max = M");
    for (const auto* g : {&freq_grid1, &freq_grid2}) {
        if (!(g->alpha >= 1.0) || !(g->alpha <= 1.0 + global.sharp))
            throw std::invalid_argument("build_vector_tile_family: alpha outside [1, 1+sharp]");
        if (!(g->kappa >= 0.0) || !(g->kappa <= 1.0))
            throw std::invalid_argument("build_vector_tile_family: kappa outside [0, 1]");
    }
    if (freq_grid1.kappa != freq_grid2.kappa)
        throw std::invalid_argument("build_vector_tile_family: frequency grids must share kappa");

    std::vector<VectorTile4> out;
    const GridParams spatial_grid{};
    for (int k : k_range) {
        const auto sp = cell_range(spatial_grid, -k, spatial_window);
        const auto f1 = cell_range(freq_grid1, k, freq_window);
        const auto f2 = cell_range(freq_grid2, k, freq_window);
        if (!sp || !f1 || !f2) continue;
        for (std::int64_t ls = sp->first; ls <= sp->second; ++ls)
            for (std::int64_t l1 = f1->first; l1 <= f1->second; ++l1)
                for (std::int64_t l2 = f2->first; l2 <= f2->second; ++l2)
                    out.push_back({grid_interval(spatial_grid, -k, ls),
                                   grid_interval(freq_grid1, k, l1),
                                   grid_interval(freq_grid2, k, l2), j1, j2});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Tile> project(const std::vector<VectorTile4>& family, int which) {
    if (which != 1 && which != 2) throw std::invalid_argument("project: which must be 1 or 2");
    std::vector<Tile> out;
    out.reserve(family.size());
    for (const auto& vt : family) out.push_back(vt.tile(which));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VectorTile2> project34(const std::vector<VectorTile4>& family) {
    std::vector<VectorTile2> out;
    out.reserve(family.size());
    for (const auto& vt : family) out.push_back(project_34(vt));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

nlohmann::json grid_json(const GridParams& g) {
    return {{"alpha", g.alpha}, {"t", g.t}, {"kappa", g.kappa}};
}

GridParams grid_from_json(const nlohmann::json& j) {
    return {j.at("alpha").get<double>(), j.at("t").get<double>(), j.at("kappa").get<double>()};
}

} // namespace

void write_tile_family(std::ostream& os, const std::vector<Tile>& tiles, const GridParams& grid,
                       const GlobalParams& global) {
    nlohmann::json header{{"format", "tiles"},
                          {"grid", grid_json(grid)},
                          {"global", {{"M", global.M}, {"sharp", global.sharp}}}};
    os << header.dump() << "\n";
    for (const auto& tl : tiles)
        os << tl.freq.k << " " << tl.spatial.l << " " << tl.freq.l << " " << 1 << "\n";
}

std::vector<Tile> read_tile_family(std::istream& is, GridParams& grid, GlobalParams& global) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("tile file: missing header");
    const auto header = nlohmann::json::parse(line);
    grid = grid_from_json(header.at("grid"));
    global.M = header.at("global").at("M").get<int>();
    global.sharp = header.at("global").at("sharp").get<double>();
    std::vector<Tile> tiles;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int k = 0, grid_id = 0;
        std::int64_t lsp = 0, lfr = 0;
        ls >> k >> lsp >> lfr >> grid_id;
        tiles.push_back(make_tile(grid, k, lsp, lfr));
    }
    return tiles;
}

void write_vector_tile_family(std::ostream& os, const std::vector<VectorTile4>& tiles,
                              const GridParams& grid1, const GridParams& grid2, int j1, int j2,
                              const GlobalParams& global) {
    nlohmann::json header{{"format", "vector_tiles"},
                          {"grid1", grid_json(grid1)},
                          {"grid2", grid_json(grid2)},
                          {"j1", j1},
                          {"j2", j2},
                          {"global", {{"M", global.M}, {"sharp", global.sharp}}}};
    os << header.dump() << "\n";
    for (const auto& vt : tiles)
        os << vt.scale() << " " << vt.spatial.l << " " << vt.omega1.l << " " << vt.omega2.l << "\n";
}

std::vector<VectorTile4> read_vector_tile_family(std::istream& is, GridParams& grid1,
                                                 GridParams& grid2, GlobalParams& global) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("vector tile file: missing header");
    const auto header = nlohmann::json::parse(line);
    grid1 = grid_from_json(header.at("grid1"));
    grid2 = grid_from_json(header.at("grid2"));
    const int j1 = header.at("j1").get<int>();
    const int j2 = header.at("j2").get<int>();
    global.M = header.at("global").at("M").get<int>();
    global.sharp = header.at("global").at("sharp").get<double>();
    std::vector<VectorTile4> tiles;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int k = 0;
        std::int64_t lsp = 0, l1 = 0, l2 = 0;
        ls >> k >> lsp >> l1 >> l2;
        tiles.push_back({grid_interval(GridParams{}, -k, lsp), grid_interval(grid1, k, l1),
                         grid_interval(grid2, k, l2), j1, j2});
    }
    return tiles;
}

} // namespace carleson::dyadic
