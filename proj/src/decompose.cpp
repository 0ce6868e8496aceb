#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "carleson/symbol.hpp"
#include "quad.hpp"

namespace carleson::symbol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMargin = 1.0 / 36.0;
constexpr double kTableStep = 0.125; // scale grid for coefficient interpolation

SampledFunction reflect(const SampledFunction& f) {
    SampledFunction g;
    g.spacing = f.spacing;
    const std::size_t n = f.size();
    g.origin = -(f.origin + f.spacing * static_cast<double>(n - 1));
    g.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.values[i] = f.values[n - 1 - i];
    return g;
}

// restrict a sampled function to a subwindow (grid-aligned)
SampledFunction crop(const SampledFunction& f, const Interval& window) {
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    auto lo = static_cast<std::ptrdiff_t>(std::floor((window.lo - f.origin) / f.spacing));
    auto hi = static_cast<std::ptrdiff_t>(std::ceil((window.hi - f.origin) / f.spacing)) + 1;
    lo = std::clamp<std::ptrdiff_t>(lo, 0, n);
    hi = std::clamp<std::ptrdiff_t>(hi, lo, n);
    SampledFunction g;
    g.spacing = f.spacing;
    g.origin = f.origin + f.spacing * static_cast<double>(lo);
    g.values.assign(f.values.begin() + lo, f.values.begin() + hi);
    return g;
}

} // namespace

double SymbolDecomposition::ladder_weight(int l1, int l2) const {
    return std::pow(1.0 + l1, -opts_.decay_order) * std::pow(1.0 + l2, -opts_.decay_order);
}

Interval SymbolDecomposition::axis_support(int j, int l) const {
    // conservative support of the convolved window factors, at base scale
    const double a = 1.0 + global_.sharp;
    if (j > 0) {
        const double lo = (l == 0) ? family_.support(j).lo - 0.5 : (j - 1 + l) - kMargin;
        const double hi = a * ((j + l) + kMargin) + a;
        return {lo, hi};
    }
    const double hi = (l == 0) ? family_.support(j).hi + 0.5 : -((-j - 1 + l) - kMargin);
    const double lo = -(a * ((-j + l) + kMargin) + a);
    return {lo, hi};
}

SymbolDecomposition::SymbolDecomposition(MihlinSymbol m, int M, double sharp,
                                         DecompositionOptions opts)
    : m_(std::move(m)), family_(M), global_{M, sharp}, opts_(opts) {
    global_.validate();
    if (M < 2) throw std::invalid_argument("SymbolDecomposition: requires M >= 2");
    table_.n_max = opts_.n_max;
    table_.decay_order = opts_.decay_order;

    for (int j1 = -M; j1 <= M; ++j1) {
        if (j1 == 0) continue;
        for (int j2 = -M; j2 <= M; ++j2) {
            if (j2 == 0) continue;
            if (std::max(std::abs(j1), std::abs(j2)) == M) ring_.emplace_back(j1, j2);
        }
    }

    // axis factors for positive j; negative j by reflection (n -> -n)
    const double q = opts_.decay_order;
    for (int j = 1; j <= M; ++j) {
        const Interval supp = family_.support(j);
        const double h = opts_.axis_spacing;
        SampledFunction phi = sample(supp.lo - 0.25, supp.hi + 0.25,
                                     next_pow2(static_cast<std::size_t>((supp.length() + 0.5) / h)),
                                     [&](double u) { return cplx{family_.psi_hat(j, u), 0.0}; });
        // the grid must hold the factored bump's ring, or its wrap pollutes
        // the window ladder
        FactorOptions fopts;
        fopts.pad_major =
            std::max(static_cast<double>(opts_.l_max) + 16.0, 15.0 * factor_tail_scale(sharp));
        fopts.pad_minor = 8.0;
        for (int n = -opts_.n_max; n <= opts_.n_max; ++n) {
            const double theta = 0.9 * n;
            const double scale_n = n == 0 ? 1.0 : static_cast<double>(n);
            const SampledFunction base =
                factor_bump_modulated(phi, Side::right, sharp, 0.0, theta, scale_n, fopts);

            // l_max + 1 plays the remainder window: everything above the
            // ladder, completing the partition so the resummed factors
            // reproduce the profile exactly (cutting the factored bump's
            // ring at the ladder edge would otherwise leak its mass)
            for (int l = 0; l <= opts_.l_max + 1; ++l) {
                const bool remainder = l == opts_.l_max + 1;
                const double lw = remainder ? 1.0 : std::pow(1.0 + l, q);
                const Interval span = axis_support(j, std::min(l, opts_.l_max + 1));

                // working window: the l-th piece plus the averaging spread;
                // the remainder keeps a neighborhood of the ladder edge (its
                // interior is annihilated by the width average)
                const double w_lo = (l == 0 ? supp.lo : (j - 1 + l) - 2.0 * kMargin) - 1.0;
                const double w_hi = remainder
                                        ? (1.0 + sharp) * (j + l + 2.0 * kMargin) + 8.0
                                        : (1.0 + sharp) * (j + l + 2.0 * kMargin) + (1.0 + sharp) + 1.0;
                const SampledFunction work = crop(base, {w_lo, w_hi});

                // width-averaged indicator convolution of the windowed piece;
                // composite quadrature resolves window-edge crossings
                const int panels = std::max(
                    1, static_cast<int>(std::ceil(sharp * (j + l + 1) / (2.0 * kMargin))));
                SampledFunction acc = zeros_like(work);
                SampledFunction loc; // localized factor at unit width
                bool have_loc = false;
                for (int pp = 0; pp < panels; ++pp) {
                    const double a0 = 1.0 + sharp * pp / panels;
                    const double a1 = 1.0 + sharp * (pp + 1) / panels;
                    for (const auto& [alpha, w] : detail::gl4_nodes(a0, a1)) {
                        const double mw = alpha * kMargin;
                        auto edge = [&](int ll) { return alpha * static_cast<double>(j - 1 + ll); };
                        SampledFunction p = work;
                        for (std::size_t i = 0; i < p.size(); ++i) {
                            const double u = p.x(i);
                            double sig;
                            if (remainder) {
                                sig = detail::smooth_step((u - (edge(l) - mw)) / (2 * mw));
                            } else if (l == 0) {
                                sig = 1.0 - detail::smooth_step((u - (edge(l + 1) - mw)) / (2 * mw));
                            } else {
                                sig = detail::smooth_step((u - (edge(l) - mw)) / (2 * mw)) -
                                      detail::smooth_step((u - (edge(l + 1) - mw)) / (2 * mw));
                            }
                            p.values[i] *= lw * sig * std::polar(1.0, kTwoPi * theta * u);
                        }
                        const SampledFunction F = cumulative_integral(p);
                        for (std::size_t i = 0; i < p.size(); ++i) {
                            const double u = p.x(i);
                            // right-side variant: integral of p over [u - alpha, u];
                            // F.eval is 0 left of the grid = F(grid start)
                            acc.values[i] += (w / sharp) * scale_n *
                                             (F.values[i] - F.eval(u - alpha));
                        }
                    }
                }
                {
                    // localized factor at unit width (windowed modulated bump)
                    const double mw = kMargin;
                    auto edge = [&](int ll) { return static_cast<double>(j - 1 + ll); };
                    loc = work;
                    for (std::size_t i = 0; i < loc.size(); ++i) {
                        const double u = loc.x(i);
                        double sig;
                        if (remainder) {
                            sig = detail::smooth_step((u - (edge(l) - mw)) / (2 * mw));
                        } else if (l == 0) {
                            sig = 1.0 - detail::smooth_step((u - (edge(l + 1) - mw)) / (2 * mw));
                        } else {
                            sig = detail::smooth_step((u - (edge(l) - mw)) / (2 * mw)) -
                                  detail::smooth_step((u - (edge(l + 1) - mw)) / (2 * mw));
                        }
                        loc.values[i] *= lw * sig * std::polar(1.0, kTwoPi * theta * u);
                    }
                    have_loc = true;
                }
                (void)have_loc;

                AxisFactor af;
                af.j = j; af.n = n; af.l = l;
                af.side = Side::right;
                af.home = {static_cast<double>(j - 1 + l) - kMargin,
                           static_cast<double>(j + l) + kMargin};
                af.span = span;
                if (remainder) {
                    // drop the strip whose averaging window sticks out of the
                    // working grid; the true values there are annihilated
                    af.values = crop(acc, {w_lo, w_hi - (1.0 + sharp) - 0.2});
                    af.span = af.values.extent();
                } else {
                    af.values = std::move(acc);
                }
                factors_[{j, n, l}] = af;

                AxisFactor lf = af;
                lf.values = std::move(loc);
                localized_[{j, n, l}] = lf;

                // mirrored factor for -j with flipped modulation index
                AxisFactor afm;
                afm.j = -j; afm.n = -n; afm.l = l;
                afm.side = Side::left;
                afm.home = {-af.home.hi, -af.home.lo};
                afm.span = {-span.hi, -span.lo};
                afm.values = reflect(factors_[{j, n, l}].values);
                factors_[{-j, -n, l}] = afm;

                AxisFactor lfm = afm;
                lfm.values = reflect(localized_[{j, n, l}].values);
                localized_[{-j, -n, l}] = lfm;
            }
        }
    }
}

const AxisFactor& SymbolDecomposition::axis_factor(int j, int n, int l) const {
    const auto it = factors_.find({j, n, l});
    if (it == factors_.end()) throw std::out_of_range("axis_factor: index outside truncation");
    return it->second;
}

const AxisFactor& SymbolDecomposition::localized_factor(int j, int n, int l) const {
    const auto it = localized_.find({j, n, l});
    if (it == localized_.end()) throw std::out_of_range("localized_factor: index outside truncation");
    return it->second;
}

cplx SymbolDecomposition::axis_value(int j, int n, int l, double u) const {
    return axis_factor(j, n, l).values.eval(u);
}

cplx SymbolDecomposition::coefficient(int j1, int j2, double k, int n1, int n2) const {
    // cubic interpolation over slices on the kTableStep grid, built on demand
    const double kq = k / kTableStep;
    const auto base = static_cast<std::int64_t>(std::floor(kq));
    const double t = kq - static_cast<double>(base);
    cplx p[4];
    for (int s = -1; s <= 2; ++s) {
        const double kn = static_cast<double>(base + s) * kTableStep;
        const CoeffSlice* slice = table_.find(j1, j2, kn);
        if (slice == nullptr) {
            table_.insert(fourier_coeffs(m_, family_, j1, j2, kn, opts_.n_max, opts_.coeff));
            slice = table_.find(j1, j2, kn);
        }
        p[s + 1] = slice->at(n1, n2);
    }
    const cplx a = 2.0 * p[1];
    const cplx b = p[2] - p[0];
    const cplx c = 2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3];
    const cplx d = -p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3];
    return 0.5 * (a + b * t + c * t * t + d * t * t * t);
}

namespace {

struct KRange {
    double lo = 0.0, hi = 0.0;
    bool empty = false, unbounded_hi = false;
};

KRange k_range_for(double xi, const Interval& span) {
    // scales k with 2^{-k} * xi inside span
    KRange r;
    if (xi == 0.0) {
        r.empty = !(span.lo <= 0.0 && 0.0 <= span.hi);
        r.unbounded_hi = !r.empty;
        return r;
    }
    double lo = xi > 0 ? span.lo : -span.hi;
    double hi = xi > 0 ? span.hi : -span.lo;
    const double a = std::abs(xi);
    if (hi <= 0.0) { r.empty = true; return r; }
    r.lo = std::log2(a / hi);
    if (lo <= 0.0) { r.unbounded_hi = true; return r; }
    r.hi = std::log2(a / lo);
    return r;
}

} // namespace

SymbolDecomposition::KQuad SymbolDecomposition::k_quadrature(double xi1, double xi2, int j1, int j2,
                                                             std::optional<int> l1,
                                                             std::optional<int> l2) const {
    auto span_for = [&](int j, std::optional<int> l) {
        if (l) return axis_support(j, *l);
        const Interval a = axis_support(j, 0);
        const Interval b = axis_support(j, opts_.l_max + 1); // includes the remainder
        return Interval{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    };
    const KRange r1 = k_range_for(xi1, span_for(j1, l1));
    const KRange r2 = k_range_for(xi2, span_for(j2, l2));
    KQuad out;
    if (r1.empty || r2.empty) return out;
    double lo = std::max(r1.lo, r2.lo);
    double hi;
    if (r1.unbounded_hi && r2.unbounded_hi)
        throw std::domain_error("scale window unbounded; evaluation point too close to the axis ring");
    hi = r1.unbounded_hi ? r2.hi : (r2.unbounded_hi ? r1.hi : std::min(r1.hi, r2.hi));
    if (!(hi > lo)) return out;

    // panel boundaries at the scales where a profile or window transition
    // crosses one of the coordinates; the integrand has cliffs there
    std::vector<double> cuts{lo, hi};
    auto add_edges = [&](double xi, int j, std::optional<int> l) {
        if (xi == 0.0) return;
        const double a = std::abs(xi);
        const double jj = std::abs(j);
        const double m = family_.support(1).hi - 1.0; // transition half-width of the profiles
        std::vector<double> edges{jj - 1 - m, jj - 1, jj - 1 + m, jj - m, jj, jj + m};
        if (l) {
            const double g0 = jj - 1 + *l, g1 = jj + *l;
            for (double e : {g0 - m, g0, g0 + m, g1 - m, g1, g1 + m, g1 + 1.0 + global_.sharp})
                edges.push_back(e);
        }
        for (double e : edges) {
            if (e <= 0.0) continue;
            const double k = std::log2(a / e);
            if (k > lo + 1e-9 && k < hi - 1e-9) cuts.push_back(k);
        }
    };
    add_edges(xi1, j1, l1);
    add_edges(xi2, j2, l2);
    std::sort(cuts.begin(), cuts.end());

    const double max_panel = 1.0 / opts_.k_panels_per_unit;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
        for (int p = 0; p < sub; ++p) {
            for (const auto& [x, w] :
                 detail::gl4_nodes(a + (b - a) * p / sub, a + (b - a) * (p + 1) / sub)) {
                out.nodes.push_back(x);
                out.weights.push_back(w);
            }
        }
    }
    return out;
}

cplx SymbolDecomposition::evaluate_piece(int j1, int j2, int n1, int n2, int l1, int l2, double xi1,
                                         double xi2) const {
    const KQuad kq = k_quadrature(xi1, xi2, j1, j2, l1, l2);
    cplx acc{};
    for (std::size_t i = 0; i < kq.nodes.size(); ++i) {
        const double k = kq.nodes[i];
        const double s = std::exp2(-k);
        const cplx a1 = axis_value(j1, n1, l1, s * xi1);
        if (a1 == cplx{}) continue;
        const cplx a2 = axis_value(j2, n2, l2, s * xi2);
        if (a2 == cplx{}) continue;
        acc += kq.weights[i] * coefficient(j1, j2, k, n1, n2) * a1 * a2;
    }
    return acc;
}

cplx SymbolDecomposition::reconstruct_truncated(double xi1, double xi2, int n_cut, int l_cut) const {
    if (n_cut > opts_.n_max || l_cut > opts_.l_max)
        throw std::invalid_argument("reconstruct_truncated: cut beyond configured truncation");
    cplx total{};
    const int nw = 2 * n_cut + 1;
    std::vector<cplx> B1(static_cast<std::size_t>(nw)), B2(static_cast<std::size_t>(nw));
    for (const auto& [j1, j2] : ring_) {
        const KQuad kq = k_quadrature(xi1, xi2, j1, j2, std::nullopt, std::nullopt);
        for (std::size_t i = 0; i < kq.nodes.size(); ++i) {
            const double k = kq.nodes[i];
            const double s = std::exp2(-k);
            const double u1 = s * xi1, u2 = s * xi2;
            bool any1 = false, any2 = false;
            for (int n = -n_cut; n <= n_cut; ++n) {
                cplx b1{}, b2{};
                for (int l = 0; l <= l_cut; ++l) {
                    const double lw = std::pow(1.0 + l, -opts_.decay_order);
                    b1 += lw * axis_value(j1, n, l, u1);
                    b2 += lw * axis_value(j2, n, l, u2);
                }
                if (l_cut == opts_.l_max) {
                    // the remainder window completes the partition
                    b1 += axis_value(j1, n, opts_.l_max + 1, u1);
                    b2 += axis_value(j2, n, opts_.l_max + 1, u2);
                }
                B1[static_cast<std::size_t>(n + n_cut)] = b1;
                B2[static_cast<std::size_t>(n + n_cut)] = b2;
                any1 = any1 || b1 != cplx{};
                any2 = any2 || b2 != cplx{};
            }
            if (!any1 || !any2) continue;
            cplx node{};
            for (int a = -n_cut; a <= n_cut; ++a) {
                const cplx b1 = B1[static_cast<std::size_t>(a + n_cut)];
                if (b1 == cplx{}) continue;
                for (int b = -n_cut; b <= n_cut; ++b) {
                    const cplx b2 = B2[static_cast<std::size_t>(b + n_cut)];
                    if (b2 == cplx{}) continue;
                    node += coefficient(j1, j2, k, a, b) * b1 * b2;
                }
            }
            total += kq.weights[i] * node;
        }
    }
    return total;
}

cplx SymbolDecomposition::reconstruct(double xi1, double xi2) const {
    return reconstruct_truncated(xi1, xi2, opts_.n_max, opts_.l_max);
}

// ---------------------------------------------------------------------------
// translated representation
// ---------------------------------------------------------------------------

TranslatedPiece translate_piece(const SymbolDecomposition& dec, int j1, int j2, int n1, int n2,
                                int l1, int l2, double N1, double N2, const TranslateOptions& opts) {
    const auto& g = dec.global();

    // The width averages must be quadratures, not draws: the localized
    // factors ring in the near-kernel of the averaged indicator, and the
    // ringing cancels only under the exact width mean. The scale offset is a
    // smooth periodic average, sampled on a stratified midpoint grid.
    struct Draw {
        double a1, a2, w1, w2, kappa;
    };
    const auto a_nodes = detail::gl4_nodes(1.0, 1.0 + g.sharp);
    std::vector<Draw> draws;
    for (const auto& [a1, w1] : a_nodes)
        for (const auto& [a2, w2] : a_nodes)
            for (int qv = 0; qv < opts.kappa_samples; ++qv)
                draws.push_back({a1, a2, w1 / g.sharp, w2 / g.sharp,
                                 (qv + 0.5) / opts.kappa_samples});

    TranslatedPiece out;
    out.N1 = N1;
    out.N2 = N2;

    // per-axis t-average of the located translate at one scale
    auto axis_tmean = [&dec](int j, int n, int l, double alpha, double kk, double N,
                             double xi) -> cplx {
        const auto& lf = dec.localized_factor(j, n, l);
        // base-scale anchor of the nominal window
        const double h0 = (j > 0) ? alpha * static_cast<double>(j - 1 + l)
                                  : -alpha * static_cast<double>(-j + l);
        const double per = alpha * std::exp2(kk);
        const double inv = std::exp2(-kk);
        const int up = (j > 0) ? (l + j) : (j - l); // signed translate count
        auto value_at = [&](double t) {
            const double cell_lo = per * std::floor((N + t) / per) - t;
            const double a_loc = cell_lo + static_cast<double>(up) * per;
            // base coordinate of xi under the translate anchored at a_loc
            const double u = inv * (xi - a_loc) + h0;
            return lf.values.eval(u);
        };
        // the located cell changes once per period; each smooth piece still
        // sweeps the factor across its whole window, so subdivide finely
        // enough to resolve the window transitions
        double tstar = per * std::ceil(N / per) - N;
        tstar = std::fmod(tstar, per);
        if (tstar < 0) tstar += per;
        cplx acc{};
        auto piece_integral = [&](double a, double b) {
            if (!(b - a > 1e-12 * per)) return;
            const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / per * 24.0)));
            for (int p = 0; p < panels; ++p)
                acc += detail::gl12(a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels,
                                    value_at);
        };
        piece_integral(0.0, tstar);
        piece_integral(tstar, per);
        return acc / per;
    };

    // capture everything needed for evaluation; the closure borrows `dec`
    auto draws_copy = draws;
    const double kappa_weight = 1.0 / opts.kappa_samples;
    out.eval = [&dec, draws_copy, j1, j2, n1, n2, l1, l2, N1, N2, axis_tmean,
                kappa_weight](double xi1, double xi2) -> cplx {
        cplx total{};
        for (const auto& d : draws_copy) {
            cplx per_draw{};
            for (int k = -40; k <= 40; ++k) {
                const double kk = static_cast<double>(k) + d.kappa;
                // quick support screen on both axes
                const double s = std::exp2(-kk);
                const Interval s1 = dec.axis_factor(j1, n1, l1).span;
                const Interval s2 = dec.axis_factor(j2, n2, l2).span;
                const double slack = 1.0 + dec.global().sharp;
                const double u1 = s * (xi1 - N1);
                const double u2 = s * (xi2 - N2);
                if (u1 < s1.lo - slack || u1 > s1.hi + slack) continue;
                if (u2 < s2.lo - slack || u2 > s2.hi + slack) continue;
                const cplx t1 = axis_tmean(j1, n1, l1, d.a1, kk, N1, xi1);
                if (t1 == cplx{}) continue;
                const cplx t2 = axis_tmean(j2, n2, l2, d.a2, kk, N2, xi2);
                if (t2 == cplx{}) continue;
                // width factors in front of the period means
                per_draw += (d.a1 * d.a2) * dec.coefficient(j1, j2, kk, n1, n2) * t1 * t2;
            }
            total += per_draw * (d.w1 * d.w2);
        }
        return total * (kappa_weight);
    };

    // record indicator cells at a few integer scales for inspection (one
    // sample per width pair)
    for (std::size_t di = 0; di < draws.size(); di += static_cast<std::size_t>(opts.kappa_samples)) {
        const auto& d = draws[di];
        TranslatedPieceSample s;
        s.grid1 = {d.a1, 0.0, d.kappa};
        s.grid2 = {d.a2, 0.0, d.kappa};
        s.kappa = d.kappa;
        for (int k = -3; k <= 3; ++k) {
            s.cells1.push_back(dyadic::locate(s.grid1, k, N1));
            s.cells2.push_back(dyadic::locate(s.grid2, k, N2));
        }
        out.samples.push_back(std::move(s));
    }
    return out;
}

} // namespace carleson::symbol
