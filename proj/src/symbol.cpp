#include "carleson/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quad.hpp"

namespace carleson::symbol {

namespace {

using detail::gl12;
using detail::smooth_step;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMargin = 1.0 / 48.0; // half-width of the profile transitions

// transition from 0 to 1 across [c - kMargin, c + kMargin]
double edge_rise(double u, double c) { return smooth_step((u - (c - kMargin)) / (2.0 * kMargin)); }

} // namespace

PsiFamily::PsiFamily(int M) : M_(M) {
    if (M < 1) throw std::invalid_argument("PsiFamily: M must be >= 1");
}

PsiFamily make_psi_family(int M) { return PsiFamily(M); }

Interval PsiFamily::plateau(int j) const {
    if (j == 0 || std::abs(j) > M_) throw std::invalid_argument("PsiFamily: bad profile index");
    return j > 0 ? Interval{static_cast<double>(j - 1), static_cast<double>(j)}
                 : Interval{static_cast<double>(j), static_cast<double>(j + 1)};
}

Interval PsiFamily::support(int j) const {
    const Interval p = plateau(j);
    return {p.lo - kMargin, p.hi + kMargin};
}

Interval PsiFamily::period_cell(int j) const { return plateau(j).dilated(10.0 / 9.0); }

// The profiles form a partition of unity: transitions of adjacent profiles are
// complementary across the shared cell edge, so the row sum is exactly 1 on
// [-M + margin, M - margin]. (A full plateau on the closed unit cell would
// force the row sum to double at every shared edge and at the origin, which
// plants sharp features into the scale integral.)
double PsiFamily::psi_hat(int j, double xi) const {
    const Interval p = plateau(j);
    if (j < 0) return psi_hat(-j, -xi);
    return edge_rise(xi, p.lo) - edge_rise(xi, p.hi);
}

namespace {

// sum over j in {-M..-1, 1..M} of psi_hat_j(u): nonzero js are within one cell of u
double row_sum(const PsiFamily& fam, double u) {
    double acc = 0.0;
    const int M = fam.M();
    const auto lo = static_cast<int>(std::floor(u - kMargin));
    const auto hi = static_cast<int>(std::ceil(u + kMargin));
    // positive candidates: plateau [j-1, j] near u
    for (int j = std::max(1, lo); j <= std::min(M, hi + 1); ++j) acc += fam.psi_hat(j, u);
    // negative candidates: plateau [j, j+1] near u
    for (int j = std::max(-M, lo - 1); j <= std::min(-1, hi); ++j) acc += fam.psi_hat(j, u);
    return acc;
}

double edge_sum(const PsiFamily& fam, double u) {
    return fam.psi_hat(fam.M(), u) + fam.psi_hat(-fam.M(), u);
}

double ring_integrand(const PsiFamily& fam, double u1, double u2) {
    const double t1 = edge_sum(fam, u1), t2 = edge_sum(fam, u2);
    if (t1 == 0.0 && t2 == 0.0) return 0.0;
    const double s1 = row_sum(fam, u1), s2 = row_sum(fam, u2);
    return t1 * s2 + t2 * s1 - t1 * t2;
}

} // namespace

Interval mtilde_k_window(const PsiFamily& family, double xi1, double xi2) {
    const int M = family.M();
    if (M < 2) throw std::invalid_argument("mtilde: requires M >= 2");
    const double r = std::max(std::abs(xi1), std::abs(xi2));
    if (r == 0.0) throw std::invalid_argument("mtilde: undefined at the origin");
    const double lo = std::log2(r / (static_cast<double>(M) + kMargin));
    const double hi = std::log2(r / (static_cast<double>(M) - 1.0 - kMargin));
    return {lo, hi};
}

double mtilde(const PsiFamily& family, double xi1, double xi2, const Interval& k_window) {
    const Interval need = mtilde_k_window(family, xi1, xi2);
    if (k_window.lo > need.lo + 1e-12 || k_window.hi < need.hi - 1e-12)
        throw std::domain_error("mtilde: k window clips the scale support");
    auto f = [&](double k) {
        const double s = std::exp2(-k);
        return ring_integrand(family, s * xi1, s * xi2);
    };
    // Panel boundaries at the scales where a profile transition edge crosses
    // one of the coordinates, so every panel is a smooth piece.
    std::vector<double> cuts{need.lo, need.hi};
    const int M = family.M();
    for (double xi : {std::abs(xi1), std::abs(xi2)}) {
        if (xi == 0.0) continue;
        for (int c = 0; c <= M; ++c) {
            for (double e : {c - kMargin, static_cast<double>(c), c + kMargin}) {
                if (e <= 0.0) continue;
                const double k = std::log2(xi / e);
                if (k > need.lo + 1e-12 && k < need.hi - 1e-12) cuts.push_back(k);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / 0.2)));
        for (int s = 0; s < sub; ++s)
            acc += gl12(a + (b - a) * s / sub, a + (b - a) * (s + 1) / sub, f);
    }
    return acc;
}

double mtilde(const PsiFamily& family, double xi1, double xi2) {
    return mtilde(family, xi1, xi2, mtilde_k_window(family, xi1, xi2));
}

double mtilde_lower_bound(const PsiFamily& family, int n_radii, int n_angles) {
    double c0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_radii; ++i) {
        // one dyadic block of radii suffices: the integral is 2-dilation invariant
        const double r = std::exp2(static_cast<double>(i) / n_radii);
        for (int a = 0; a < n_angles; ++a) {
            const double th = kTwoPi * a / n_angles;
            c0 = std::min(c0, mtilde(family, r * std::cos(th), r * std::sin(th)));
        }
    }
    return c0;
}

MihlinSymbol test_symbol(const std::string& name) {
    if (name == "unit") {
        return {[](double, double) { return cplx{1.0, 0.0}; }, 1.0, 4};
    }
    if (name == "ratio") {
        return {[](double x, double y) {
                    const double r2 = x * x + y * y;
                    const double q = std::pow(x * x * x * x + y * y * y * y, 0.25);
                    return cplx{std::sqrt(r2) / q, 0.0};
                },
                24.0, 2};
    }
    if (name == "angular") {
        return {[](double x, double y) {
                    const cplx z{x, y};
                    return z * z / (x * x + y * y);
                },
                48.0, 2};
    }
    if (name == "halfplane") {
        return {[](double x, double y) {
                    const double r = std::sqrt(x * x + y * y);
                    return cplx{std::tanh(5.0 * (x + 2.0 * y) / r), 0.0};
                },
                640.0, 2};
    }
    throw std::invalid_argument("test_symbol: unknown symbol name '" + name + "'");
}

MihlinCheckResult mihlin_check(const MihlinSymbol& m, int max_order, double r_lo, double r_hi,
                               int n_radii, int n_angles) {
    MihlinCheckResult res;
    res.order_checked = max_order;
    double worst = 0.0;
    for (int i = 0; i < n_radii; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (n_radii - 1));
        const double h = 1e-3 * r;
        for (int a = 0; a < n_angles; ++a) {
            const double th = kTwoPi * (a + 0.31) / n_angles;
            const double x = r * std::cos(th), y = r * std::sin(th);
            auto f = [&](double u, double v) { return m.eval(u, v); };
            for (int ax = 0; ax <= max_order; ++ax) {
                for (int ay = 0; ax + ay <= max_order; ++ay) {
                    cplx d{};
                    if (ax == 0 && ay == 0) d = f(x, y);
                    else if (ax == 1 && ay == 0) d = (f(x + h, y) - f(x - h, y)) / (2 * h);
                    else if (ax == 0 && ay == 1) d = (f(x, y + h) - f(x, y - h)) / (2 * h);
                    else if (ax == 2 && ay == 0) d = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
                    else if (ax == 0 && ay == 2) d = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
                    else if (ax == 1 && ay == 1)
                        d = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
                            (4 * h * h);
                    else continue;
                    worst = std::max(worst, std::abs(d) * std::pow(r, ax + ay));
                }
            }
        }
    }
    res.worst_constant = worst;
    res.pass = worst <= m.mihlin_bound * (1.0 + 1e-9);
    return res;
}

// ---------------------------------------------------------------------------
// Fourier coefficients
// ---------------------------------------------------------------------------

cplx CoeffSlice::at(int n1, int n2) const {
    if (std::abs(n1) > n_max || std::abs(n2) > n_max)
        throw std::out_of_range("CoeffSlice::at: mode index beyond n_max");
    const int w = 2 * n_max + 1;
    return c[static_cast<std::size_t>((n1 + n_max) * w + (n2 + n_max))];
}

namespace {

/// Cyclic Jacobi diagonalization of a Hermitian matrix (row-major, small n).
void hermitian_eig(std::vector<cplx>& A, int n, std::vector<double>& evals,
                   std::vector<cplx>& V) {
    V.assign(static_cast<std::size_t>(n) * n, cplx{});
    for (int i = 0; i < n; ++i) V[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto at = [&](std::vector<cplx>& M, int r, int c) -> cplx& {
        return M[static_cast<std::size_t>(r) * n + c];
    };
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(at(A, p, q));
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = at(A, p, q);
                const double b = std::abs(apq);
                if (b < 1e-300) continue;
                const double app = at(A, p, p).real(), aqq = at(A, q, q).real();
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx ph = apq / b;
                // columns p, q of A and V: G = [c, s*ph; -s*conj(ph), c]
                for (int r = 0; r < n; ++r) {
                    const cplx arp = at(A, r, p), arq = at(A, r, q);
                    at(A, r, p) = c * arp - s * std::conj(ph) * arq;
                    at(A, r, q) = s * ph * arp + c * arq;
                    const cplx vrp = at(V, r, p), vrq = at(V, r, q);
                    at(V, r, p) = c * vrp - s * std::conj(ph) * vrq;
                    at(V, r, q) = s * ph * vrp + c * vrq;
                }
                for (int r = 0; r < n; ++r) {
                    const cplx apr = at(A, p, r), aqr = at(A, q, r);
                    at(A, p, r) = c * apr - s * ph * aqr;
                    at(A, q, r) = s * std::conj(ph) * apr + c * aqr;
                }
            }
        }
    }
    evals.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) evals[static_cast<std::size_t>(i)] = at(A, i, i).real();
}

/// Coefficients as the profile-weighted least-squares representation of the
/// quotient in the series modes, with a ridge that prefers rapid mode decay.
/// The quotient has no small-scale structure inside the profile supports, so
/// the representation inherits its smoothness; an arbitrary cutoff extension
/// would instead floor the decay with seam content the downstream sums never
/// see.
CoeffSlice coeffs_at_grid(const MihlinSymbol& m, const PsiFamily& family, int j1, int j2, double k,
                          int n_max, int N, double ridge_eps, double ridge_order) {
    const double scale = std::exp2(k);
    const Interval cell1 = family.period_cell(j1), cell2 = family.period_cell(j2);
    const int K = 2 * n_max + 1;

    auto quotient = [&](double xi1, double xi2) {
        return m.eval(xi1, xi2) / mtilde(family, xi1, xi2);
    };

    // per-axis sample grids, weights and mode values; the basis in base-scale
    // coordinates u = 2^{-k} xi is e^{2 pi i 0.9 n u} for every k
    std::vector<double> u1(N), u2(N), w1(N), w2(N);
    for (int s = 0; s < N; ++s) {
        u1[s] = cell1.lo + cell1.length() * (s + 0.5) / N;
        u2[s] = cell2.lo + cell2.length() * (s + 0.5) / N;
        w1[s] = family.psi_hat(j1, u1[s]);
        w2[s] = family.psi_hat(j2, u2[s]);
    }
    auto modes = [&](const std::vector<double>& u) {
        std::vector<cplx> B(static_cast<std::size_t>(N) * K);
        for (int s = 0; s < N; ++s)
            for (int n = -n_max; n <= n_max; ++n)
                B[static_cast<std::size_t>(s) * K + (n + n_max)] =
                    std::polar(1.0, kTwoPi * 0.9 * n * u[s]);
        return B;
    };
    const auto B1 = modes(u1), B2 = modes(u2);

    auto gram = [&](const std::vector<cplx>& B, const std::vector<double>& w) {
        std::vector<cplx> A(static_cast<std::size_t>(K) * K, cplx{});
        for (int s = 0; s < N; ++s) {
            if (w[s] == 0.0) continue;
            for (int a = 0; a < K; ++a) {
                const cplx ba = std::conj(B[static_cast<std::size_t>(s) * K + a]) * w[s];
                for (int b = 0; b < K; ++b)
                    A[static_cast<std::size_t>(a) * K + b] += ba * B[static_cast<std::size_t>(s) * K + b];
            }
        }
        return A;
    };
    std::vector<cplx> A1 = gram(B1, w1), A2 = gram(B2, w2);

    // quotient samples where the weight is nonzero
    std::vector<cplx> q(static_cast<std::size_t>(N) * N, cplx{});
    for (int s = 0; s < N; ++s) {
        if (w1[s] == 0.0) continue;
        for (int t = 0; t < N; ++t) {
            if (w2[t] == 0.0) continue;
            q[static_cast<std::size_t>(s) * N + t] = quotient(u1[s] * scale, u2[t] * scale);
        }
    }

    // right-hand side b[a,c] = sum_{s,t} w1 w2 conj(B1[s,a] B2[t,c]) q[s,t]
    std::vector<cplx> G(static_cast<std::size_t>(N) * K, cplx{});
    for (int s = 0; s < N; ++s) {
        if (w1[s] == 0.0) continue;
        for (int t = 0; t < N; ++t) {
            const cplx qv = q[static_cast<std::size_t>(s) * N + t] * w2[t];
            if (qv == cplx{}) continue;
            for (int c = 0; c < K; ++c)
                G[static_cast<std::size_t>(s) * K + c] +=
                    qv * std::conj(B2[static_cast<std::size_t>(t) * K + c]);
        }
    }
    std::vector<cplx> rhs(static_cast<std::size_t>(K) * K, cplx{});
    for (int s = 0; s < N; ++s) {
        if (w1[s] == 0.0) continue;
        for (int a = 0; a < K; ++a) {
            const cplx ba = std::conj(B1[static_cast<std::size_t>(s) * K + a]) * w1[s];
            for (int c = 0; c < K; ++c)
                rhs[static_cast<std::size_t>(a) * K + c] += ba * G[static_cast<std::size_t>(s) * K + c];
        }
    }

    // diagonal decay ridge, tensor form d1(n1) * d2(n2)
    auto mean_diag = [&](const std::vector<cplx>& A) {
        double tr = 0.0;
        for (int i = 0; i < K; ++i) tr += A[static_cast<std::size_t>(i) * K + i].real();
        return tr / K;
    };
    const double eps1 = ridge_eps * mean_diag(A1), eps2 = ridge_eps * mean_diag(A2);
    auto ridge = [&](double eps) {
        std::vector<double> d(static_cast<std::size_t>(K));
        for (int n = -n_max; n <= n_max; ++n)
            d[static_cast<std::size_t>(n + n_max)] = eps * std::pow(1.0 + std::abs(n), ridge_order);
        return d;
    };
    const auto d1 = ridge(eps1), d2 = ridge(eps2);

    // whiten, diagonalize per axis, solve (B1 x B2 + I) in the eigenbasis
    auto whiten = [&](std::vector<cplx> A, const std::vector<double>& d, std::vector<double>& ev,
                      std::vector<cplx>& V) {
        for (int a = 0; a < K; ++a)
            for (int b = 0; b < K; ++b)
                A[static_cast<std::size_t>(a) * K + b] /=
                    std::sqrt(d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(b)]);
        hermitian_eig(A, K, ev, V);
    };
    std::vector<double> ev1, ev2;
    std::vector<cplx> V1, V2;
    whiten(A1, d1, ev1, V1);
    whiten(A2, d2, ev2, V2);

    // y = V^H D^{-1/2} rhs D^{-1/2} V  (apply axis 1 on the left, axis 2 on the right)
    std::vector<cplx> tmp(static_cast<std::size_t>(K) * K, cplx{});
    for (int a = 0; a < K; ++a)
        for (int c = 0; c < K; ++c)
            tmp[static_cast<std::size_t>(a) * K + c] =
                rhs[static_cast<std::size_t>(a) * K + c] /
                std::sqrt(d1[static_cast<std::size_t>(a)] * d2[static_cast<std::size_t>(c)]);
    // normal equations read A1 C A2^T + C = tmp after whitening, so the
    // second axis diagonalizes through the conjugate eigenbasis
    std::vector<cplx> y(static_cast<std::size_t>(K) * K, cplx{});
    for (int a = 0; a < K; ++a)
        for (int c = 0; c < K; ++c) {
            cplx acc{};
            for (int r = 0; r < K; ++r)
                for (int t = 0; t < K; ++t)
                    acc += std::conj(V1[static_cast<std::size_t>(r) * K + a]) *
                           tmp[static_cast<std::size_t>(r) * K + t] *
                           std::conj(V2[static_cast<std::size_t>(t) * K + c]);
            y[static_cast<std::size_t>(a) * K + c] =
                acc / (ev1[static_cast<std::size_t>(a)] * ev2[static_cast<std::size_t>(c)] + 1.0);
        }
    std::vector<cplx> C(static_cast<std::size_t>(K) * K, cplx{});
    for (int a = 0; a < K; ++a)
        for (int c = 0; c < K; ++c) {
            cplx acc{};
            for (int r = 0; r < K; ++r)
                for (int t = 0; t < K; ++t)
                    acc += V1[static_cast<std::size_t>(a) * K + r] *
                           y[static_cast<std::size_t>(r) * K + t] *
                           V2[static_cast<std::size_t>(c) * K + t];
            C[static_cast<std::size_t>(a) * K + c] =
                acc / std::sqrt(d1[static_cast<std::size_t>(a)] * d2[static_cast<std::size_t>(c)]);
        }

    // weighted representation residual (tensor evaluation of the fit)
    std::vector<cplx> F1(static_cast<std::size_t>(N) * K, cplx{});
    for (int s = 0; s < N; ++s)
        for (int a = 0; a < K; ++a) {
            const cplx ba = B1[static_cast<std::size_t>(s) * K + a];
            for (int c = 0; c < K; ++c)
                F1[static_cast<std::size_t>(s) * K + c] +=
                    C[static_cast<std::size_t>(a) * K + c] * ba;
        }
    double num = 0.0, den = 0.0;
    for (int s = 0; s < N; ++s) {
        if (w1[s] == 0.0) continue;
        for (int t = 0; t < N; ++t) {
            if (w2[t] == 0.0) continue;
            cplx fit{};
            for (int c = 0; c < K; ++c)
                fit += F1[static_cast<std::size_t>(s) * K + c] *
                       B2[static_cast<std::size_t>(t) * K + c];
            const double w = w1[s] * w2[t];
            num += w * std::norm(fit - q[static_cast<std::size_t>(s) * N + t]);
            den += w * std::norm(q[static_cast<std::size_t>(s) * N + t]);
        }
    }
    CoeffSlice out;
    out.j1 = j1;
    out.j2 = j2;
    out.k = k;
    out.n_max = n_max;
    out.residual = den > 0 ? std::sqrt(num / den) : 0.0;
    out.c = std::move(C);
    return out;
}

} // namespace

CoeffSlice fourier_coeffs(const MihlinSymbol& m, const PsiFamily& family, int j1, int j2, double k,
                          int n_max, const CoeffOptions& opts) {
    if (std::max(std::abs(j1), std::abs(j2)) > family.M() || j1 == 0 || j2 == 0)
        throw std::invalid_argument("fourier_coeffs: invalid (j1, j2)");
    CoeffSlice s = coeffs_at_grid(m, family, j1, j2, k, n_max, opts.grid, opts.ridge,
                                  opts.ridge_order);
    if (opts.refine_check) {
        const CoeffSlice s2 = coeffs_at_grid(m, family, j1, j2, k, n_max, 2 * opts.grid, opts.ridge,
                                             opts.ridge_order);
        double drift = 0.0;
        for (std::size_t i = 0; i < s.c.size(); ++i) drift = std::max(drift, std::abs(s.c[i] - s2.c[i]));
        if (drift > opts.refine_tol)
            throw std::runtime_error("fourier_coeffs: quadrature did not converge under refinement");
    }
    return s;
}

const CoeffSlice* CoeffTable::find(int j1, int j2, double k) const {
    const auto it = slices.find({j1, j2, quantize_k(k)});
    return it == slices.end() ? nullptr : &it->second;
}

void CoeffTable::insert(CoeffSlice s) {
    n_max = std::max(n_max, s.n_max);
    slices[{s.j1, s.j2, quantize_k(s.k)}] = std::move(s);
}

double CoeffTable::decay_constant(double q) const {
    double c = 0.0;
    for (const auto& [key, s] : slices) {
        for (int n1 = -s.n_max; n1 <= s.n_max; ++n1)
            for (int n2 = -s.n_max; n2 <= s.n_max; ++n2)
                c = std::max(c, std::abs(s.at(n1, n2)) * std::pow(1.0 + std::abs(n1), q) *
                                    std::pow(1.0 + std::abs(n2), q));
    }
    return c;
}

double CoeffTable::fitted_decay_order(int axis) const {
    if (axis != 1 && axis != 2) throw std::invalid_argument("fitted_decay_order: axis must be 1 or 2");
    std::map<int, double> peak; // |n| -> max |C|
    for (const auto& [key, s] : slices) {
        for (int n1 = -s.n_max; n1 <= s.n_max; ++n1)
            for (int n2 = -s.n_max; n2 <= s.n_max; ++n2) {
                const int n = std::abs(axis == 1 ? n1 : n2);
                if (n == 0) continue;
                auto& p = peak[n];
                p = std::max(p, std::abs(s.at(n1, n2)));
            }
    }
    // least squares on log|C| vs log(1+n) over the asymptotic (upper) half
    const int n_lo = std::max(1, n_max / 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& [n, v] : peak) {
        if (v <= 0.0 || n < n_lo) continue;
        const double x = std::log(1.0 + n), y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return -slope;
}

} // namespace carleson::symbol
