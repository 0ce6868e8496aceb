#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carleson/dyadic.hpp"
#include "carleson/interval.hpp"
#include "carleson/sampled.hpp"

namespace carleson::symbol {

using dyadic::GlobalParams;

/// Bivariate multiplier, smooth away from the origin, with derivative decay
/// |d^a m(xi)| <= mihlin_bound / |xi|^{|a|} up to max_order.
struct MihlinSymbol {
    std::function<cplx(double, double)> eval;
    double mihlin_bound = 1.0;
    int max_order = 2;
};

/// Built-in test symbols: "unit", "ratio" (smoothed l2/l4 quotient, degree-0
/// homogeneous), "angular" (e^{2i theta}), "halfplane" (smoothed sign of
/// xi1 + 2 xi2).
MihlinSymbol test_symbol(const std::string& name);

struct MihlinCheckResult {
    bool pass = false;
    double worst_constant = 0.0; // max over grid of |d^a m| * |xi|^{|a|}
    int order_checked = 0;
};

/// Finite-difference spot check of the derivative decay on a log-spaced grid.
MihlinCheckResult mihlin_check(const MihlinSymbol& m, int max_order = 2,
                               double r_lo = 0.5, double r_hi = 64.0, int n_radii = 12,
                               int n_angles = 16);

/// Smooth frequency profiles psi_hat_j, j in {-M..-1, 1..M}: equal to 1 on the
/// unit plateau ([j-1,j] for j>0, [j,j+1] for j<0) and supported in the
/// (19/18)-dilate of it (inside the (10/9)-dilate, leaving a seam margin).
class PsiFamily {
public:
    explicit PsiFamily(int M);

    int M() const { return M_; }
    double psi_hat(int j, double xi) const;
    Interval plateau(int j) const;
    Interval support(int j) const;
    /// Period cell used for the Fourier series on axis j at base scale:
    /// the (10/9)-dilate of the plateau (length 10/9).
    Interval period_cell(int j) const;

private:
    int M_;
};

PsiFamily make_psi_family(int M);

/// Ring sum over max(|j1|,|j2|) = M of the dilated tensor profiles,
/// integrated over the continuous scale parameter. Dilation invariant under
/// (xi1, xi2) -> (2 xi1, 2 xi2), bounded below away from the origin.
/// k_window must cover every scale where the integrand is nonzero; a window
/// that clips support throws std::domain_error.
double mtilde(const PsiFamily& family, double xi1, double xi2, const Interval& k_window);

/// Automatic window for mtilde at the given point.
Interval mtilde_k_window(const PsiFamily& family, double xi1, double xi2);
double mtilde(const PsiFamily& family, double xi1, double xi2);

/// min |mtilde| over a log-radial grid; the recorded lower constant.
double mtilde_lower_bound(const PsiFamily& family, int n_radii = 40, int n_angles = 25);

// ---------------------------------------------------------------------------
// Fourier coefficients of m / mtilde on the period rectangles
// ---------------------------------------------------------------------------

struct CoeffSlice {
    int j1 = 0, j2 = 0;
    double k = 0.0;
    int n_max = 0;
    double residual = 0.0;   // weighted relative representation residual
    std::vector<cplx> c;     // (2*n_max+1)^2 row-major, n1 = row - n_max

    cplx at(int n1, int n2) const;
};

struct CoeffOptions {
    int grid = 64;            // samples per axis for the representation fit
    double ridge = 1e-8;      // relative strength of the decay ridge
    double ridge_order = 6.0; // mode-growth exponent of the ridge
    bool refine_check = false;
    double refine_tol = 1e-6; // max coefficient drift allowed under grid doubling
};

/// Double Fourier series coefficients of (m/mtilde) * seam window on the
/// period rectangle of (j1, j2) at scale k, with the rectangle's own modes.
/// Throws std::runtime_error if grid doubling moves coefficients beyond the
/// tolerance (quadrature non-convergence).
CoeffSlice fourier_coeffs(const MihlinSymbol& m, const PsiFamily& family, int j1, int j2,
                          double k, int n_max, const CoeffOptions& opts = {});

struct CoeffTable {
    int n_max = 0;
    double decay_order = 8.0; // the configured decay order q
    std::map<std::tuple<int, int, std::int64_t>, CoeffSlice> slices; // key: (j1, j2, quantized k)

    static std::int64_t quantize_k(double k) { return std::llround(k * 1048576.0); }
    const CoeffSlice* find(int j1, int j2, double k) const;
    void insert(CoeffSlice s);

    /// Smallest c with |C_{n1,n2}| <= c (1+|n1|)^{-q} (1+|n2|)^{-q} over all slices.
    double decay_constant(double q) const;
    /// Least-squares decay exponent of max_{other} |C| vs (1+|n|) along one
    /// axis, fitted over the upper half of the mode range where the
    /// asymptotic regime lives (low modes carry the symbol's own profile).
    double fitted_decay_order(int axis) const;
};

// ---------------------------------------------------------------------------
// Left/right averaged-indicator factorization
// ---------------------------------------------------------------------------

enum class Side { left, right };

/// The averaged indicator lambda_side with width parameter sharp, and its
/// closed-form Fourier transform.
struct LeftRightAverager {
    Side side = Side::left;
    double sharp = 0.01;

    /// Closed-form transform; the limit value at xi = 0 is 1 + sharp/2.
    cplx transform(double xi) const;
    /// Time-domain profile (1 on the unit core, linear ramp of width sharp).
    double time_domain(double x) const;
};

cplx lambda_transform(double sharp, Side side, double xi);

/// Convolution f * lambda^k_side via antiderivatives of f (independent of any
/// transform-domain route); lambda^k(x) = 2^{-k} lambda(2^{-k} x).
SampledFunction convolve_lambda(const SampledFunction& f, Side side, double sharp, double k = 0.0);

struct FactorOptions {
    double pad_major = 40.0;  // absolute padding on the tail side
    double pad_minor = 8.0;   // absolute padding on the supported side
    double division_floor = 1e-12;
    std::size_t min_samples = 1u << 13;
};

/// Decay length of the factored bump's transient: the slow ringing injected
/// by the near-zeros of the averager transform, about 6/(pi*sharp)^2.
double factor_tail_scale(double sharp);

/// Bump Phi with Phi * lambda_side = phi and one-sided support (left side:
/// support in (-inf, b_I]). phi must be smooth and supported on its grid.
SampledFunction factor_bump(const SampledFunction& phi, Side side, double sharp,
                            const FactorOptions& opts = {});

/// Modulated, rescaled variant: returns Phi with
///   scale_n * (Phi(.) e^{2 pi i theta .}) * lambda^k_side = phi(.) e^{2 pi i theta .},
/// where theta = n * 2^{-k} and scale_n = n (or 1 when n = 0).
SampledFunction factor_bump_scaled_modulated(const SampledFunction& phi, Side side, double sharp,
                                             double k, double n, const FactorOptions& opts = {});

/// Core routine behind the two wrappers: arbitrary modulation frequency.
SampledFunction factor_bump_modulated(const SampledFunction& phi, Side side, double sharp,
                                      double k, double theta, double scale_n,
                                      const FactorOptions& opts = {});

// ---------------------------------------------------------------------------
// Full decomposition
// ---------------------------------------------------------------------------

struct DecompositionOptions {
    int n_max = 8;
    int l_max = 8;
    double decay_order = 8.0; // q: the explicit (1+l)^{-q} ladder weights
    int alpha_nodes = 4;      // Gauss nodes for the [1, 1+sharp] averages
    int k_panels_per_unit = 16;
    int k_nodes_per_panel = 4;
    double axis_spacing = 1.0 / 256.0;
    CoeffOptions coeff;
};

/// One localized axis factor: the lambda-convolved, alpha-averaged, windowed
/// modulated bump at base scale, attached to the window index l on axis j
/// with modulation index n.
struct AxisFactor {
    int j = 0, n = 0, l = 0;
    Side side = Side::left;
    SampledFunction values;  // frequency-side samples at base scale
    Interval home;           // base-scale home interval of the window
    Interval span;           // conservative support used for scale windows
};

class SymbolDecomposition {
public:
    SymbolDecomposition(MihlinSymbol m, int M, double sharp, DecompositionOptions opts = {});

    const PsiFamily& family() const { return family_; }
    const DecompositionOptions& options() const { return opts_; }
    const GlobalParams& global() const { return global_; }

    /// Truncated reconstruction of the symbol at a point.
    cplx reconstruct(double xi1, double xi2) const;

    /// Reconstruction with tighter truncations (for monotonicity studies).
    cplx reconstruct_truncated(double xi1, double xi2, int n_cut, int l_cut) const;

    /// Scale integral of C * axis1 * axis2 for one (j1,j2,n1,n2,l1,l2) index,
    /// without the scalar ladder weights.
    cplx evaluate_piece(int j1, int j2, int n1, int n2, int l1, int l2, double xi1,
                        double xi2) const;

    /// The ladder weight (1+l1)^{-q} (1+l2)^{-q} applied by reconstruct.
    double ladder_weight(int l1, int l2) const;

    /// Both axes share profiles, so factors are keyed by (j, n, l) only.
    const AxisFactor& axis_factor(int j, int n, int l) const;

    /// Windowed modulated bump at base scale before lambda-convolution: the
    /// localized factor whose translates drive packets and indicators.
    const AxisFactor& localized_factor(int j, int n, int l) const;

    const CoeffTable& coefficients() const { return table_; }
    cplx coefficient(int j1, int j2, double k, int n1, int n2) const; // cached, computed on demand

    /// Ring pairs (j1, j2) with max(|j1|, |j2|) = M.
    const std::vector<std::pair<int, int>>& ring() const { return ring_; }

private:
    struct KQuad { std::vector<double> nodes, weights; };
    KQuad k_quadrature(double xi1, double xi2, int j1, int j2, std::optional<int> l1,
                       std::optional<int> l2) const;
    cplx axis_value(int j, int n, int l, double u) const;
    Interval axis_support(int j, int l) const;

    MihlinSymbol m_;
    PsiFamily family_;
    GlobalParams global_;
    DecompositionOptions opts_;
    std::vector<std::pair<int, int>> ring_;
    std::map<std::tuple<int, int, int>, AxisFactor> factors_;   // (j, n, l)
    std::map<std::tuple<int, int, int>, AxisFactor> localized_; // pre-convolution
    std::map<std::pair<int, int>, SampledFunction> raw_;        // unwindowed bases, (j, n)
    mutable CoeffTable table_;

public:
    /// Unwindowed factored base (modulation and window applied by callers).
    const SampledFunction& raw_base(int j, int n) const;
    /// Window profile of the l-th piece at the given width.
    double window_sigma(int j, int l, double alpha, double u) const;
};

/// Grid-shift representation of a translated piece: for sampled grid
/// parameters, the indicator cells containing N and the translated localized
/// factors reproduce the translated symbol pointwise.
struct TranslatedPieceSample {
    dyadic::GridParams grid1, grid2;
    double kappa = 0.0;
    std::vector<dyadic::GridInterval> cells1, cells2; // per integer scale in the window
};

struct TranslatedPiece {
    double N1 = 0.0, N2 = 0.0;
    std::vector<TranslatedPieceSample> samples;

    /// Average over the sampled parameters of the represented translated
    /// symbol (indicator-located translates), evaluated at (xi1, xi2).
    std::function<cplx(double, double)> eval;
};

struct TranslateOptions {
    int kappa_samples = 16; // stratified grid for the scale-offset average
};

TranslatedPiece translate_piece(const SymbolDecomposition& dec, int j1, int j2, int n1, int n2,
                                int l1, int l2, double N1, double N2,
                                const TranslateOptions& opts = {});

} // namespace carleson::symbol
