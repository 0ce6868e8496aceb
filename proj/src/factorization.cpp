#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "carleson/symbol.hpp"

namespace carleson::symbol {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx lambda_left_hat(double sharp, double xi) {
    if (!(sharp > 0.0 && sharp < 1.0)) throw std::invalid_argument("lambda: sharp must be in (0,1)");
    if (std::abs(xi) < 1e-5) {
        // lambda_hat = mean over alpha of alpha * phi(alpha xi), phi(u) = (e^{2pi i u}-1)/(2pi i u)
        auto mean_pow = [&](int m) {
            return (std::pow(1.0 + sharp, m + 1) - 1.0) / ((m + 1) * sharp);
        };
        const double a1 = mean_pow(1), a2 = mean_pow(2), a3 = mean_pow(3);
        const double pp = std::numbers::pi;
        return cplx{a1 - (2.0 / 3.0) * pp * pp * xi * xi * a3, pp * xi * a2};
    }
    const double arg = std::numbers::pi * sharp * xi;
    const double snc = std::sin(arg) / arg;
    const cplx bracket = std::polar(snc, kTwoPi * xi * (1.0 + 0.5 * sharp)) - 1.0;
    return bracket / cplx{0.0, kTwoPi * xi};
}

// evaluation of an antiderivative with constant extension beyond the grid
cplx eval_clamped(const SampledFunction& F, double x) {
    if (F.values.empty()) return {};
    if (x <= F.origin) return F.values.front();
    const double end = F.origin + F.spacing * static_cast<double>(F.values.size() - 1);
    if (x >= end) return F.values.back();
    return F.eval(x);
}

} // namespace

cplx LeftRightAverager::transform(double xi) const {
    const cplx left = lambda_left_hat(sharp, xi);
    return side == Side::left ? left : std::conj(left);
}

double LeftRightAverager::time_domain(double x) const {
    const double u = side == Side::left ? -x : x;
    if (u < 0.0 || u > 1.0 + sharp) return 0.0;
    if (u <= 1.0) return 1.0;
    return (1.0 + sharp - u) / sharp;
}

cplx lambda_transform(double sharp, Side side, double xi) {
    return LeftRightAverager{side, sharp}.transform(xi);
}

SampledFunction convolve_lambda(const SampledFunction& f, Side side, double sharp, double k) {
    const double s = std::exp2(k);
    const SampledFunction F = cumulative_integral(f);
    const SampledFunction G = cumulative_integral(F);

    SampledFunction out = zeros_like(f);
    const double inv = 1.0 / s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.x(i);
        cplx v;
        if (side == Side::left) {
            const cplx mean =
                (eval_clamped(G, x + (1.0 + sharp) * s) - eval_clamped(G, x + s)) / (sharp * s);
            v = inv * (mean - eval_clamped(F, x));
        } else {
            const cplx mean =
                (eval_clamped(G, x - s) - eval_clamped(G, x - (1.0 + sharp) * s)) / (sharp * s);
            v = inv * (eval_clamped(F, x) - mean);
        }
        out.values[i] = v;
    }
    return out;
}

double factor_tail_scale(double sharp) {
    const double r = std::numbers::pi * sharp;
    return 6.0 / (r * r);
}

SampledFunction factor_bump_modulated(const SampledFunction& phi, Side side, double sharp, double k,
                                      double theta, double scale_n, const FactorOptions& opts) {
    if (phi.values.empty()) throw std::invalid_argument("factor_bump: empty input");
    if (scale_n == 0.0) throw std::invalid_argument("factor_bump: zero modulation scale");
    const double pad_lo = side == Side::left ? opts.pad_major : opts.pad_minor;
    const double pad_hi = side == Side::left ? opts.pad_minor : opts.pad_major;

    const double h = phi.spacing;
    const auto lead = static_cast<std::size_t>(std::ceil(pad_lo / h));
    std::size_t n = next_pow2(phi.size() + lead + static_cast<std::size_t>(std::ceil(pad_hi / h)));
    n = std::max(n, opts.min_samples);

    SampledFunction wide;
    wide.spacing = h;
    wide.origin = phi.origin - static_cast<double>(lead) * h;
    wide.values.assign(n, cplx{});
    std::copy(phi.values.begin(), phi.values.end(), wide.values.begin() + static_cast<std::ptrdiff_t>(lead));

    SampledFunction spec = fourier(wide);
    const LeftRightAverager lam{side, sharp};
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double eta = spec.x(m);
        const cplx d = scale_n * lam.transform(std::exp2(k) * (eta + theta));
        spec.values[m] = std::abs(d) < opts.division_floor ? cplx{} : spec.values[m] / d;
    }
    return inverse_fourier(spec, wide.origin);
}

SampledFunction factor_bump(const SampledFunction& phi, Side side, double sharp,
                            const FactorOptions& opts) {
    return factor_bump_modulated(phi, side, sharp, 0.0, 0.0, 1.0, opts);
}

SampledFunction factor_bump_scaled_modulated(const SampledFunction& phi, Side side, double sharp,
                                             double k, double n, const FactorOptions& opts) {
    const double theta = n * std::exp2(-k);
    const double scale = n == 0.0 ? 1.0 : n;
    return factor_bump_modulated(phi, side, sharp, k, theta, scale, opts);
}

} // namespace carleson::symbol
