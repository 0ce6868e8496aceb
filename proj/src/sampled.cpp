#include "carleson/sampled.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace carleson {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

cplx SampledFunction::eval(double xq) const {
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    if (n == 0) return {};
    const double u = (xq - origin) / spacing;
    const auto i1 = static_cast<std::ptrdiff_t>(std::floor(u));
    if (i1 < -1 || i1 > n - 1) return {};
    const double t = u - static_cast<double>(i1);
    auto at = [&](std::ptrdiff_t i) -> cplx {
        return (i < 0 || i >= n) ? cplx{} : values[static_cast<std::size_t>(i)];
    };
    const cplx p0 = at(i1 - 1), p1 = at(i1), p2 = at(i1 + 1), p3 = at(i1 + 2);
    // Catmull-Rom
    const cplx a = 2.0 * p1;
    const cplx b = p2 - p0;
    const cplx c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    const cplx d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
    return 0.5 * (a + b * t + c * t * t + d * t * t * t);
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
    if (o.spacing != spacing || o.origin != origin || o.size() != size())
        throw std::invalid_argument("SampledFunction += requires identical grids");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

SampledFunction& SampledFunction::operator*=(cplx c) {
    for (auto& v : values) v *= c;
    return *this;
}

SampledFunction sample(double lo, double hi, std::size_t n, const std::function<cplx(double)>& fn) {
    if (!(hi > lo) || n == 0) throw std::invalid_argument("sample: empty grid");
    SampledFunction f;
    f.spacing = (hi - lo) / static_cast<double>(n);
    f.origin = lo;
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = fn(f.x(i));
    return f;
}

SampledFunction zeros_like(const SampledFunction& f) {
    SampledFunction z = f;
    z.values.assign(f.values.size(), cplx{});
    return z;
}

SampledFunction fourier(const SampledFunction& f) {
    // F_m = h e^{-2pi i x0 xi_m} * DFT_m[f_j e^{-2pi i j h xi0}]
    const std::size_t n = f.size();
    if (!is_pow2(n)) throw std::invalid_argument("fourier: grid size must be a power of two");

    SampledFunction out;
    out.spacing = 1.0 / (static_cast<double>(n) * f.spacing);
    out.origin = -0.5 * static_cast<double>(n) * out.spacing;

    std::vector<cplx> g(n);
    const double hxi0 = f.spacing * out.origin;
    for (std::size_t j = 0; j < n; ++j)
        g[j] = f.values[j] * std::polar(1.0, -kTwoPi * hxi0 * static_cast<double>(j));
    fft_inplace(g, false);

    out.values.resize(n);
    for (std::size_t m = 0; m < n; ++m)
        out.values[m] = f.spacing * std::polar(1.0, -kTwoPi * f.origin * out.x(m)) * g[m];
    return out;
}

SampledFunction inverse_fourier(const SampledFunction& fhat, double spatial_origin) {
    // f_j = dxi * n * e^{2pi i x_j xi0} * IDFT_j[F_m e^{2pi i x0 m dxi}]
    const std::size_t n = fhat.size();
    if (!is_pow2(n)) throw std::invalid_argument("inverse_fourier: grid size must be a power of two");

    SampledFunction out;
    out.spacing = 1.0 / (static_cast<double>(n) * fhat.spacing);
    out.origin = spatial_origin;

    std::vector<cplx> g(n);
    for (std::size_t m = 0; m < n; ++m)
        g[m] = fhat.values[m] *
               std::polar(1.0, kTwoPi * spatial_origin * fhat.spacing * static_cast<double>(m));
    fft_inplace(g, true);

    out.values.resize(n);
    const double total = static_cast<double>(n) * fhat.spacing;
    for (std::size_t j = 0; j < n; ++j)
        out.values[j] = g[j] * std::polar(1.0, kTwoPi * fhat.origin * out.x(j)) * total;
    return out;
}

SampledFunction inverse_fourier(const SampledFunction& fhat) {
    const double h = 1.0 / (static_cast<double>(fhat.size()) * fhat.spacing);
    return inverse_fourier(fhat, -0.5 * static_cast<double>(fhat.size()) * h);
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
    const std::size_t n = f.size();
    if (n == 0 || g.size() == 0) return {};
    const double h = f.spacing;
    const bool aligned = g.spacing == h &&
                         std::abs(std::remainder(g.origin - f.origin, h)) < 1e-12 * h;
    cplx acc{};
    if (aligned) {
        const auto shift = static_cast<std::ptrdiff_t>(std::llround((g.origin - f.origin) / h));
        const auto gn = static_cast<std::ptrdiff_t>(g.size());
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            const std::ptrdiff_t jg = i - shift;
            if (jg < 0 || jg >= gn) continue;
            double w = 1.0;
            if (i == 0 || i + 1 == static_cast<std::ptrdiff_t>(n)) w = 0.5;
            acc += w * f.values[static_cast<std::size_t>(i)] *
                   std::conj(g.values[static_cast<std::size_t>(jg)]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc += w * f.values[i] * std::conj(g.eval(f.x(i)));
        }
    }
    return acc * h;
}

double lp_norm(const SampledFunction& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    if (std::isinf(p)) return sup_norm(f);
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.spacing, 1.0 / p);
}

double l2_norm(const SampledFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v);
    return std::sqrt(acc * f.spacing);
}

double sup_norm(const SampledFunction& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

SampledFunction cumulative_integral(const SampledFunction& f) {
    const std::size_t n = f.size();
    SampledFunction F = zeros_like(f);
    if (n < 2) return F;
    const double h = f.spacing;
    const auto& v = f.values;
    if (n < 4) {
        for (std::size_t i = 1; i < n; ++i)
            F.values[i] = F.values[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
        return F;
    }
    // fourth-order panel increments (Adams-Moulton style closures at the ends)
    F.values[1] = F.values[0] + h / 24.0 * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]);
    for (std::size_t i = 1; i + 2 < n; ++i)
        F.values[i + 1] = F.values[i] + h / 24.0 * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]);
    F.values[n - 1] = F.values[n - 2] +
                      h / 24.0 * (9.0 * v[n - 1] + 19.0 * v[n - 2] - 5.0 * v[n - 3] + v[n - 4]);
    return F;
}

} // namespace carleson
