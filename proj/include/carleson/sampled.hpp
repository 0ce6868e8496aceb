#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "carleson/fft.hpp"
#include "carleson/interval.hpp"

namespace carleson {

/// A complex-valued function sampled on the uniform grid x_i = origin + i*spacing.
struct SampledFunction {
    double spacing = 1.0;
    double origin = 0.0;
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return origin + static_cast<double>(i) * spacing; }
    Interval extent() const { return {origin, origin + spacing * static_cast<double>(values.size())}; }

    /// Cubic (Catmull-Rom) interpolation; zero outside the grid.
    cplx eval(double x) const;

    SampledFunction& operator+=(const SampledFunction& o);
    SampledFunction& operator*=(cplx c);
};

/// Grid covering [lo, hi) with n samples (n a power of two), filled from fn.
SampledFunction sample(double lo, double hi, std::size_t n, const std::function<cplx(double)>& fn);

SampledFunction zeros_like(const SampledFunction& f);

/// Discrete approximation of f_hat(xi) = \int f(x) e^{-2pi i x xi} dx.
/// Output grid: n frequencies spaced 1/(n*spacing) centered on zero.
SampledFunction fourier(const SampledFunction& f);

/// Riemann sum of \int fhat(xi) e^{2pi i x xi} dxi on the dual spatial grid
/// starting at spatial_origin; exact inverse of `fourier` when given the
/// original origin.
SampledFunction inverse_fourier(const SampledFunction& fhat, double spatial_origin);

/// Centered-grid variant (spatial origin -n/2 * dual spacing).
SampledFunction inverse_fourier(const SampledFunction& fhat);

/// Trapezoid pairing \int f * conj(g). Grids may differ; the second argument is
/// interpolated onto the first grid where needed.
cplx inner(const SampledFunction& f, const SampledFunction& g);

/// Quadrature of (\int |f|^p)^{1/p}; p = infinity returns the sample maximum.
double lp_norm(const SampledFunction& f, double p);

double l2_norm(const SampledFunction& f);
double sup_norm(const SampledFunction& f);

/// Antiderivative F(x_i) = \int_{x_0}^{x_i} f, fourth-order accurate, F(x_0) = 0.
SampledFunction cumulative_integral(const SampledFunction& f);

} // namespace carleson
