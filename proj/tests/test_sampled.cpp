#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carleson/rng.hpp"
#include "carleson/sampled.hpp"

using namespace carleson;

namespace {
constexpr double kPi = std::numbers::pi;

SampledFunction gaussian(double extent, std::size_t n) {
    return sample(-extent, extent, n, [](double x) { return cplx{std::exp(-kPi * x * x), 0.0}; });
}

SampledFunction random_band_limited(Rng& rng, double extent, std::size_t n, double band) {
    SampledFunction f = sample(-extent, extent, n, [](double) { return cplx{}; });
    for (int m = 0; m < 12; ++m) {
        const double xi = rng.uniform(-band, band);
        const cplx amp = std::polar(rng.uniform(0.2, 1.0), rng.uniform(0.0, 2 * kPi));
        const double width = rng.uniform(2.0, 6.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double x = f.x(i);
            f.values[i] += amp * std::exp(-kPi * x * x / (width * width)) *
                           std::polar(1.0, 2 * kPi * xi * x);
        }
    }
    return f;
}

} // namespace

TEST_CASE("gaussian is its own transform") {
    const auto f = gaussian(16.0, 1 << 12);
    const auto fh = fourier(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const double xi = fh.x(i);
        if (std::abs(xi) > 6.0) continue;
        worst = std::max(worst, std::abs(fh.values[i] - std::exp(-kPi * xi * xi)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("shift theorem") {
    const double a = 0.75;
    const auto f = gaussian(16.0, 1 << 12);
    auto g = f;
    g.origin += a; // g(x) = f(x - a)
    const auto fh = fourier(f);
    const auto gh = fourier(g);
    double worst = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const double xi = fh.x(i);
        if (std::abs(xi) > 4.0) continue;
        const cplx expect = std::polar(1.0, -2 * kPi * a * xi) * fh.values[i];
        worst = std::max(worst, std::abs(gh.values[i] - expect));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("roundtrip and Parseval on random band-limited functions") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = random_band_limited(rng, 16.0, 1 << 12, 4.0);
        const auto fh = fourier(f);
        const auto back = inverse_fourier(fh, f.origin);
        double diff = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            diff = std::max(diff, std::abs(back.values[i] - f.values[i]));
            ref = std::max(ref, std::abs(f.values[i]));
        }
        CHECK(diff < 1e-10 * ref);

        const double n1 = l2_norm(f);
        const double n2 = l2_norm(fh);
        CHECK(std::abs(n1 - n2) < 1e-10 * n1);
    }
}

TEST_CASE("lp_norm basics") {
    const auto ind = sample(-2.0, 3.0, 1 << 12, [](double x) {
        return cplx{x >= 0.0 && x < 1.0 ? 1.0 : 0.0, 0.0};
    });
    for (double p : {0.5, 1.0, 2.0, 4.0}) CHECK(lp_norm(ind, p) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(lp_norm(ind, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));

    // scaling law ||f(./lam)||_p = lam^{1/p} ||f||_p
    const double lam = 2.0;
    const auto f = gaussian(16.0, 1 << 12);
    const auto g = sample(-16.0, 16.0, 1 << 12,
                          [&](double x) { return cplx{std::exp(-kPi * (x / lam) * (x / lam)), 0.0}; });
    for (double p : {1.0, 2.0, 3.0}) {
        CHECK(lp_norm(g, p) ==
              doctest::Approx(std::pow(lam, 1.0 / p) * lp_norm(f, p)).epsilon(1e-6));
    }

    // grid-refinement stability
    Rng rng(21);
    const auto r1 = random_band_limited(rng, 16.0, 1 << 11, 2.0);
    Rng rng2(21);
    const auto r2 = random_band_limited(rng2, 16.0, 1 << 12, 2.0);
    CHECK(lp_norm(r1, 3.0) == doctest::Approx(lp_norm(r2, 3.0)).epsilon(1e-4));
}

TEST_CASE("inner products") {
    const auto f = gaussian(16.0, 1 << 12);
    // <f, f> = \int e^{-2 pi x^2} = 1/sqrt(2)
    CHECK(std::abs(inner(f, f) - 1.0 / std::sqrt(2.0)) < 1e-10);

    // frequency-side pairing agrees (Parseval for inner products)
    Rng rng(3);
    const auto g = random_band_limited(rng, 16.0, 1 << 12, 3.0);
    const cplx space = inner(f, g);
    const cplx freq = inner(fourier(f), fourier(g));
    CHECK(std::abs(space - freq) < 1e-9);

    // misaligned grids go through interpolation
    auto gs = g;
    gs.origin += 0.3 * gs.spacing;
    const cplx approx = inner(f, gs);
    const cplx exact = inner(f, g);
    CHECK(std::abs(approx - exact) < 1e-2 * std::abs(exact) + 1e-6);
}

TEST_CASE("cumulative integral is fourth order") {
    const auto f = sample(-8.0, 8.0, 1 << 10, [](double x) { return cplx{std::cos(x), 0.0}; });
    const auto F = cumulative_integral(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double x = F.x(i);
        worst = std::max(worst, std::abs(F.values[i] - cplx{std::sin(x) - std::sin(-8.0), 0.0}));
    }
    CHECK(worst < 5e-9);
}
