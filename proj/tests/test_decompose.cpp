#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carleson/symbol.hpp"

using namespace carleson;
using namespace carleson::symbol;

namespace {
constexpr double kPi = std::numbers::pi;

const SymbolDecomposition& ratio_decomposition() {
    static SymbolDecomposition dec = [] {
        DecompositionOptions opts;
        opts.n_max = 6;
        opts.l_max = 6;
        return SymbolDecomposition(test_symbol("ratio"), 2, 0.05, opts);
    }();
    return dec;
}

} // namespace

TEST_CASE("axis factor ladder reassembles the modulated profile") {
    const auto& dec = ratio_decomposition();
    const auto& fam = dec.family();
    const double q = dec.options().decay_order;

    for (int j : {2, -2, 1}) {
        for (int n : {0, 2, -3}) {
            double worst = 0.0;
            const Interval supp = fam.support(j);
            for (double u = supp.lo - 0.3; u <= supp.hi + 0.3; u += 0.013) {
                cplx acc{};
                for (int l = 0; l <= dec.options().l_max; ++l)
                    acc += std::pow(1.0 + l, -q) * dec.axis_factor(j, n, l).values.eval(u);
                const cplx want = fam.psi_hat(j, u) * std::polar(1.0, 2 * kPi * 0.9 * n * u);
                worst = std::max(worst, std::abs(acc - want));
            }
            INFO("j=", j, " n=", n);
            CHECK(worst < 2e-3);
        }
    }
}

TEST_CASE("localized factors sit inside their dilated windows") {
    const auto& dec = ratio_decomposition();
    for (int l : {0, 2, 5}) {
        const auto& f = dec.localized_factor(2, 1, l);
        // nominal window: (10/9)-dilate of [j-1+l, j+l] at unit alpha
        const Interval box = Interval{1.0 + l, 2.0 + l}.dilated(10.0 / 9.0);
        double outside = 0.0, total = 0.0;
        for (std::size_t i = 0; i < f.values.values.size(); ++i) {
            const double v = std::abs(f.values.values[i]);
            total += v;
            const double x = f.values.x(i);
            if (l == 0 ? x > box.hi : (x < box.lo || x > box.hi)) outside += v;
        }
        CHECK(outside < 1e-6 * total);
    }
}

TEST_CASE("reconstruction matches the symbol on the annulus") {
    const auto& dec = ratio_decomposition();
    const auto m = test_symbol("ratio");

    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
        const double r = 1.0 + 3.0 * i / 11.0;
        const double th = 2 * kPi * (i + 0.37) / 12.0;
        const double x = r * std::cos(th), y = r * std::sin(th);
        const cplx got = dec.reconstruct(x, y);
        const cplx want = m.eval(x, y);
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
    MESSAGE("reconstruction worst relative error: ", worst);
    CHECK(worst < 0.01);
}

TEST_CASE("reconstruction error shrinks as truncations grow") {
    const auto& dec = ratio_decomposition();
    const auto m = test_symbol("ratio");
    auto err_at = [&](int ncut, int lcut) {
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) {
            const double th = 2 * kPi * (i + 0.2) / 6.0;
            const double x = 2.0 * std::cos(th), y = 2.0 * std::sin(th);
            worst = std::max(worst,
                             std::abs(dec.reconstruct_truncated(x, y, ncut, lcut) - m.eval(x, y)));
        }
        return worst;
    };
    const double e0 = err_at(1, 1), e1 = err_at(3, 3), e2 = err_at(6, 6);
    MESSAGE("errors across truncation levels: ", e0, " ", e1, " ", e2);
    CHECK(e1 < e0);
    CHECK(e2 < e1);
}

TEST_CASE("zero symbol decomposes to zero") {
    DecompositionOptions opts;
    opts.n_max = 2;
    opts.l_max = 2;
    const SymbolDecomposition dec({[](double, double) { return cplx{}; }, 1.0, 2}, 2, 0.05, opts);
    CHECK(std::abs(dec.reconstruct(1.3, 0.7)) < 1e-12);
    CHECK(std::abs(dec.evaluate_piece(2, 1, 0, 0, 0, 0, 1.3, 0.7)) < 1e-12);
}

TEST_CASE("translated representation") {
    const auto& dec = ratio_decomposition();

    SUBCASE("indicator cells contain the translation point") {
        const auto tp = translate_piece(dec, 2, 1, 0, 0, 0, 0, 5.2, -0.7);
        for (const auto& s : tp.samples) {
            for (const auto& c : s.cells1) CHECK(c.real().contains(5.2));
            for (const auto& c : s.cells2) CHECK(c.real().contains(-0.7));
        }
    }

    SUBCASE("pointwise match against the directly translated piece") {
        const double N1 = 5.2, N2 = -0.7;
        const auto tp = translate_piece(dec, 2, 1, 0, 0, 0, 0, N1, N2);
        double worst = 0.0, scale = 0.0;
        for (auto [x, y] : {std::pair{1.3, -2.1}, {7.0, 0.4}, {8.5, -2.3}}) {
            const cplx got = tp.eval(x, y);
            const cplx want = dec.evaluate_piece(2, 1, 0, 0, 0, 0, x - N1, y - N2);
            worst = std::max(worst, std::abs(got - want));
            scale = std::max(scale, std::abs(want));
        }
        MESSAGE("translate match: worst=", worst, " scale=", scale);
        CHECK(scale > 0.0);
        CHECK(worst < 0.02 * scale);
    }

    SUBCASE("zero shift with untranslated grids reproduces the piece") {
        const auto tp = translate_piece(dec, 2, 2, 0, 0, 0, 0, 0.0, 0.0);
        double worst = 0.0, scale = 0.0;
        for (auto [x, y] : {std::pair{2.5, 2.6}, {-3.1, 3.3}}) {
            const cplx got = tp.eval(x, y);
            const cplx want = dec.evaluate_piece(2, 2, 0, 0, 0, 0, x, y);
            worst = std::max(worst, std::abs(got - want));
            scale = std::max(scale, std::abs(want));
        }
        CHECK(scale > 0.0);
        CHECK(worst < 0.02 * scale);
    }
}
