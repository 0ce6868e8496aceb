#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace carleson::detail {

/// C-infinity transition: 0 for u<=0, 1 for u>=1. Exact formula.
inline double smooth_step_exact(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

/// Table-backed evaluation (the exact form costs two exp calls and dominates
/// the inner quadrature loops). Catmull-Rom on a fine grid, ~1e-13 accurate.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    constexpr int N = 4096;
    static const std::vector<double> table = [] {
        std::vector<double> t(N + 3);
        for (int i = 0; i < N + 3; ++i)
            t[static_cast<std::size_t>(i)] = smooth_step_exact(static_cast<double>(i - 1) / N);
        return t;
    }();
    const double s = u * N;
    const auto i = static_cast<int>(s);
    const double x = s - i;
    const double p0 = table[static_cast<std::size_t>(i)];
    const double p1 = table[static_cast<std::size_t>(i + 1)];
    const double p2 = table[static_cast<std::size_t>(i + 2)];
    const double p3 = table[static_cast<std::size_t>(i + 3)];
    return p1 + 0.5 * x * (p2 - p0 + x * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          x * (3.0 * (p1 - p2) + p3 - p0)));
}

inline constexpr double kGL4x[2] = {0.3399810435848563, 0.8611363115940526};
inline constexpr double kGL4w[2] = {0.6521451548625461, 0.3478548451374538};

inline constexpr double kGL12x[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                                     0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
inline constexpr double kGL12w[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                                     0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

template <class F>
auto gl12(double a, double b, F&& f) -> decltype(f(a) * 1.0) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    decltype(f(a) * 1.0) acc{};
    for (int i = 0; i < 6; ++i)
        acc += kGL12w[i] * (f(c + r * kGL12x[i]) + f(c - r * kGL12x[i]));
    return acc * r;
}

/// Nodes/weights of 4-point Gauss-Legendre on [a, b].
inline std::vector<std::pair<double, double>> gl4_nodes(double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    std::vector<std::pair<double, double>> out;
    out.reserve(4);
    for (int i = 0; i < 2; ++i) {
        out.emplace_back(c - r * kGL4x[i], kGL4w[i] * r);
        out.emplace_back(c + r * kGL4x[i], kGL4w[i] * r);
    }
    return out;
}

} // namespace carleson::detail
