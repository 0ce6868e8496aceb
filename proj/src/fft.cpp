#include "carleson/fft.hpp"

#include <numbers>
#include <stdexcept>

#ifdef CARLESON_HAVE_FFTW
#include <fftw3.h>

#include <map>
#include <mutex>
#endif

namespace carleson {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= s;
    }
}

#ifdef CARLESON_HAVE_FFTW
void fft_fftw(std::vector<cplx>& a, bool inverse) {
    static std::mutex plan_mutex;
    static std::map<std::pair<std::size_t, bool>, fftw_plan> plans;

    const std::size_t n = a.size();
    fftw_plan plan = nullptr;
    {
        std::scoped_lock lock(plan_mutex);
        const auto key = std::make_pair(n, inverse);
        auto it = plans.find(key);
        if (it == plans.end()) {
            std::vector<cplx> scratch(n);
            auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
            plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                    inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
            plans.emplace(key, plan);
        } else {
            plan = it->second;
        }
    }
    auto* buf = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, buf, buf);
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= s;
    }
}
#endif

} // namespace

void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    if (n <= 1) return;
#ifdef CARLESON_HAVE_FFTW
    fft_fftw(a, inverse);
#else
    fft_radix2(a, inverse);
#endif
}

std::vector<cplx> fft(std::vector<cplx> a) {
    fft_inplace(a, false);
    return a;
}

std::vector<cplx> ifft(std::vector<cplx> a) {
    fft_inplace(a, true);
    return a;
}

} // namespace carleson
