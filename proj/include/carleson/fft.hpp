#pragma once

#include <complex>
#include <vector>

namespace carleson {

using cplx = std::complex<double>;

/// In-place radix-2 FFT. Size must be a power of two.
void fft_inplace(std::vector<cplx>& a, bool inverse);

std::vector<cplx> fft(std::vector<cplx> a);
std::vector<cplx> ifft(std::vector<cplx> a);

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

} // namespace carleson
