// Internal FFTW wrapper: per-thread plan/buffer cache (plan creation is
// guarded; execution runs on thread-local buffers). FFTW_ESTIMATE keeps the
// planning deterministic.
#pragma once

#include <complex>
#include <vector>

namespace pnlab::fft {

// Real-to-complex forward transform, unnormalized (FFTW convention):
// out has n/2 + 1 bins.
void forward_r2c(const std::vector<double>& in, std::vector<std::complex<double>>& out);

// Complex-to-real inverse of the above, scaled by 1/n (round trip is the
// identity up to rounding).
void inverse_c2r(const std::vector<std::complex<double>>& in, int n, std::vector<double>& out);

}  // namespace pnlab::fft
