#include "fft_util.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace pnlab::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  int n = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Plans(int n_in) : n(n_in) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
    if (!fwd || !inv) throw std::runtime_error("fft: plan creation failed");
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

Plans& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<Plans>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Plans>(n)).first;
  return *it->second;
}

}  // namespace

void forward_r2c(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
  const int n = static_cast<int>(in.size());
  Plans& p = plans_for(n);
  for (int i = 0; i < n; ++i) p.real[i] = in[i];
  fftw_execute(p.fwd);
  out.resize(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) out[k] = {p.spec[k][0], p.spec[k][1]};
}

void inverse_c2r(const std::vector<std::complex<double>>& in, int n, std::vector<double>& out) {
  if (static_cast<int>(in.size()) != n / 2 + 1) throw std::invalid_argument("fft: bad spectrum size");
  Plans& p = plans_for(n);
  for (int k = 0; k <= n / 2; ++k) {
    p.spec[k][0] = in[k].real();
    p.spec[k][1] = in[k].imag();
  }
  fftw_execute(p.inv);
  out.resize(n);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) out[i] = p.real[i] * scale;
}

}  // namespace pnlab::fft
