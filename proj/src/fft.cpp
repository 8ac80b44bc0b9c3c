#include "critl3/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <vector>

#include "critl3/error.hpp"

namespace critl3 {
namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex plan_mutex;
int thread_count = 1;
bool threads_initialized = false;

const Plans& plans_for(int n) {
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, thread_count);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (!threads_initialized) {
    fftw_init_threads();
    threads_initialized = true;
  }
  fftw_plan_with_nthreads(thread_count);
  std::size_t nr = std::size_t(n) * n * n;
  std::size_t nc = std::size_t(n) * n * (n / 2 + 1);
  double* r = fftw_alloc_real(nr);
  fftw_complex* c = fftw_alloc_complex(nc);
  Plans p;
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.forward = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
  p.backward = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags | FFTW_DESTROY_INPUT);
  fftw_free(r);
  fftw_free(c);
  if (!p.forward || !p.backward) throw Error("FFTW plan creation failed");
  return cache.emplace(key, p).first->second;
}

}  // namespace

void set_fft_threads(int n) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  thread_count = n < 1 ? 1 : n;
}

int fft_threads() {
  std::lock_guard<std::mutex> lock(plan_mutex);
  return thread_count;
}

void fft_forward(int n, const double* in, std::complex<double>* out) {
  const Plans& p = plans_for(n);
  // r2c does not touch its input with FFTW_ESTIMATE, but the API wants non-const
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void fft_backward(int n, const std::complex<double>* in, double* out) {
  const Plans& p = plans_for(n);
  std::size_t nc = std::size_t(n) * n * (n / 2 + 1);
  std::vector<std::complex<double>> scratch(in, in + nc);
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  double scale = 1.0 / (double(n) * n * n);
  std::size_t nr = std::size_t(n) * n * n;
  for (std::size_t i = 0; i < nr; ++i) out[i] *= scale;
}

}  // namespace critl3
