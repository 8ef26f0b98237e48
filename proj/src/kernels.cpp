#include "gailpt/kernels.hpp"

#include <atomic>

namespace gailpt::nn {

namespace {
std::atomic<Backend> g_backend{Backend::Serial};
}

bool openmp_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

Backend default_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_default_backend(Backend be) { g_backend.store(be, std::memory_order_relaxed); }

void affine_batch(const double* w, const double* b, int in_w, int out_w,
                  const double* x, int batch, double* y, Backend be) {
  if (be == Backend::OpenMP)
    detail::affine_batch_omp(w, b, in_w, out_w, x, batch, y);
  else
    detail::affine_batch_serial(w, b, in_w, out_w, x, batch, y);
}

void affine_backward_batch(const double* w, int in_w, int out_w,
                           const double* x, const double* dy, int batch,
                           double* dw, double* db, double* dx, Backend be) {
  if (be == Backend::OpenMP)
    detail::affine_backward_batch_omp(w, in_w, out_w, x, dy, batch, dw, db, dx);
  else
    detail::affine_backward_batch_serial(w, in_w, out_w, x, dy, batch, dw, db, dx);
}

}  // namespace gailpt::nn
