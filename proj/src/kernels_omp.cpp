#include "gailpt/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// OpenMP variants of the dense-layer kernels. Parallelism is always over
// independent output elements (sample rows or weight rows); the inner loops
// run in the same order as the serial reference, so results are bit-identical
// for any thread count.

namespace gailpt::nn::detail {

#ifdef _OPENMP

void affine_batch_omp(const double* w, const double* b, int in_w, int out_w,
                      const double* x, int batch, double* y) {
  const long total = static_cast<long>(batch) * out_w;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) {
    const int s = static_cast<int>(i / out_w);
    const int r = static_cast<int>(i % out_w);
    const double* xs = x + static_cast<long>(s) * in_w;
    const double* wr = w + static_cast<long>(r) * in_w;
    double acc = b[r];
    for (int c = 0; c < in_w; ++c) acc += wr[c] * xs[c];
    y[i] = acc;
  }
}

void affine_backward_batch_omp(const double* w, int in_w, int out_w,
                               const double* x, const double* dy, int batch,
                               double* dw, double* db, double* dx) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < out_w; ++r) {
    double* dwr = dw + static_cast<long>(r) * in_w;
    double dbr = db[r];
    for (int s = 0; s < batch; ++s) {
      const double g = dy[static_cast<long>(s) * out_w + r];
      const double* xs = x + static_cast<long>(s) * in_w;
      dbr += g;
      for (int c = 0; c < in_w; ++c) dwr[c] += g * xs[c];
    }
    db[r] = dbr;
  }
  if (dx != nullptr) {
    const long total = static_cast<long>(batch) * in_w;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) {
      const int s = static_cast<int>(i / in_w);
      const int c = static_cast<int>(i % in_w);
      const double* dys = dy + static_cast<long>(s) * out_w;
      double acc = 0.0;
      for (int r = 0; r < out_w; ++r) acc += w[static_cast<long>(r) * in_w + c] * dys[r];
      dx[i] = acc;
    }
  }
}

#else  // no OpenMP at build time: fall through to the reference kernels

void affine_batch_omp(const double* w, const double* b, int in_w, int out_w,
                      const double* x, int batch, double* y) {
  affine_batch_serial(w, b, in_w, out_w, x, batch, y);
}

void affine_backward_batch_omp(const double* w, int in_w, int out_w,
                               const double* x, const double* dy, int batch,
                               double* dw, double* db, double* dx) {
  affine_backward_batch_serial(w, in_w, out_w, x, dy, batch, dw, db, dx);
}

#endif

}  // namespace gailpt::nn::detail
