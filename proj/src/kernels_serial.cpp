#include "gailpt/kernels.hpp"

// Reference implementation of the dense-layer kernels. Kept deliberately
// plain; the OpenMP variants in kernels_omp.cpp must match it bit for bit.

namespace gailpt::nn::detail {

void affine_batch_serial(const double* w, const double* b, int in_w, int out_w,
                         const double* x, int batch, double* y) {
  for (int s = 0; s < batch; ++s) {
    const double* xs = x + static_cast<long>(s) * in_w;
    double* ys = y + static_cast<long>(s) * out_w;
    for (int r = 0; r < out_w; ++r) {
      const double* wr = w + static_cast<long>(r) * in_w;
      double acc = b[r];
      for (int c = 0; c < in_w; ++c) acc += wr[c] * xs[c];
      ys[r] = acc;
    }
  }
}

void affine_backward_batch_serial(const double* w, int in_w, int out_w,
                                  const double* x, const double* dy, int batch,
                                  double* dw, double* db, double* dx) {
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
    for (int s = 0; s < batch; ++s) {
      const double* dys = dy + static_cast<long>(s) * out_w;
      double* dxs = dx + static_cast<long>(s) * in_w;
      for (int c = 0; c < in_w; ++c) {
        double acc = 0.0;
        for (int r = 0; r < out_w; ++r) acc += w[static_cast<long>(r) * in_w + c] * dys[r];
        dxs[c] = acc;
      }
    }
  }
}

}  // namespace gailpt::nn::detail
