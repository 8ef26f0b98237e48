#ifndef GAILPT_KERNELS_HPP
#define GAILPT_KERNELS_HPP

namespace gailpt::nn {

/// Backend for the batched dense-layer kernels. Both produce bit-identical
/// results: every output element is written by exactly one thread using the
/// same fixed-order inner loop, so no floating-point reduction order changes.
enum class Backend { Serial, OpenMP };

bool openmp_available();
Backend default_backend();
void set_default_backend(Backend be);

/// Y[s] = W * X[s] + b for each sample s. W is out_w x in_w, row-major.
void affine_batch(const double* w, const double* b, int in_w, int out_w,
                  const double* x, int batch, double* y, Backend be);

/// Backward pass of the affine map. dy is the gradient w.r.t. the affine
/// output (batch x out_w). Accumulates
///   dw[r,c] += sum_s dy[s,r] * x[s,c]
///   db[r]   += sum_s dy[s,r]
/// and, when dx != nullptr, writes dx[s] = W^T dy[s].
void affine_backward_batch(const double* w, int in_w, int out_w,
                           const double* x, const double* dy, int batch,
                           double* dw, double* db, double* dx, Backend be);

namespace detail {
void affine_batch_serial(const double* w, const double* b, int in_w, int out_w,
                         const double* x, int batch, double* y);
void affine_backward_batch_serial(const double* w, int in_w, int out_w,
                                  const double* x, const double* dy, int batch,
                                  double* dw, double* db, double* dx);
void affine_batch_omp(const double* w, const double* b, int in_w, int out_w,
                      const double* x, int batch, double* y);
void affine_backward_batch_omp(const double* w, int in_w, int out_w,
                               const double* x, const double* dy, int batch,
                               double* dw, double* db, double* dx);
}  // namespace detail

}  // namespace gailpt::nn

#endif
