// Times the serial reference kernels against the OpenMP variants on the
// layer shapes this project actually runs (actor/critic/discriminator sized
// batches) and reports the speedup.

#include <chrono>
#include <functional>
#include <cstdio>
#include <string>
#include <vector>

#include "gailpt/nn.hpp"
#include "gailpt/rng.hpp"

using namespace gailpt;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void bench_case(const std::string& name, int in_w, int out_w, int batch, int reps) {
  RandomStream rs(42, name);
  std::vector<double> w(static_cast<size_t>(in_w) * out_w), b(out_w);
  std::vector<double> x(static_cast<size_t>(batch) * in_w);
  std::vector<double> y(static_cast<size_t>(batch) * out_w);
  std::vector<double> dy(static_cast<size_t>(batch) * out_w);
  std::vector<double> dw(w.size()), db(b.size()), dx(x.size());
  for (auto& v : w) v = rs.next_range(-0.1, 0.1);
  for (auto& v : b) v = rs.next_range(-0.1, 0.1);
  for (auto& v : x) v = rs.next_range(-1.0, 1.0);
  for (auto& v : dy) v = rs.next_range(-1.0, 1.0);

  const double fwd_serial = time_ms(reps, [&] {
    nn::affine_batch(w.data(), b.data(), in_w, out_w, x.data(), batch, y.data(),
                     nn::Backend::Serial);
  });
  const double fwd_omp = time_ms(reps, [&] {
    nn::affine_batch(w.data(), b.data(), in_w, out_w, x.data(), batch, y.data(),
                     nn::Backend::OpenMP);
  });
  const double bwd_serial = time_ms(reps, [&] {
    std::fill(dw.begin(), dw.end(), 0.0);
    std::fill(db.begin(), db.end(), 0.0);
    nn::affine_backward_batch(w.data(), in_w, out_w, x.data(), dy.data(), batch, dw.data(),
                              db.data(), dx.data(), nn::Backend::Serial);
  });
  const double bwd_omp = time_ms(reps, [&] {
    std::fill(dw.begin(), dw.end(), 0.0);
    std::fill(db.begin(), db.end(), 0.0);
    nn::affine_backward_batch(w.data(), in_w, out_w, x.data(), dy.data(), batch, dw.data(),
                              db.data(), dx.data(), nn::Backend::OpenMP);
  });
  std::printf("%-28s fwd %8.3f ms -> %8.3f ms (%.2fx)   bwd %8.3f ms -> %8.3f ms (%.2fx)\n",
              name.c_str(), fwd_serial, fwd_omp, fwd_serial / fwd_omp, bwd_serial, bwd_omp,
              bwd_serial / bwd_omp);
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 50;
  if (argc > 1) reps = std::max(1, std::atoi(argv[1]));
  std::printf("OpenMP available: %s\n", nn::openmp_available() ? "yes" : "no");
  bench_case("mock actor   5->200 b=128", 5, 200, 128, reps);
  bench_case("mock head  200->593 b=128", 200, 593, 128, reps);
  bench_case("disc small 279->50  b=128", 279, 50, 128, reps);
  bench_case("disc large 1090->50 b=128", 1090, 50, 128, reps);
  bench_case("trunk      100->200 b=128", 100, 200, 128, reps);
  bench_case("net head   200->322 b=128", 200, 322, 128, reps);
  return 0;
}
