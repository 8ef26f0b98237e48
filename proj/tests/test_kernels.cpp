#include <vector>

#include "doctest.h"
#include "gailpt/kernels.hpp"
#include "gailpt/rng.hpp"

using namespace gailpt;

namespace {

struct Case {
  int in_w, out_w, batch;
};

void fill(std::vector<double>& v, RandomStream& rs, double lo, double hi) {
  for (auto& x : v) x = rs.next_range(lo, hi);
}

}  // namespace

TEST_CASE("OpenMP kernels are bit-identical to the serial reference") {
  const Case cases[] = {{5, 200, 1},   {5, 200, 128},  {279, 50, 64},
                        {1090, 50, 7}, {200, 593, 33}, {1, 1, 1}};
  for (const auto& c : cases) {
    RandomStream rs(991, "kernels");
    std::vector<double> w(static_cast<size_t>(c.in_w) * c.out_w), b(c.out_w);
    std::vector<double> x(static_cast<size_t>(c.batch) * c.in_w);
    std::vector<double> dy(static_cast<size_t>(c.batch) * c.out_w);
    fill(w, rs, -0.5, 0.5);
    fill(b, rs, -0.5, 0.5);
    fill(x, rs, -2.0, 2.0);
    fill(dy, rs, -1.0, 1.0);

    std::vector<double> y_s(static_cast<size_t>(c.batch) * c.out_w);
    std::vector<double> y_p(y_s.size());
    nn::affine_batch(w.data(), b.data(), c.in_w, c.out_w, x.data(), c.batch, y_s.data(),
                     nn::Backend::Serial);
    nn::affine_batch(w.data(), b.data(), c.in_w, c.out_w, x.data(), c.batch, y_p.data(),
                     nn::Backend::OpenMP);
    CHECK(y_s == y_p);

    std::vector<double> dw_s(w.size(), 0.1), db_s(b.size(), -0.2), dx_s(x.size());
    std::vector<double> dw_p(w.size(), 0.1), db_p(b.size(), -0.2), dx_p(x.size());
    nn::affine_backward_batch(w.data(), c.in_w, c.out_w, x.data(), dy.data(), c.batch,
                              dw_s.data(), db_s.data(), dx_s.data(), nn::Backend::Serial);
    nn::affine_backward_batch(w.data(), c.in_w, c.out_w, x.data(), dy.data(), c.batch,
                              dw_p.data(), db_p.data(), dx_p.data(), nn::Backend::OpenMP);
    CHECK(dw_s == dw_p);
    CHECK(db_s == db_p);
    CHECK(dx_s == dx_p);
  }
}

TEST_CASE("affine kernel computes W x + b") {
  // 2x3 weights, explicit expected values
  const std::vector<double> w = {1, 2, 3, 4, 5, 6};
  const std::vector<double> b = {0.5, -1.0};
  const std::vector<double> x = {1, 0, -1};
  std::vector<double> y(2);
  nn::affine_batch(w.data(), b.data(), 3, 2, x.data(), 1, y.data(), nn::Backend::Serial);
  CHECK(y[0] == doctest::Approx(1 * 1 + 2 * 0 + 3 * -1 + 0.5));
  CHECK(y[1] == doctest::Approx(4 * 1 + 5 * 0 + 6 * -1 - 1.0));
}
