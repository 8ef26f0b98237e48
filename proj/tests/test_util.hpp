#ifndef GAILPT_TESTS_TEST_UTIL_HPP
#define GAILPT_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "gailpt/nn.hpp"

namespace gailpt_test {

inline std::vector<double*> param_ptrs(gailpt::nn::DenseNet& net) {
  std::vector<double*> out;
  for (auto& l : net.layers) {
    for (auto& v : l.w) out.push_back(&v);
    for (auto& v : l.b) out.push_back(&v);
  }
  return out;
}

inline std::vector<double> flatten(const gailpt::nn::Gradients& g) {
  std::vector<double> out;
  for (size_t l = 0; l < g.w.size(); ++l) {
    out.insert(out.end(), g.w[l].begin(), g.w[l].end());
    out.insert(out.end(), g.b[l].begin(), g.b[l].end());
  }
  return out;
}

/// Max relative error between an analytic gradient and central finite
/// differences of `f` over every parameter of `net`.
inline double fd_max_rel_error(gailpt::nn::DenseNet& net,
                               const std::vector<double>& analytic,
                               const std::function<double()>& f, double h = 1e-5) {
  auto ptrs = param_ptrs(net);
  double worst = 0.0;
  for (size_t i = 0; i < ptrs.size(); ++i) {
    const double saved = *ptrs[i];
    *ptrs[i] = saved + h;
    const double fp = f();
    *ptrs[i] = saved - h;
    const double fm = f();
    *ptrs[i] = saved;
    const double fd = (fp - fm) / (2.0 * h);
    const double denom = std::max({1.0, std::fabs(fd), std::fabs(analytic[i])});
    worst = std::max(worst, std::fabs(fd - analytic[i]) / denom);
  }
  return worst;
}

}  // namespace gailpt_test

#endif
