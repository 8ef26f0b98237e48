#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "gailpt/nn.hpp"
#include "gailpt/rng.hpp"
#include "test_util.hpp"

using namespace gailpt;
using gailpt_test::fd_max_rel_error;
using gailpt_test::flatten;

namespace {

nn::DenseNet zero_net(int in, std::vector<nn::LayerSpec> specs) {
  auto net = nn::make_net(in, specs, 1);
  for (auto& l : net.layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
  return net;
}

}  // namespace

TEST_CASE("zero-weight sigmoid head gives 0.5; zero-weight softmax is uniform") {
  auto sig = zero_net(4, {{3, nn::Activation::ReLU}, {2, nn::Activation::Sigmoid}});
  const auto out = nn::forward(sig, std::vector<double>{1, -2, 3, 4});
  for (double v : out) CHECK(v == doctest::Approx(0.5));

  auto soft = zero_net(4, {{3, nn::Activation::ReLU}, {5, nn::Activation::Softmax}});
  const auto probs = nn::forward(soft, std::vector<double>{1, -2, 3, 4});
  double sum = 0.0;
  for (double v : probs) {
    CHECK(v == doctest::Approx(0.2));
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("identity linear layer reproduces its input") {
  auto net = zero_net(3, {{3, nn::Activation::Linear}});
  for (int i = 0; i < 3; ++i) net.layers[0].w[i * 3 + i] = 1.0;
  const std::vector<double> x = {0.25, -1.5, 3.0};
  CHECK(nn::forward(net, x) == x);
}

TEST_CASE("gradcheck on a random 5-8-3 net") {
  for (auto head : {nn::Activation::Linear, nn::Activation::Softmax, nn::Activation::Sigmoid}) {
    auto net = nn::make_net(5, {{8, nn::Activation::ReLU}, {3, head}}, 77);
    RandomStream rs(3, "gradcheck");
    std::vector<double> x(5), c(3);
    for (auto& v : x) v = rs.next_range(-1, 1);
    for (auto& v : c) v = rs.next_range(-1, 1);

    nn::Workspace ws;
    nn::forward_batch(net, x.data(), 1, ws);
    auto grads = nn::make_gradients(net);
    nn::backward_batch(net, ws, c.data(), nn::HeadGrad::Activation, grads);

    auto f = [&]() {
      const auto y = nn::forward(net, x);
      double acc = 0.0;
      for (size_t i = 0; i < y.size(); ++i) acc += c[i] * y[i];
      return acc;
    };
    CHECK(fd_max_rel_error(net, flatten(grads), f) < 1e-4);
  }
}

TEST_CASE("gradcheck on the actor/critic/discriminator layer stacks") {
  // Same hidden structure as the full nets, narrowed input for speed.
  struct Shape {
    std::vector<nn::LayerSpec> specs;
  };
  const Shape shapes[] = {
      {{{50, nn::Activation::ReLU},
        {100, nn::Activation::ReLU},
        {200, nn::Activation::ReLU},
        {9, nn::Activation::Softmax}}},
      {{{50, nn::Activation::ReLU},
        {100, nn::Activation::ReLU},
        {200, nn::Activation::ReLU},
        {1, nn::Activation::Linear}}},
      {{{50, nn::Activation::ReLU},
        {100, nn::Activation::ReLU},
        {200, nn::Activation::ReLU},
        {1, nn::Activation::Sigmoid}}},
  };
  RandomStream rs(11, "gradcheck-stacks");
  for (const auto& sh : shapes) {
    auto net = nn::make_net(12, sh.specs, 5);
    std::vector<double> x(12), c(net.output_width());
    for (auto& v : x) v = rs.next_range(-1, 1);
    for (auto& v : c) v = rs.next_range(-1, 1);
    nn::Workspace ws;
    nn::forward_batch(net, x.data(), 1, ws);
    auto grads = nn::make_gradients(net);
    nn::backward_batch(net, ws, c.data(), nn::HeadGrad::Activation, grads);
    auto f = [&]() {
      const auto y = nn::forward(net, x);
      double acc = 0.0;
      for (size_t i = 0; i < y.size(); ++i) acc += c[i] * y[i];
      return acc;
    };
    CHECK(fd_max_rel_error(net, flatten(grads), f) < 1e-4);
  }
}

TEST_CASE("zero upstream gradient produces zero gradients; scaling is linear") {
  auto net = nn::make_net(4, {{6, nn::Activation::ReLU}, {3, nn::Activation::Linear}}, 9);
  const std::vector<double> x = {0.3, -0.7, 1.1, 0.2};
  nn::Workspace ws;
  nn::forward_batch(net, x.data(), 1, ws);

  std::vector<double> zero(3, 0.0);
  auto g0 = nn::make_gradients(net);
  nn::backward_batch(net, ws, zero.data(), nn::HeadGrad::Activation, g0);
  CHECK(g0.max_abs() == 0.0);

  std::vector<double> c = {0.5, -1.5, 2.0};
  auto g1 = nn::make_gradients(net);
  nn::backward_batch(net, ws, c.data(), nn::HeadGrad::Activation, g1);
  for (auto& v : c) v *= 3.0;
  auto g3 = nn::make_gradients(net);
  nn::backward_batch(net, ws, c.data(), nn::HeadGrad::Activation, g3);
  const auto f1 = flatten(g1);
  const auto f3 = flatten(g3);
  for (size_t i = 0; i < f1.size(); ++i) CHECK(f3[i] == doctest::Approx(3.0 * f1[i]));
}

TEST_CASE("SGD step, fixed point, and additivity") {
  auto net = zero_net(1, {{1, nn::Activation::Linear}});
  auto opt = nn::make_sgd(0.1);
  auto g = nn::make_gradients(net);
  g.w[0][0] = 1.0;
  nn::apply(net, g, opt);
  CHECK(net.layers[0].w[0] == doctest::Approx(-0.1));

  auto before = net.layers[0].w[0];
  g.zero();
  nn::apply(net, g, opt);
  CHECK(net.layers[0].w[0] == before);  // zero gradient is a fixed point

  // Two sequential steps equal one step at the summed gradients.
  auto net_a = nn::make_net(3, {{2, nn::Activation::Linear}}, 21);
  auto net_b = net_a;
  auto opt_a = nn::make_sgd(0.05);
  auto opt_b = nn::make_sgd(0.05);
  auto g1 = nn::make_gradients(net_a);
  auto g2 = nn::make_gradients(net_a);
  RandomStream rs(2, "sgd");
  for (auto& v : g1.w[0]) v = rs.next_range(-1, 1);
  for (auto& v : g2.w[0]) v = rs.next_range(-1, 1);
  nn::apply(net_a, g1, opt_a);
  nn::apply(net_a, g2, opt_a);
  auto gsum = g1;
  gsum.add_scaled(g2, 1.0);
  nn::apply(net_b, gsum, opt_b);
  for (size_t i = 0; i < net_a.layers[0].w.size(); ++i)
    CHECK(net_a.layers[0].w[i] == doctest::Approx(net_b.layers[0].w[i]));
}

TEST_CASE("adam moves against the gradient") {
  auto net = zero_net(1, {{1, nn::Activation::Linear}});
  auto opt = nn::make_adam(0.001);
  auto g = nn::make_gradients(net);
  g.w[0][0] = 2.5;
  nn::apply(net, g, opt);
  CHECK(net.layers[0].w[0] < 0.0);
}

TEST_CASE("parameter save/load round trip") {
  auto net = nn::make_net(7, {{11, nn::Activation::ReLU}, {4, nn::Activation::Softmax}}, 33);
  const std::string path = "/tmp/gailpt_test_params.bin";
  nn::save_params(net, path);
  const auto loaded = nn::load_params(path);
  REQUIRE(loaded.layers.size() == net.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(loaded.layers[l].in_w == net.layers[l].in_w);
    CHECK(loaded.layers[l].out_w == net.layers[l].out_w);
    CHECK(loaded.layers[l].act == net.layers[l].act);
    for (size_t i = 0; i < net.layers[l].w.size(); ++i)
      CHECK(loaded.layers[l].w[i] == static_cast<double>(static_cast<float>(net.layers[l].w[i])));
  }
  std::remove(path.c_str());
}

TEST_CASE("identical seeds give identical initial parameters") {
  auto a = nn::make_net(6, {{5, nn::Activation::ReLU}, {2, nn::Activation::Linear}}, 42);
  auto b = nn::make_net(6, {{5, nn::Activation::ReLU}, {2, nn::Activation::Linear}}, 42);
  for (size_t l = 0; l < a.layers.size(); ++l) CHECK(a.layers[l].w == b.layers[l].w);
  auto c = nn::make_net(6, {{5, nn::Activation::ReLU}, {2, nn::Activation::Linear}}, 43);
  CHECK(a.layers[0].w != c.layers[0].w);
}

TEST_CASE("dimension mismatches are rejected") {
  auto net = nn::make_net(4, {{3, nn::Activation::Linear}}, 1);
  CHECK_THROWS(nn::forward(net, std::vector<double>{1, 2, 3}));
  // Softmax anywhere but the head is invalid by construction.
  CHECK_THROWS(
      nn::make_net(3, {{2, nn::Activation::Softmax}, {4, nn::Activation::Linear}}, 1));
}
