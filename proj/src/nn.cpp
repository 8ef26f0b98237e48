#include "gailpt/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "gailpt/rng.hpp"

namespace gailpt::nn {

size_t DenseNet::param_count() const {
  size_t n = 0;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

DenseNet make_net(int input_width, const std::vector<LayerSpec>& specs, uint64_t seed) {
  if (input_width <= 0 || specs.empty()) throw std::invalid_argument("make_net: empty architecture");
  DenseNet net;
  net.init_seed = seed;
  int in_w = input_width;
  for (size_t i = 0; i < specs.size(); ++i) {
    const auto& sp = specs[i];
    if ((sp.act == Activation::Softmax || sp.act == Activation::Sigmoid) && i + 1 != specs.size())
      throw std::invalid_argument("make_net: Softmax/Sigmoid must be the final activation");
    Layer l;
    l.in_w = in_w;
    l.out_w = sp.width;
    l.act = sp.act;
    l.w.resize(static_cast<size_t>(l.out_w) * l.in_w);
    l.b.assign(l.out_w, 0.0);
    RandomStream rs(seed, "nn-init");
    RandomStream layer_rs = rs.child("layer", i);
    const double bound = std::sqrt(6.0 / (l.in_w + l.out_w));
    for (auto& x : l.w) x = layer_rs.next_range(-bound, bound);
    net.layers.push_back(std::move(l));
    in_w = sp.width;
  }
  return net;
}

void Gradients::zero() {
  for (auto& v : w) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

void Gradients::add_scaled(const Gradients& g, double c) {
  for (size_t l = 0; l < w.size(); ++l) {
    for (size_t i = 0; i < w[l].size(); ++i) w[l][i] += c * g.w[l][i];
    for (size_t i = 0; i < b[l].size(); ++i) b[l][i] += c * g.b[l][i];
  }
}

void Gradients::scale(double c) {
  for (auto& v : w)
    for (auto& x : v) x *= c;
  for (auto& v : b)
    for (auto& x : v) x *= c;
}

double Gradients::max_abs() const {
  double m = 0.0;
  for (const auto& v : w)
    for (double x : v) m = std::max(m, std::fabs(x));
  for (const auto& v : b)
    for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

Gradients make_gradients(const DenseNet& net) {
  Gradients g;
  g.w.reserve(net.layers.size());
  g.b.reserve(net.layers.size());
  for (const auto& l : net.layers) {
    g.w.emplace_back(l.w.size(), 0.0);
    g.b.emplace_back(l.b.size(), 0.0);
  }
  return g;
}

namespace {

void apply_activation(Activation act, const double* z, double* a, int width, int batch) {
  switch (act) {
    case Activation::Linear:
      std::memcpy(a, z, sizeof(double) * static_cast<size_t>(width) * batch);
      break;
    case Activation::ReLU:
      for (long i = 0; i < static_cast<long>(width) * batch; ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
      break;
    case Activation::Sigmoid:
      for (long i = 0; i < static_cast<long>(width) * batch; ++i) a[i] = 1.0 / (1.0 + std::exp(-z[i]));
      break;
    case Activation::Softmax:
      for (int s = 0; s < batch; ++s) {
        const double* zs = z + static_cast<long>(s) * width;
        double* as = a + static_cast<long>(s) * width;
        double zmax = zs[0];
        for (int i = 1; i < width; ++i) zmax = std::max(zmax, zs[i]);
        double sum = 0.0;
        for (int i = 0; i < width; ++i) {
          as[i] = std::exp(zs[i] - zmax);
          sum += as[i];
        }
        for (int i = 0; i < width; ++i) as[i] /= sum;
      }
      break;
  }
}

}  // namespace

void forward_batch(const DenseNet& net, const double* x, int batch, Workspace& ws, Backend be) {
  const size_t nl = net.layers.size();
  ws.batch = batch;
  ws.pre.resize(nl);
  ws.post.resize(nl);
  ws.input.assign(x, x + static_cast<long>(batch) * net.input_width());
  const double* cur = ws.input.data();
  for (size_t l = 0; l < nl; ++l) {
    const Layer& layer = net.layers[l];
    ws.pre[l].resize(static_cast<size_t>(batch) * layer.out_w);
    ws.post[l].resize(static_cast<size_t>(batch) * layer.out_w);
    affine_batch(layer.w.data(), layer.b.data(), layer.in_w, layer.out_w, cur, batch,
                 ws.pre[l].data(), be);
    apply_activation(layer.act, ws.pre[l].data(), ws.post[l].data(), layer.out_w, batch);
    cur = ws.post[l].data();
  }
}

std::vector<double> forward(const DenseNet& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_width())
    throw std::invalid_argument("forward: input width mismatch");
  ForwardScratch scratch;
  auto out = forward_into(net, x, scratch);
  return std::vector<double>(out.begin(), out.end());
}

std::span<const double> forward_into(const DenseNet& net, std::span<const double> x,
                                     ForwardScratch& scratch) {
  scratch.a.assign(x.begin(), x.end());
  for (const Layer& layer : net.layers) {
    scratch.c.resize(layer.out_w);
    detail::affine_batch_serial(layer.w.data(), layer.b.data(), layer.in_w, layer.out_w,
                                scratch.a.data(), 1, scratch.c.data());
    scratch.a.resize(layer.out_w);
    apply_activation(layer.act, scratch.c.data(), scratch.a.data(), layer.out_w, 1);
  }
  return std::span<const double>(scratch.a.data(), scratch.a.size());
}

std::vector<double> forward_logits(const DenseNet& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_width())
    throw std::invalid_argument("forward_logits: input width mismatch");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> z;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    z.resize(layer.out_w);
    detail::affine_batch_serial(layer.w.data(), layer.b.data(), layer.in_w, layer.out_w,
                                a.data(), 1, z.data());
    if (l + 1 == net.layers.size()) return z;
    a.resize(layer.out_w);
    apply_activation(layer.act, z.data(), a.data(), layer.out_w, 1);
  }
  return z;
}

void backward_batch(const DenseNet& net, const Workspace& ws, const double* dy,
                    HeadGrad kind, Gradients& out, double* dx, Backend be) {
  const int nl = static_cast<int>(net.layers.size());
  const int batch = ws.batch;
  if (out.w.size() != static_cast<size_t>(nl)) throw std::invalid_argument("backward: gradient shape mismatch");

  const Layer& head = net.layers[nl - 1];
  std::vector<double> delta(static_cast<size_t>(batch) * head.out_w);

  if (kind == HeadGrad::Preactivation) {
    std::memcpy(delta.data(), dy, sizeof(double) * delta.size());
  } else {
    switch (head.act) {
      case Activation::Linear:
        std::memcpy(delta.data(), dy, sizeof(double) * delta.size());
        break;
      case Activation::ReLU:
        for (size_t i = 0; i < delta.size(); ++i)
          delta[i] = ws.pre[nl - 1][i] > 0.0 ? dy[i] : 0.0;
        break;
      case Activation::Sigmoid:
        for (size_t i = 0; i < delta.size(); ++i) {
          const double a = ws.post[nl - 1][i];
          delta[i] = dy[i] * a * (1.0 - a);
        }
        break;
      case Activation::Softmax:
        for (int s = 0; s < batch; ++s) {
          const double* as = ws.post[nl - 1].data() + static_cast<long>(s) * head.out_w;
          const double* gs = dy + static_cast<long>(s) * head.out_w;
          double dot = 0.0;
          for (int i = 0; i < head.out_w; ++i) dot += gs[i] * as[i];
          double* ds = delta.data() + static_cast<long>(s) * head.out_w;
          for (int i = 0; i < head.out_w; ++i) ds[i] = as[i] * (gs[i] - dot);
        }
        break;
    }
  }

  std::vector<double> dprev;
  for (int l = nl - 1; l >= 0; --l) {
    const Layer& layer = net.layers[l];
    const double* input = (l == 0) ? ws.input.data() : ws.post[l - 1].data();
    const bool need_dx = (l > 0) || (dx != nullptr);
    dprev.resize(need_dx ? static_cast<size_t>(batch) * layer.in_w : 0);
    affine_backward_batch(layer.w.data(), layer.in_w, layer.out_w, input, delta.data(), batch,
                          out.w[l].data(), out.b[l].data(), need_dx ? dprev.data() : nullptr, be);
    if (l == 0) {
      if (dx != nullptr) std::memcpy(dx, dprev.data(), sizeof(double) * dprev.size());
      break;
    }
    // Chain through the previous layer's activation (hidden layers are ReLU/Linear).
    const Layer& prev = net.layers[l - 1];
    delta.resize(static_cast<size_t>(batch) * prev.out_w);
    if (prev.act == Activation::ReLU) {
      for (size_t i = 0; i < delta.size(); ++i)
        delta[i] = ws.pre[l - 1][i] > 0.0 ? dprev[i] : 0.0;
    } else {
      std::memcpy(delta.data(), dprev.data(), sizeof(double) * delta.size());
    }
  }
}

double log_sum_exp(std::span<const double> z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

std::vector<double> log_softmax(std::span<const double> z) {
  const double lse = log_sum_exp(z);
  std::vector<double> out(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[i] = z[i] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> z) {
  auto out = log_softmax(z);
  for (auto& v : out) v = std::exp(v);
  return out;
}

OptimizerState make_sgd(double lr) {
  OptimizerState o;
  o.rule = OptimizerState::Rule::SGD;
  o.lr = lr;
  return o;
}

OptimizerState make_adam(double lr) {
  OptimizerState o;
  o.rule = OptimizerState::Rule::Adam;
  o.lr = lr;
  return o;
}

void apply(DenseNet& net, const Gradients& g, OptimizerState& opt) {
  if (opt.lr <= 0.0) throw std::invalid_argument("apply: learning rate must be positive");
  if (g.w.size() != net.layers.size()) throw std::invalid_argument("apply: gradient shape mismatch");
  if (opt.rule == OptimizerState::Rule::SGD) {
    for (size_t l = 0; l < net.layers.size(); ++l) {
      auto& layer = net.layers[l];
      if (g.w[l].size() != layer.w.size()) throw std::invalid_argument("apply: gradient shape mismatch");
      for (size_t i = 0; i < layer.w.size(); ++i) layer.w[i] -= opt.lr * g.w[l][i];
      for (size_t i = 0; i < layer.b.size(); ++i) layer.b[i] -= opt.lr * g.b[l][i];
    }
    return;
  }
  if (opt.m.w.empty()) {
    opt.m = make_gradients(net);
    opt.v = make_gradients(net);
  }
  opt.step += 1;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  auto update = [&](std::vector<double>& theta, const std::vector<double>& grad,
                    std::vector<double>& m, std::vector<double>& v) {
    if (grad.size() != theta.size()) throw std::invalid_argument("apply: gradient shape mismatch");
    for (size_t i = 0; i < theta.size(); ++i) {
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * grad[i];
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      theta[i] -= opt.lr * mhat / (std::sqrt(vhat) + opt.eps);
    }
  };
  for (size_t l = 0; l < net.layers.size(); ++l) {
    update(net.layers[l].w, g.w[l], opt.m.w[l], opt.v.w[l]);
    update(net.layers[l].b, g.b[l], opt.m.b[l], opt.v.b[l]);
  }
}

namespace {

void write_u32(std::FILE* f, uint32_t v) {
  unsigned char buf[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
  if (std::fwrite(buf, 1, 4, f) != 4) throw std::runtime_error("save_params: short write");
}

uint32_t read_u32(std::FILE* f) {
  unsigned char buf[4];
  if (std::fread(buf, 1, 4, f) != 4) throw std::runtime_error("load_params: short read");
  return static_cast<uint32_t>(buf[0]) | (static_cast<uint32_t>(buf[1]) << 8) |
         (static_cast<uint32_t>(buf[2]) << 16) | (static_cast<uint32_t>(buf[3]) << 24);
}

void write_f32s(std::FILE* f, const std::vector<double>& xs) {
  std::vector<float> tmp(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) tmp[i] = static_cast<float>(xs[i]);
  if (std::fwrite(tmp.data(), sizeof(float), tmp.size(), f) != tmp.size())
    throw std::runtime_error("save_params: short write");
}

void read_f32s(std::FILE* f, std::vector<double>& xs) {
  std::vector<float> tmp(xs.size());
  if (std::fread(tmp.data(), sizeof(float), tmp.size(), f) != tmp.size())
    throw std::runtime_error("load_params: short read");
  for (size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(tmp[i]);
}

constexpr uint32_t kMagic = 0x314E5047;  // "GPN1"

}  // namespace

void save_params(const DenseNet& net, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_params: cannot open " + path);
  try {
    write_u32(f, kMagic);
    write_u32(f, static_cast<uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) {
      write_u32(f, static_cast<uint32_t>(l.in_w));
      write_u32(f, static_cast<uint32_t>(l.out_w));
      write_u32(f, static_cast<uint32_t>(l.act));
    }
    for (const auto& l : net.layers) {
      write_f32s(f, l.w);
      write_f32s(f, l.b);
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
}

DenseNet load_params(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_params: cannot open " + path);
  DenseNet net;
  try {
    if (read_u32(f) != kMagic) throw std::runtime_error("load_params: bad magic in " + path);
    const uint32_t nl = read_u32(f);
    net.layers.resize(nl);
    for (auto& l : net.layers) {
      l.in_w = static_cast<int>(read_u32(f));
      l.out_w = static_cast<int>(read_u32(f));
      l.act = static_cast<Activation>(read_u32(f));
      l.w.resize(static_cast<size_t>(l.in_w) * l.out_w);
      l.b.resize(l.out_w);
    }
    for (auto& l : net.layers) {
      read_f32s(f, l.w);
      read_f32s(f, l.b);
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  return net;
}

}  // namespace gailpt::nn
