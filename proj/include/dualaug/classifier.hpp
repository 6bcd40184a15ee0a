// Copyright 2026 The DualAug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small classifiers with explicit forward and backward passes.
//
// Vector mode: MLP  d -> widths[0] -> ... -> C, ReLU between layers.
// Image mode:  for each width c: conv3x3 (same padding) -> ReLU -> maxpool2x2,
//              then flatten -> linear -> C.
//
// Parameters are stored as a flat list of tensors, alternating weight and
// bias per layer. Weights of a linear layer are [out x in] row-major; conv
// kernels are [out_c x in_c x 3 x 3].

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "dualaug/dataset.hpp"
#include "dualaug/error.hpp"
#include "dualaug/rng.hpp"

namespace dualaug {

struct Architecture {
  FeatureMode mode = FeatureMode::vector;
  Shape input;
  std::uint32_t classes = 0;
  /// Hidden widths (vector mode) or conv channel counts (image mode).
  std::vector<std::uint32_t> widths;

  bool operator==(const Architecture&) const = default;

  std::size_t input_size() const { return element_count(input); }

  /// MLP [d -> 64 -> 64 -> C] or conv(1->8) -> conv(8->16) -> C.
  static Architecture default_for(FeatureMode mode, const Shape& input, std::uint32_t classes) {
    return {mode, input, classes,
            mode == FeatureMode::vector ? std::vector<std::uint32_t>{64, 64} : std::vector<std::uint32_t>{8, 16}};
  }
  static Architecture default_for(const Dataset& ds) { return default_for(ds.mode, ds.shape, ds.class_count); }
};

inline void validate(const Architecture& arch) {
  if (arch.classes < 2) throw ConfigError("architecture needs at least 2 classes");
  if (arch.mode == FeatureMode::vector) {
    if (arch.input.size() != 1 || arch.input[0] == 0) throw ConfigError("vector architecture needs input [d]");
  } else {
    if (arch.input.size() != 2) throw ConfigError("image architecture needs input [h, w]");
    if (arch.widths.empty()) throw ConfigError("image architecture needs at least one conv layer");
    if ((arch.input[0] >> arch.widths.size()) == 0 || (arch.input[1] >> arch.widths.size()) == 0)
      throw ConfigError("image too small for the number of pooling stages");
  }
  if (std::find(arch.widths.begin(), arch.widths.end(), 0u) != arch.widths.end())
    throw ConfigError("layer width must be positive");
}

/// Shapes of the parameter tensors in storage order.
inline std::vector<Shape> param_shapes(const Architecture& arch) {
  std::vector<Shape> shapes;
  if (arch.mode == FeatureMode::vector) {
    std::uint32_t in = arch.input[0];
    for (std::uint32_t out : arch.widths) {
      shapes.push_back({out, in});
      shapes.push_back({out});
      in = out;
    }
    shapes.push_back({arch.classes, in});
    shapes.push_back({arch.classes});
  } else {
    std::uint32_t in_c = 1;
    std::uint32_t h = arch.input[0];
    std::uint32_t w = arch.input[1];
    for (std::uint32_t out_c : arch.widths) {
      shapes.push_back({out_c, in_c, 3, 3});
      shapes.push_back({out_c});
      in_c = out_c;
      h /= 2;
      w /= 2;
    }
    shapes.push_back({arch.classes, in_c * h * w});
    shapes.push_back({arch.classes});
  }
  return shapes;
}

template <class T>
struct ModelParams {
  Architecture arch;
  std::vector<std::vector<T>> tensors;

  std::size_t parameter_count() const {
    return std::accumulate(tensors.begin(), tensors.end(), std::size_t{0},
                           [](std::size_t n, const std::vector<T>& t) { return n + t.size(); });
  }
  bool all_finite() const {
    for (const auto& t : tensors)
      for (T v : t)
        if (!std::isfinite(v)) return false;
    return true;
  }
  bool operator==(const ModelParams&) const = default;
};

/// Zero-valued parameters with the layout of `arch`.
template <class T>
ModelParams<T> zeros_like(const Architecture& arch) {
  ModelParams<T> p{arch, {}};
  for (const Shape& s : param_shapes(arch)) p.tensors.emplace_back(element_count(s), T{0});
  return p;
}

/// He (fan-in) Gaussian weights, zero biases, zero final layer.
template <class T>
ModelParams<T> init_params(const Architecture& arch, std::uint64_t seed) {
  validate(arch);
  ModelParams<T> p = zeros_like<T>(arch);
  const auto shapes = param_shapes(arch);
  const std::size_t final_weight = shapes.size() - 2;
  for (std::size_t t = 0; t < final_weight; t += 2) {
    const Shape& s = shapes[t];
    const std::size_t fan_in = element_count(s) / s[0];
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    RngStream rng = RngStream(seed, 0, 0, static_cast<std::uint32_t>(t)).substream(Lane::init);
    for (T& v : p.tensors[t]) v = static_cast<T>(stddev * rng.normal());
  }
  return p;
}

namespace detail {

/// Per-sample activations kept for the backward pass.
template <class T>
struct Trace {
  std::vector<std::vector<T>> acts;     // MLP: layer inputs; CNN: padded conv inputs, then the flat vector
  std::vector<std::vector<T>> relu;     // CNN: post-ReLU conv outputs
  std::vector<std::vector<std::uint32_t>> argmax;  // CNN: pool source index into relu
  std::vector<T> logits;
};

template <class T>
void linear(std::span<const T> w, std::span<const T> b, std::span<const T> in, std::span<T> out) {
  const std::size_t n_in = in.size();
  for (std::size_t o = 0; o < out.size(); ++o) {
    const T* row = w.data() + o * n_in;
    T acc = b[o];
    for (std::size_t i = 0; i < n_in; ++i) acc += row[i] * in[i];
    out[o] = acc;
  }
}

struct ConvDims {
  std::uint32_t in_c, out_c, h, w;
};

inline std::vector<ConvDims> conv_dims(const Architecture& arch) {
  std::vector<ConvDims> dims;
  std::uint32_t in_c = 1, h = arch.input[0], w = arch.input[1];
  for (std::uint32_t out_c : arch.widths) {
    dims.push_back({in_c, out_c, h, w});
    in_c = out_c;
    h /= 2;
    w /= 2;
  }
  return dims;
}

template <class T>
void forward_mlp(const ModelParams<T>& p, std::span<const float> x, Trace<T>& tr) {
  const std::size_t layers = p.tensors.size() / 2;
  tr.acts.resize(layers);
  tr.acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t out_n = p.tensors[2 * l + 1].size();
    std::vector<T>& dst = l + 1 < layers ? tr.acts[l + 1] : tr.logits;
    dst.assign(out_n, T{0});
    linear<T>(p.tensors[2 * l], p.tensors[2 * l + 1], tr.acts[l], dst);
    if (l + 1 < layers)
      for (T& v : dst) v = std::max(v, T{0});
  }
}

template <class T>
void forward_cnn(const ModelParams<T>& p, std::span<const float> x, Trace<T>& tr) {
  const auto dims = conv_dims(p.arch);
  const std::size_t n_conv = dims.size();
  tr.acts.resize(n_conv + 1);
  tr.relu.resize(n_conv);
  tr.argmax.resize(n_conv);
  std::vector<T> cur(x.begin(), x.end());
  for (std::size_t l = 0; l < n_conv; ++l) {
    const auto [in_c, out_c, h, w] = dims[l];
    const std::size_t pw = w + 2, ph = h + 2;
    std::vector<T>& padded = tr.acts[l];
    padded.assign(in_c * ph * pw, T{0});
    for (std::uint32_t c = 0; c < in_c; ++c)
      for (std::uint32_t y = 0; y < h; ++y)
        std::copy_n(cur.data() + (std::size_t{c} * h + y) * w, w, padded.data() + (c * ph + y + 1) * pw + 1);

    const T* kernel = p.tensors[2 * l].data();
    const T* bias = p.tensors[2 * l + 1].data();
    std::vector<T>& r = tr.relu[l];
    r.assign(std::size_t{out_c} * h * w, T{0});
    for (std::uint32_t oc = 0; oc < out_c; ++oc) {
      T* out = r.data() + std::size_t{oc} * h * w;
      std::fill_n(out, std::size_t{h} * w, bias[oc]);
      for (std::uint32_t ic = 0; ic < in_c; ++ic) {
        for (std::uint32_t ky = 0; ky < 3; ++ky) {
          for (std::uint32_t kx = 0; kx < 3; ++kx) {
            const T k = kernel[((std::size_t{oc} * in_c + ic) * 3 + ky) * 3 + kx];
            const T* src = padded.data() + (ic * ph + ky) * pw + kx;
            for (std::uint32_t y = 0; y < h; ++y) {
              T* o = out + std::size_t{y} * w;
              const T* s = src + y * pw;
              for (std::uint32_t xx = 0; xx < w; ++xx) o[xx] += k * s[xx];
            }
          }
        }
      }
      for (std::size_t i = 0; i < std::size_t{h} * w; ++i) out[i] = std::max(out[i], T{0});
    }

    const std::uint32_t oh = h / 2, ow = w / 2;
    cur.assign(std::size_t{out_c} * oh * ow, T{0});
    tr.argmax[l].assign(cur.size(), 0);
    for (std::uint32_t c = 0; c < out_c; ++c) {
      for (std::uint32_t y = 0; y < oh; ++y) {
        for (std::uint32_t xx = 0; xx < ow; ++xx) {
          const std::size_t base = (std::size_t{c} * h + 2 * y) * w + 2 * xx;
          std::size_t best = base;
          for (std::size_t cand : {base + 1, base + w, base + w + 1})
            if (r[cand] > r[best]) best = cand;
          const std::size_t o = (std::size_t{c} * oh + y) * ow + xx;
          cur[o] = r[best];
          tr.argmax[l][o] = static_cast<std::uint32_t>(best);
        }
      }
    }
  }
  tr.acts[n_conv] = std::move(cur);
  const std::size_t fc = 2 * n_conv;
  tr.logits.assign(p.arch.classes, T{0});
  linear<T>(p.tensors[fc], p.tensors[fc + 1], tr.acts[n_conv], tr.logits);
}

template <class T>
void forward_one(const ModelParams<T>& p, std::span<const float> x, Trace<T>& tr) {
  if (p.arch.mode == FeatureMode::vector)
    forward_mlp(p, x, tr);
  else
    forward_cnn(p, x, tr);
}

/// Accumulates d(loss)/d(params) for one sample given d(loss)/d(logits).
template <class T>
void backward_mlp(const ModelParams<T>& p, const Trace<T>& tr, std::vector<T> g, ModelParams<T>& grads) {
  const std::size_t layers = p.tensors.size() / 2;
  for (std::size_t l = layers; l-- > 0;) {
    const std::vector<T>& in = tr.acts[l];
    const std::size_t n_in = in.size();
    T* gw = grads.tensors[2 * l].data();
    T* gb = grads.tensors[2 * l + 1].data();
    for (std::size_t o = 0; o < g.size(); ++o) {
      gb[o] += g[o];
      T* row = gw + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) row[i] += g[o] * in[i];
    }
    if (l == 0) break;
    std::vector<T> g_in(n_in, T{0});
    const T* w = p.tensors[2 * l].data();
    for (std::size_t o = 0; o < g.size(); ++o) {
      const T* row = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) g_in[i] += row[i] * g[o];
    }
    for (std::size_t i = 0; i < n_in; ++i)
      if (!(in[i] > T{0})) g_in[i] = T{0};
    g = std::move(g_in);
  }
}

template <class T>
void backward_cnn(const ModelParams<T>& p, const Trace<T>& tr, const std::vector<T>& g_logits,
                  ModelParams<T>& grads) {
  const auto dims = conv_dims(p.arch);
  const std::size_t n_conv = dims.size();
  const std::size_t fc = 2 * n_conv;
  const std::vector<T>& flat = tr.acts[n_conv];

  std::vector<T> g(flat.size(), T{0});
  {
    T* gw = grads.tensors[fc].data();
    T* gb = grads.tensors[fc + 1].data();
    const T* w = p.tensors[fc].data();
    for (std::size_t o = 0; o < g_logits.size(); ++o) {
      gb[o] += g_logits[o];
      T* grow = gw + o * flat.size();
      const T* wrow = w + o * flat.size();
      for (std::size_t i = 0; i < flat.size(); ++i) {
        grow[i] += g_logits[o] * flat[i];
        g[i] += wrow[i] * g_logits[o];
      }
    }
  }

  std::vector<T> acc;
  for (std::size_t l = n_conv; l-- > 0;) {
    const auto [in_c, out_c, h, w] = dims[l];
    const std::size_t pw = w + 2, ph = h + 2;
    const std::vector<T>& r = tr.relu[l];
    // Unpool onto the post-ReLU map, then gate by the ReLU.
    std::vector<T> gz(r.size(), T{0});
    for (std::size_t o = 0; o < g.size(); ++o) gz[tr.argmax[l][o]] += g[o];
    for (std::size_t i = 0; i < gz.size(); ++i)
      if (!(r[i] > T{0})) gz[i] = T{0};

    const std::vector<T>& padded = tr.acts[l];
    const T* kernel = p.tensors[2 * l].data();
    T* gk = grads.tensors[2 * l].data();
    T* gb = grads.tensors[2 * l + 1].data();
    const bool need_input_grad = l > 0;
    std::vector<T> gp(need_input_grad ? padded.size() : 0, T{0});
    acc.assign(w, T{0});
    for (std::uint32_t oc = 0; oc < out_c; ++oc) {
      const T* go = gz.data() + std::size_t{oc} * h * w;
      T bsum = 0;
      for (std::size_t i = 0; i < std::size_t{h} * w; ++i) bsum += go[i];
      gb[oc] += bsum;
      for (std::uint32_t ic = 0; ic < in_c; ++ic) {
        for (std::uint32_t ky = 0; ky < 3; ++ky) {
          for (std::uint32_t kx = 0; kx < 3; ++kx) {
            const std::size_t kidx = ((std::size_t{oc} * in_c + ic) * 3 + ky) * 3 + kx;
            const std::size_t off = (ic * ph + ky) * pw + kx;
            const T* src = padded.data() + off;
            std::fill(acc.begin(), acc.end(), T{0});
            for (std::uint32_t y = 0; y < h; ++y) {
              const T* s = src + y * pw;
              const T* gr = go + std::size_t{y} * w;
              for (std::uint32_t xx = 0; xx < w; ++xx) acc[xx] += gr[xx] * s[xx];
            }
            T sum = 0;
            for (T v : acc) sum += v;
            gk[kidx] += sum;
            if (need_input_grad) {
              const T k = kernel[kidx];
              T* dst = gp.data() + off;
              for (std::uint32_t y = 0; y < h; ++y) {
                T* d = dst + y * pw;
                const T* gr = go + std::size_t{y} * w;
                for (std::uint32_t xx = 0; xx < w; ++xx) d[xx] += k * gr[xx];
              }
            }
          }
        }
      }
    }
    if (!need_input_grad) break;
    // Strip padding to get the gradient w.r.t. the previous pooled map.
    g.assign(std::size_t{in_c} * h * w, T{0});
    for (std::uint32_t c = 0; c < in_c; ++c)
      for (std::uint32_t y = 0; y < h; ++y)
        std::copy_n(gp.data() + (c * ph + y + 1) * pw + 1, w, g.data() + (std::size_t{c} * h + y) * w);
  }
}

template <class T>
void check_batch(const Architecture& arch, std::span<const float> batch, std::size_t batch_size) {
  const std::size_t expected = batch_size * arch.input_size();
  if (batch.size() != expected)
    throw ShapeError("batch has " + std::to_string(batch.size()) + " values, expected " + std::to_string(expected) +
                     " (" + std::to_string(batch_size) + " x " + std::to_string(arch.input_size()) + ")");
}

}  // namespace detail

/// Logits [batch_size x C], row-major. Reads the parameters only.
template <class T>
std::vector<T> forward(const ModelParams<T>& params, std::span<const float> batch, std::size_t batch_size) {
  detail::check_batch<T>(params.arch, batch, batch_size);
  const std::size_t d = params.arch.input_size();
  const std::size_t c = params.arch.classes;
  std::vector<T> logits(batch_size * c);
  detail::Trace<T> tr;
  for (std::size_t i = 0; i < batch_size; ++i) {
    detail::forward_one(params, batch.subspan(i * d, d), tr);
    std::copy(tr.logits.begin(), tr.logits.end(), logits.begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  return logits;
}

template <class T>
struct LossAndGrad {
  double loss = 0.0;
  ModelParams<T> grads;
};

/// Mean softmax cross-entropy over the batch and its exact gradient.
template <class T>
LossAndGrad<T> loss_and_grad(const ModelParams<T>& params, std::span<const float> batch,
                             std::span<const std::uint32_t> labels) {
  const std::size_t batch_size = labels.size();
  if (batch_size == 0) throw ParameterError("loss_and_grad: empty batch");
  detail::check_batch<T>(params.arch, batch, batch_size);
  const std::size_t d = params.arch.input_size();
  const std::size_t c = params.arch.classes;
  for (std::uint32_t y : labels)
    if (y >= c) throw ParameterError("label " + std::to_string(y) + " out of range for " + std::to_string(c) + " classes");

  LossAndGrad<T> out{0.0, zeros_like<T>(params.arch)};
  detail::Trace<T> tr;
  std::vector<T> g(c);
  const double inv_b = 1.0 / static_cast<double>(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    detail::forward_one(params, batch.subspan(i * d, d), tr);
    const double mx = static_cast<double>(*std::max_element(tr.logits.begin(), tr.logits.end()));
    double denom = 0.0;
    for (T z : tr.logits) denom += std::exp(static_cast<double>(z) - mx);
    const double log_denom = std::log(denom);
    out.loss += (mx + log_denom - static_cast<double>(tr.logits[labels[i]])) * inv_b;
    for (std::size_t j = 0; j < c; ++j) {
      const double prob = std::exp(static_cast<double>(tr.logits[j]) - mx - log_denom);
      g[j] = static_cast<T>((prob - (j == labels[i] ? 1.0 : 0.0)) * inv_b);
    }
    if (params.arch.mode == FeatureMode::vector)
      detail::backward_mlp(params, tr, g, out.grads);
    else
      detail::backward_cnn(params, tr, g, out.grads);
  }
  return out;
}

/// argmax of each row of the logits.
template <class T>
std::vector<std::uint32_t> predict(const ModelParams<T>& params, std::span<const float> batch, std::size_t batch_size) {
  const auto logits = forward(params, batch, batch_size);
  const std::size_t c = params.arch.classes;
  std::vector<std::uint32_t> out(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const auto row = logits.begin() + static_cast<std::ptrdiff_t>(i * c);
    out[i] = static_cast<std::uint32_t>(std::max_element(row, row + static_cast<std::ptrdiff_t>(c)) - row);
  }
  return out;
}

template <class T>
struct TrainState {
  ModelParams<T> params;
  std::vector<std::vector<T>> velocity;
  std::uint32_t epoch = 0;
  std::uint64_t step = 0;
  std::uint64_t seed = 0;

  static TrainState fresh(const Architecture& arch, std::uint64_t seed) {
    TrainState s;
    s.params = init_params<T>(arch, seed);
    s.velocity = zeros_like<T>(arch).tensors;
    s.seed = seed;
    return s;
  }
};

/// Momentum SGD with L2 weight decay:
///   v <- momentum * v + (g + weight_decay * theta);  theta <- theta - lr * v
template <class T>
void sgd_step(TrainState<T>& state, const ModelParams<T>& grads, double lr, double momentum, double weight_decay) {
  if (!(lr >= 0.0)) throw ParameterError("sgd_step: lr must be >= 0");
  if (grads.arch != state.params.arch) throw ShapeError("sgd_step: gradient layout does not match parameters");
  if (!grads.all_finite()) throw NumericError("non-finite gradient", static_cast<std::int64_t>(state.step));
  const T lr_t = static_cast<T>(lr);
  const T mom_t = static_cast<T>(momentum);
  const T wd_t = static_cast<T>(weight_decay);
  for (std::size_t t = 0; t < grads.tensors.size(); ++t) {
    std::vector<T>& theta = state.params.tensors[t];
    std::vector<T>& v = state.velocity[t];
    const std::vector<T>& g = grads.tensors[t];
    for (std::size_t i = 0; i < theta.size(); ++i) {
      v[i] = mom_t * v[i] + (g[i] + wd_t * theta[i]);
      theta[i] -= lr_t * v[i];
    }
  }
  if (!state.params.all_finite())
    throw NumericError("non-finite parameter after update", static_cast<std::int64_t>(state.step));
  ++state.step;
}

namespace detail {
inline constexpr char kCheckpointMagic[8] = {'D', 'A', 'U', 'G', 'C', 'K', 'P', 'T'};
inline constexpr std::uint16_t kCheckpointVersion = 1;
}  // namespace detail

/// Checkpoint layout, little-endian: "DAUGCKPT", u16 version, u8 mode,
/// u32 classes, u32 input rank, u32 dims[rank], u32 width count,
/// u32 widths[], u64 parameter count, f32 parameters in tensor order.
inline std::vector<unsigned char> encode_checkpoint(const ModelParams<float>& params) {
  detail::ByteWriter w;
  w.put_bytes(std::string_view(detail::kCheckpointMagic, 8));
  w.put<std::uint16_t>(detail::kCheckpointVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(params.arch.mode));
  w.put<std::uint32_t>(params.arch.classes);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.arch.input.size()));
  for (std::uint32_t d : params.arch.input) w.put<std::uint32_t>(d);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.arch.widths.size()));
  for (std::uint32_t d : params.arch.widths) w.put<std::uint32_t>(d);
  w.put<std::uint64_t>(params.parameter_count());
  for (const auto& t : params.tensors)
    for (float v : t) w.put<float>(v);
  return w.bytes();
}

inline ModelParams<float> decode_checkpoint(std::vector<unsigned char> bytes) {
  detail::ByteReader r(std::move(bytes));
  if (r.get_bytes(8, "magic") != std::string_view(detail::kCheckpointMagic, 8))
    throw FormatError("bad magic, expected \"DAUGCKPT\"", 0);
  const std::size_t version_at = r.offset();
  if (r.get<std::uint16_t>("version") != detail::kCheckpointVersion)
    throw FormatError("unsupported checkpoint version", version_at);
  Architecture arch;
  const std::size_t mode_at = r.offset();
  const auto mode = r.get<std::uint8_t>("mode");
  if (mode > 1) throw FormatError("unknown feature mode", mode_at);
  arch.mode = static_cast<FeatureMode>(mode);
  arch.classes = r.get<std::uint32_t>("classes");
  const std::size_t rank_at = r.offset();
  const auto rank = r.get<std::uint32_t>("rank");
  if (rank > 2) throw FormatError("input rank must be 1 or 2", rank_at);
  for (std::uint32_t i = 0; i < rank; ++i) arch.input.push_back(r.get<std::uint32_t>("input dims"));
  const std::size_t nw_at = r.offset();
  const auto n_widths = r.get<std::uint32_t>("width count");
  if (n_widths > 64) throw FormatError("implausible layer count", nw_at);
  for (std::uint32_t i = 0; i < n_widths; ++i) arch.widths.push_back(r.get<std::uint32_t>("widths"));
  try {
    validate(arch);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid architecture: ") + e.what(), mode_at);
  }
  ModelParams<float> params = zeros_like<float>(arch);
  const std::size_t count_at = r.offset();
  if (r.get<std::uint64_t>("parameter count") != params.parameter_count())
    throw FormatError("parameter count does not match architecture", count_at);
  for (auto& t : params.tensors)
    for (float& v : t) v = r.get<float>("parameters");
  if (r.remaining() != 0) throw FormatError("trailing bytes after parameters", r.offset());
  return params;
}

inline void save_checkpoint(const ModelParams<float>& params, const std::filesystem::path& path) {
  detail::write_file(path, encode_checkpoint(params));
}

inline ModelParams<float> load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(detail::read_file(path));
}

}  // namespace dualaug
