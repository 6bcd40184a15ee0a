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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualaug/dataset.hpp"
#include "dualaug/error.hpp"
#include "dualaug/rng.hpp"

namespace dualaug {

/// Registered operators. Magnitudes are normalized to [0,1]; the physical
/// mapping of each operator is documented next to its implementation.
enum class Op : std::uint8_t {
  // vector mode
  jitter,
  scale,
  rotate_pair,
  translate,
  coordinate_drop,
  // image mode
  rotate,
  translate_x,
  translate_y,
  shear_x,
  shear_y,
  zoom,
  brightness,
  contrast,
  invert,
  cutout,
  gauss_noise,
};

struct OpInfo {
  Op op;
  std::string_view name;
  FeatureMode mode;
};

inline constexpr std::array<OpInfo, 16> kOpRegistry = {{
    {Op::jitter, "jitter", FeatureMode::vector},
    {Op::scale, "scale", FeatureMode::vector},
    {Op::rotate_pair, "rotate_pair", FeatureMode::vector},
    {Op::translate, "translate", FeatureMode::vector},
    {Op::coordinate_drop, "coordinate_drop", FeatureMode::vector},
    {Op::rotate, "rotate", FeatureMode::image},
    {Op::translate_x, "translate_x", FeatureMode::image},
    {Op::translate_y, "translate_y", FeatureMode::image},
    {Op::shear_x, "shear_x", FeatureMode::image},
    {Op::shear_y, "shear_y", FeatureMode::image},
    {Op::zoom, "zoom", FeatureMode::image},
    {Op::brightness, "brightness", FeatureMode::image},
    {Op::contrast, "contrast", FeatureMode::image},
    {Op::invert, "invert", FeatureMode::image},
    {Op::cutout, "cutout", FeatureMode::image},
    {Op::gauss_noise, "gauss_noise", FeatureMode::image},
}};

inline const OpInfo& info(Op op) { return kOpRegistry[static_cast<std::size_t>(op)]; }
inline std::string_view to_string(Op op) { return info(op).name; }

inline Op op_from_name(std::string_view name) {
  for (const OpInfo& i : kOpRegistry)
    if (i.name == name) return i.op;
  throw ConfigError("unknown transform operator '" + std::string(name) + "'");
}

/// All operators registered for `mode`, in registry order.
inline std::vector<Op> registry(FeatureMode mode) {
  std::vector<Op> ops;
  for (const OpInfo& i : kOpRegistry)
    if (i.mode == mode) ops.push_back(i.op);
  return ops;
}

/// Operators the basic branch samples from when no pool is configured.
/// Image mode leaves gauss_noise out so that it can serve as the "new type"
/// for the more_types heavy mode.
inline std::vector<Op> default_basic_pool(FeatureMode mode) {
  std::vector<Op> ops = registry(mode);
  if (mode == FeatureMode::image) std::erase(ops, Op::gauss_noise);
  return ops;
}

inline std::vector<Op> default_extra_type_pool(FeatureMode mode) {
  return mode == FeatureMode::image ? std::vector<Op>{Op::gauss_noise} : std::vector<Op>{Op::jitter};
}

/// One transformation: operator, application probability, normalized
/// magnitude.
struct TransformSpec {
  Op op = Op::jitter;
  double probability = 1.0;
  double magnitude = 0.0;

  bool operator==(const TransformSpec&) const = default;
};

/// Ordered cascade of transformations; stage 0 is applied first.
struct Pipeline {
  std::vector<TransformSpec> stages;

  bool operator==(const Pipeline&) const = default;
};

/// Mode and shape shared by every sample a transform sees.
struct FeatureLayout {
  FeatureMode mode = FeatureMode::vector;
  Shape shape;

  static FeatureLayout of(const Dataset& ds) { return {ds.mode, ds.shape}; }
  std::size_t size() const { return element_count(shape); }
};

inline void validate(const TransformSpec& spec, FeatureMode mode) {
  if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
    throw ConfigError("transform probability must be in [0,1]");
  if (!(spec.magnitude >= 0.0 && spec.magnitude <= 1.0)) throw ConfigError("transform magnitude must be in [0,1]");
  if (info(spec.op).mode != mode)
    throw ConfigError("operator '" + std::string(to_string(spec.op)) + "' is not defined for " + to_string(mode) +
                      " features");
}

namespace detail {

/// Nearest-neighbour inverse warp with zero padding: out(p) = in(src(p))
/// where `src` maps an output pixel centre to input coordinates.
template <class SourceOf>
std::vector<float> warp(std::span<const float> in, std::uint32_t h, std::uint32_t w, SourceOf src) {
  std::vector<float> out(in.size(), 0.f);
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      const auto [sx, sy] = src(x + 0.5, y + 0.5);
      const double fx = std::floor(sx);
      const double fy = std::floor(sy);
      if (fx >= 0.0 && fy >= 0.0 && fx < w && fy < h)
        out[std::size_t{y} * w + x] = in[static_cast<std::size_t>(fy) * w + static_cast<std::size_t>(fx)];
    }
  }
  return out;
}

inline std::vector<float> apply_image_op(std::span<const float> in, std::uint32_t h, std::uint32_t w, Op op,
                                         double m, RngStream& rng) {
  const double cx = w * 0.5;
  const double cy = h * 0.5;
  std::vector<float> out;
  switch (op) {
    case Op::rotate: {  // +-m*45 degrees about the centre
      const double theta = rng.sign() * m * std::numbers::pi / 4.0;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      out = warp(in, h, w, [&](double px, double py) {
        const double dx = px - cx;
        const double dy = py - cy;
        return std::pair{c * dx + s * dy + cx, -s * dx + c * dy + cy};
      });
      break;
    }
    case Op::translate_x: {  // +-m*0.4*width pixels
      const double shift = rng.sign() * m * 0.4 * w;
      out = warp(in, h, w, [&](double px, double py) { return std::pair{px - shift, py}; });
      break;
    }
    case Op::translate_y: {
      const double shift = rng.sign() * m * 0.4 * w;
      out = warp(in, h, w, [&](double px, double py) { return std::pair{px, py - shift}; });
      break;
    }
    case Op::shear_x: {  // shear factor +-m*0.5 about the centre row
      const double k = rng.sign() * m * 0.5;
      out = warp(in, h, w, [&](double px, double py) { return std::pair{px - k * (py - cy), py}; });
      break;
    }
    case Op::shear_y: {
      const double k = rng.sign() * m * 0.5;
      out = warp(in, h, w, [&](double px, double py) { return std::pair{px, py - k * (px - cx)}; });
      break;
    }
    case Op::zoom: {  // scale 1 +- 0.5*m about the centre
      const double factor = 1.0 + rng.sign() * 0.5 * m;
      out = warp(in, h, w,
                 [&](double px, double py) { return std::pair{(px - cx) / factor + cx, (py - cy) / factor + cy}; });
      break;
    }
    case Op::brightness: {  // add +-0.6*m
      const double delta = rng.sign() * 0.6 * m;
      out.assign(in.begin(), in.end());
      for (float& v : out) v = static_cast<float>(v + delta);
      break;
    }
    case Op::contrast: {  // multiply around the image mean by 1 +- m
      const double factor = 1.0 + rng.sign() * m;
      double mean = 0.0;
      for (float v : in) mean += v;
      mean /= static_cast<double>(in.size());
      out.assign(in.begin(), in.end());
      for (float& v : out) v = static_cast<float>(mean + (v - mean) * factor);
      break;
    }
    case Op::invert:
      out.assign(in.begin(), in.end());
      for (float& v : out) v = 1.f - v;
      break;
    case Op::cutout: {  // zeroed square of side m*0.5*width at a uniform position
      const auto side = static_cast<std::uint32_t>(std::lround(m * 0.5 * w));
      const std::uint32_t x0 = rng.uniform_int(w - std::min(side, w) + 1);
      const std::uint32_t y0 = rng.uniform_int(h - std::min(side, h) + 1);
      out.assign(in.begin(), in.end());
      for (std::uint32_t y = y0; y < std::min(h, y0 + side); ++y)
        for (std::uint32_t x = x0; x < std::min(w, x0 + side); ++x) out[std::size_t{y} * w + x] = 0.f;
      break;
    }
    case Op::gauss_noise: {  // sigma = 0.3*m
      const double sigma = 0.3 * m;
      out.assign(in.begin(), in.end());
      for (float& v : out) v = static_cast<float>(v + sigma * rng.normal());
      break;
    }
    default:
      throw ConfigError("operator '" + std::string(to_string(op)) + "' is not an image operator");
  }
  for (float& v : out) v = std::clamp(v, 0.f, 1.f);
  return out;
}

inline std::vector<float> apply_vector_op(std::span<const float> in, Op op, double m, RngStream& rng) {
  std::vector<float> out(in.begin(), in.end());
  const auto d = static_cast<std::uint32_t>(in.size());
  switch (op) {
    case Op::jitter: {  // sigma = 0.5*m
      const double sigma = 0.5 * m;
      for (float& v : out) v = static_cast<float>(v + sigma * rng.normal());
      break;
    }
    case Op::scale: {  // multiply by 1 +- m
      const double factor = 1.0 + rng.sign() * m;
      for (float& v : out) v = static_cast<float>(v * factor);
      break;
    }
    case Op::rotate_pair: {  // rotate an ordered random pair (i, j) by m*pi/2
      if (d < 2) break;
      const std::uint32_t i = rng.uniform_int(d);
      std::uint32_t j = rng.uniform_int(d - 1);
      if (j >= i) ++j;
      const double theta = m * std::numbers::pi / 2.0;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      out[i] = static_cast<float>(c * in[i] - s * in[j]);
      out[j] = static_cast<float>(s * in[i] + c * in[j]);
      break;
    }
    case Op::translate: {  // shift one random coordinate by +-m
      const std::uint32_t k = rng.uniform_int(d);
      out[k] = static_cast<float>(out[k] + rng.sign() * m);
      break;
    }
    case Op::coordinate_drop: {  // zero each coordinate with probability 0.3*m
      for (float& v : out)
        if (rng.bernoulli(0.3 * m)) v = 0.f;
      break;
    }
    default:
      throw ConfigError("operator '" + std::string(to_string(op)) + "' is not a vector operator");
  }
  return out;
}

}  // namespace detail

/// Applies one transformation. Consumes one draw for the application coin,
/// then the operator's own draws if it fires. Output shape equals input
/// shape; image outputs are clamped to [0,1].
inline std::vector<float> apply_one(std::span<const float> x, const FeatureLayout& layout, const TransformSpec& spec,
                                    RngStream& rng) {
  validate(spec, layout.mode);
  if (x.size() != layout.size()) throw ShapeError("apply_one: feature size does not match layout");
  const bool fires = rng.uniform() < spec.probability;
  if (!fires) return {x.begin(), x.end()};
  if (layout.mode == FeatureMode::image)
    return detail::apply_image_op(x, layout.shape[0], layout.shape[1], spec.op, spec.magnitude, rng);
  return detail::apply_vector_op(x, spec.op, spec.magnitude, rng);
}

/// Left fold of apply_one over the stages, drawing from `rng` in stage
/// order. Continuing the same stream across two calls is equivalent to one
/// call on the concatenated pipeline.
inline std::vector<float> apply_pipeline(std::span<const float> x, const FeatureLayout& layout,
                                         const Pipeline& pipeline, RngStream& rng) {
  std::vector<float> out(x.begin(), x.end());
  for (const TransformSpec& spec : pipeline.stages) out = apply_one(out, layout, spec, rng);
  return out;
}

}  // namespace dualaug
