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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualaug/error.hpp"
#include "dualaug/rng.hpp"
#include "dualaug/transforms.hpp"

namespace dualaug {

/// How the heavy branch is made more aggressive than the basic one.
enum class HeavyMode : std::uint8_t {
  extra_number,      ///< prepend M extra stages drawn from the basic pool
  bigger_magnitude,  ///< basic stages with magnitudes scaled by magnitude_boost
  more_types,        ///< prepend M extra stages drawn from extra_type_pool
};

inline std::string_view to_string(HeavyMode mode) {
  switch (mode) {
    case HeavyMode::extra_number: return "extra_number";
    case HeavyMode::bigger_magnitude: return "bigger_magnitude";
    case HeavyMode::more_types: return "more_types";
  }
  return "?";
}

inline HeavyMode heavy_mode_from_name(std::string_view name) {
  for (HeavyMode m : {HeavyMode::extra_number, HeavyMode::bigger_magnitude, HeavyMode::more_types})
    if (to_string(m) == name) return m;
  throw ConfigError("unknown heavy mode '" + std::string(name) + "'");
}

struct BranchConfig {
  std::uint32_t basic_ops_per_sample = 2;
  HeavyMode heavy_mode = HeavyMode::extra_number;
  /// Extra stage count M is uniform in [1, m_upper].
  std::uint32_t m_upper = 10;
  double magnitude_boost = 18.0 / 14.0;
  double magnitude_lo = 0.2;
  double magnitude_hi = 0.5;
  /// Unset means default_basic_pool / default_extra_type_pool for the mode.
  std::optional<std::vector<Op>> basic_pool;
  std::optional<std::vector<Op>> extra_type_pool;

  bool operator==(const BranchConfig&) const = default;
};

inline std::vector<Op> basic_pool(const BranchConfig& config, FeatureMode mode) {
  return config.basic_pool ? *config.basic_pool : default_basic_pool(mode);
}

inline std::vector<Op> extra_type_pool(const BranchConfig& config, FeatureMode mode) {
  return config.extra_type_pool ? *config.extra_type_pool : default_extra_type_pool(mode);
}

inline void validate(const BranchConfig& config, FeatureMode mode) {
  if (config.m_upper < 1) throw ConfigError("branch.m_upper must be >= 1");
  if (!(config.magnitude_boost >= 1.0)) throw ConfigError("branch.magnitude_boost must be >= 1");
  if (!(config.magnitude_lo >= 0.0 && config.magnitude_lo <= config.magnitude_hi && config.magnitude_hi <= 1.0))
    throw ConfigError("basic magnitude window must satisfy 0 <= lo <= hi <= 1");
  const auto check_pool = [mode](const std::vector<Op>& pool, const char* name) {
    for (Op op : pool)
      if (info(op).mode != mode)
        throw ConfigError(std::string(name) + ": operator '" + std::string(to_string(op)) + "' is not a " +
                          to_string(mode) + " operator");
  };
  const auto basic = basic_pool(config, mode);
  if (basic.empty() && config.basic_ops_per_sample > 0) throw ConfigError("basic operator pool is empty");
  check_pool(basic, "branch.basic_pool");
  if (config.heavy_mode == HeavyMode::more_types) {
    const auto extra = extra_type_pool(config, mode);
    if (extra.empty()) throw ConfigError("branch.extra_types must be nonempty in more_types mode");
    check_pool(extra, "branch.extra_types");
  }
  if (config.heavy_mode == HeavyMode::extra_number && basic.empty())
    throw ConfigError("basic operator pool is empty");
}

/// Basic and heavy pipelines of one sample.
struct BranchPair {
  Pipeline basic;
  Pipeline heavy;
  /// Number of extra stages prepended to the basic stages (0 for
  /// bigger_magnitude).
  std::uint32_t m_drawn = 0;
};

namespace detail {

inline void draw_stages(std::span<const Op> pool, std::uint32_t count, const BranchConfig& config, RngStream& rng,
                        std::vector<TransformSpec>& out) {
  for (std::uint32_t i = 0; i < count; ++i) {
    const Op op = pool[rng.uniform_int(static_cast<std::uint32_t>(pool.size()))];
    const double magnitude = rng.uniform(config.magnitude_lo, config.magnitude_hi);
    out.push_back({op, 1.0, magnitude});
  }
}

}  // namespace detail

/// RandAugment-style basic pipeline: `basic_ops_per_sample` operators drawn
/// uniformly with replacement, probability 1, magnitude uniform in
/// [magnitude_lo, magnitude_hi].
inline Pipeline draw_basic(const BranchConfig& config, FeatureMode mode, RngStream& rng) {
  const auto pool = basic_pool(config, mode);
  if (pool.empty() && config.basic_ops_per_sample > 0) throw ConfigError("basic operator pool is empty");
  Pipeline p;
  detail::draw_stages(pool, config.basic_ops_per_sample, config, rng, p.stages);
  return p;
}

/// Builds the heavy pipeline around an already drawn basic pipeline.
/// For the stage-adding modes the extra stages come first, followed by the
/// basic stages unchanged.
inline BranchPair draw_heavy(const Pipeline& basic, const BranchConfig& config, FeatureMode mode, RngStream& rng) {
  BranchPair pair;
  pair.basic = basic;
  switch (config.heavy_mode) {
    case HeavyMode::bigger_magnitude:
      pair.heavy = basic;
      for (TransformSpec& s : pair.heavy.stages) s.magnitude = std::min(1.0, s.magnitude * config.magnitude_boost);
      break;
    case HeavyMode::extra_number:
    case HeavyMode::more_types: {
      const auto pool = config.heavy_mode == HeavyMode::extra_number ? basic_pool(config, mode)
                                                                     : extra_type_pool(config, mode);
      if (pool.empty()) throw ConfigError("extra operator pool is empty");
      if (config.m_upper < 1) throw ConfigError("branch.m_upper must be >= 1");
      pair.m_drawn = 1 + rng.uniform_int(config.m_upper);
      detail::draw_stages(pool, pair.m_drawn, config, rng, pair.heavy.stages);
      pair.heavy.stages.insert(pair.heavy.stages.end(), basic.stages.begin(), basic.stages.end());
      break;
    }
  }
  return pair;
}

/// Draws both pipelines for the sample addressed by `sample_stream`, using
/// separate lanes so that the basic draw never depends on the heavy one.
inline BranchPair draw_branches(const BranchConfig& config, FeatureMode mode, const RngStream& sample_stream) {
  RngStream basic_rng = sample_stream.substream(Lane::basic_draw);
  RngStream heavy_rng = sample_stream.substream(Lane::heavy_draw);
  return draw_heavy(draw_basic(config, mode, basic_rng), config, mode, heavy_rng);
}

struct AugmentedPair {
  std::vector<float> basic;
  std::vector<float> heavy;
};

/// Applies the basic pipeline on the basic_apply lane.
inline std::vector<float> augment_basic(std::span<const float> x, const FeatureLayout& layout, const BranchPair& pair,
                                        const RngStream& sample_stream) {
  RngStream rng = sample_stream.substream(Lane::basic_apply);
  return apply_pipeline(x, layout, pair.basic, rng);
}

/// Applies both branches. The heavy image is the extra stages (extra_apply
/// lane) followed by the trailing basic-position stages replayed on the
/// basic_apply lane, so the shared basic stages see exactly the draws the
/// basic branch saw.
inline AugmentedPair augment(std::span<const float> x, const FeatureLayout& layout, const BranchPair& pair,
                             const RngStream& sample_stream) {
  AugmentedPair out;
  out.basic = augment_basic(x, layout, pair, sample_stream);
  const auto split = pair.heavy.stages.begin() + pair.m_drawn;
  const Pipeline extras{{pair.heavy.stages.begin(), split}};
  const Pipeline tail{{split, pair.heavy.stages.end()}};
  RngStream extra_rng = sample_stream.substream(Lane::extra_apply);
  RngStream basic_rng = sample_stream.substream(Lane::basic_apply);
  out.heavy = apply_pipeline(apply_pipeline(x, layout, extras, extra_rng), layout, tail, basic_rng);
  return out;
}

}  // namespace dualaug
