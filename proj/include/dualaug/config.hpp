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

// Key-value run configuration.
//
//   # comment
//   gate.lambda = 1.0
//   branch.heavy_mode = extra_number
//
// One `section.key = value` per line. Every key maps to one RunConfig
// field; values are validated when applied and errors name the key.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dualaug/error.hpp"
#include "dualaug/trainer.hpp"

namespace dualaug {

using Settings = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v)) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError(key, "expected a number, got '" + value + "'");
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value, std::uint64_t max) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
    throw UsageError(key, "expected a non-negative integer, got '" + value + "'");
  if (v > max) throw UsageError(key, "value " + value + " is too large");
  return v;
}

inline std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  return static_cast<std::uint32_t>(parse_uint(key, value, 0xFFFFFFFFull));
}

inline void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw UsageError(key, what);
}

inline std::vector<Op> parse_ops(const std::string& key, const std::string& value) {
  std::vector<Op> ops;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      ops.push_back(op_from_name(item));
    } catch (const ConfigError& e) {
      throw UsageError(key, e.what());
    }
  }
  return ops;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

struct KeyInfo {
  std::string_view key;
  std::string_view help;
  Setter set;
};

inline const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> table = {
      {"data.source", "shapes | gauss | path to a dataset file",
       [](RunConfig& c, const std::string&, const std::string& v) { c.data.source = v; }},
      {"data.classes", "class count for generated data",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.data.classes = parse_u32(k, v); }},
      {"data.size", "image side in pixels (shapes)",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.data.size = parse_u32(k, v); }},
      {"data.dim", "feature dimension (gauss)",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.data.dim = parse_u32(k, v); }},
      {"data.per_class", "samples per class before the train/test split",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.data.per_class = parse_u32(k, v);
         require(c.data.per_class >= 2, k, "must be >= 2");
       }},
      {"data.spread", "cluster noise stddev (gauss)",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.data.spread = parse_double(k, v);
         require(c.data.spread >= 0.0, k, "must be >= 0");
       }},
      {"data.test_fraction", "held-out fraction per class",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.data.test_fraction = parse_double(k, v);
         require(c.data.test_fraction > 0.0 && c.data.test_fraction < 1.0, k, "must be in (0,1)");
       }},
      {"branch.basic_ops", "operators per sample in the basic branch",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.branch.basic_ops_per_sample = parse_u32(k, v);
       }},
      {"branch.heavy_mode", "extra_number | bigger_magnitude | more_types",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.branch.heavy_mode = heavy_mode_from_name(v);
         } catch (const ConfigError& e) {
           throw UsageError(k, e.what());
         }
       }},
      {"branch.m_upper", "upper bound of the extra stage count M",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.branch.m_upper = parse_u32(k, v);
         require(c.branch.m_upper >= 1, k, "must be >= 1");
       }},
      {"branch.magnitude_boost", "magnitude multiplier for bigger_magnitude",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.branch.magnitude_boost = parse_double(k, v);
         require(c.branch.magnitude_boost >= 1.0, k, "must be >= 1");
       }},
      {"branch.basic_pool", "comma-separated operators for the basic branch",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.branch.basic_pool = parse_ops(k, v); }},
      {"branch.extra_types", "comma-separated operators for more_types",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.branch.extra_type_pool = parse_ops(k, v); }},
      {"gate.temperature", "softmax temperature T of the score",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.gate.temperature = parse_double(k, v);
         require(c.gate.temperature > 0.0, k, "must be > 0");
       }},
      {"gate.lambda", "threshold width: tau = mean - lambda * stddev",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.gate.lambda = parse_double(k, v);
         require(c.gate.lambda >= 0.0, k, "must be >= 0");
       }},
      {"gate.warmup_fraction", "leading fraction of epochs trained on the basic branch only",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.gate.warmup_fraction = parse_double(k, v);
         require(c.gate.warmup_fraction >= 0.0 && c.gate.warmup_fraction < 1.0, k, "must be in [0,1)");
       }},
      {"gate.scorer", "online | offline:<checkpoint>",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "online") {
           c.gate.scorer = ScorerKind::online;
           c.gate.checkpoint.clear();
         } else if (v.starts_with("offline:") && v.size() > 8) {
           c.gate.scorer = ScorerKind::offline;
           c.gate.checkpoint = v.substr(8);
         } else {
           throw UsageError(k, "expected 'online' or 'offline:<path>', got '" + v + "'");
         }
       }},
      {"train.epochs", "number of epochs",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.epochs = parse_u32(k, v);
         require(c.epochs >= 1, k, "must be >= 1");
       }},
      {"train.batch_size", "mini-batch size",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.batch_size = parse_u32(k, v);
         require(c.batch_size >= 1, k, "must be >= 1");
       }},
      {"train.lr", "learning rate",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lr = parse_double(k, v);
         require(c.lr > 0.0, k, "must be > 0");
       }},
      {"train.momentum", "SGD momentum",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.momentum = parse_double(k, v);
         require(c.momentum >= 0.0 && c.momentum < 1.0, k, "must be in [0,1)");
       }},
      {"train.weight_decay", "L2 weight decay",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.weight_decay = parse_double(k, v);
         require(c.weight_decay >= 0.0, k, "must be >= 0");
       }},
      {"train.schedule", "constant | cosine",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "constant")
           c.schedule = Schedule::constant;
         else if (v == "cosine")
           c.schedule = Schedule::cosine;
         else
           throw UsageError(k, "expected 'constant' or 'cosine', got '" + v + "'");
       }},
      {"train.eval_every", "evaluate the test split every N epochs",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.eval_every = parse_u32(k, v);
         require(c.eval_every >= 1, k, "must be >= 1");
       }},
      {"train.seed", "root seed for data, init, shuffling and augmentation",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_uint(k, v, ~0ull); }},
      {"train.variant", "dual | basic_only | heavy_only | heavy_plus_gate | random_mix",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.variant = variant_from_name(v);
         } catch (const ConfigError& e) {
           throw UsageError(k, e.what());
         }
       }},
      {"train.out", "output directory for metrics and checkpoints",
       [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }},
  };
  return table;
}

}  // namespace detail

/// All recognized config keys, in documentation order.
inline std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& k : detail::key_table()) keys.emplace_back(k.key);
  return keys;
}

inline std::string_view config_key_help(std::string_view key) {
  for (const auto& k : detail::key_table())
    if (k.key == key) return k.help;
  return {};
}

/// Parses config text. Unknown keys and malformed lines are usage errors.
inline Settings parse_config(std::string_view text) {
  Settings settings;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw UsageError("", "config line " + std::to_string(line_no) + ": expected 'section.key = value'");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (config_key_help(key).empty()) throw UsageError(key, "unknown config key (line " + std::to_string(line_no) + ")");
    if (value.empty()) throw UsageError(key, "missing value (line " + std::to_string(line_no) + ")");
    settings[key] = value;
  }
  return settings;
}

inline Settings load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("", "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Applies settings to `config`. Keys are independent, so order is irrelevant.
inline void apply(RunConfig& config, const Settings& settings) {
  for (const auto& [key, value] : settings) {
    bool known = false;
    for (const auto& k : detail::key_table()) {
      if (k.key == key) {
        if (value.empty()) throw UsageError(key, "missing value");
        k.set(config, key, value);
        known = true;
        break;
      }
    }
    if (!known) throw UsageError(key, "unknown config key");
  }
}

}  // namespace dualaug
