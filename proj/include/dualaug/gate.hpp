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

// Out-of-distribution gate between the basic and heavy branches.
//
// Each augmented sample is scored by its maximum softmax probability at
// temperature T. Per batch, the threshold is tau = mean - lambda * stddev of
// the basic-branch scores; a heavy sample is kept iff its score is strictly
// above tau, otherwise the basic version of the same sample replaces it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dualaug/classifier.hpp"
#include "dualaug/error.hpp"

namespace dualaug {

enum class ScorerKind : std::uint8_t { online, offline };

struct GateConfig {
  double temperature = 1000.0;
  double lambda = 1.0;
  double warmup_fraction = 0.2;
  ScorerKind scorer = ScorerKind::online;
  /// Checkpoint of the frozen scorer when `scorer == offline`.
  std::string checkpoint;

  bool operator==(const GateConfig&) const = default;
};

inline void validate(const GateConfig& config) {
  if (!(config.temperature > 0.0) || !std::isfinite(config.temperature))
    throw ConfigError("gate.temperature must be > 0");
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) throw ConfigError("gate.lambda must be >= 0");
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0))
    throw ConfigError("gate.warmup_fraction must be in [0,1)");
  if (config.scorer == ScorerKind::offline && config.checkpoint.empty())
    throw ConfigError("offline scorer needs a checkpoint path");
}

enum class ScoreTag : std::uint8_t { basic, heavy, original };

struct ScoreSet {
  std::vector<double> scores;
  ScoreTag tag = ScoreTag::basic;
};

enum class Origin : std::uint8_t { heavy_kept, basic_fallback };

struct GateDecision {
  std::vector<Origin> origins;
  /// NaN during warm-up.
  double tau = std::numeric_limits<double>::quiet_NaN();
  bool warmup = false;
  double replaced_fraction = 0.0;
};

/// Maximum softmax probability of `logits` at temperature `temperature`,
/// computed with the max-subtracted softmax. The result lies in [1/C, 1].
template <class T>
double msp_score(std::span<const T> logits, double temperature) {
  if (logits.empty()) throw ParameterError("msp_score: empty logits");
  if (!(temperature > 0.0)) throw ParameterError("msp_score: temperature must be > 0");
  double mx = -std::numeric_limits<double>::infinity();
  for (T z : logits) {
    if (!std::isfinite(static_cast<double>(z))) throw NumericError("msp_score: non-finite logit");
    mx = std::max(mx, static_cast<double>(z));
  }
  // The largest term is exp(0) = 1, so the max probability is 1 / sum.
  double sum = 0.0;
  for (T z : logits) sum += std::exp((static_cast<double>(z) - mx) / temperature);
  return 1.0 / sum;
}

/// mean - lambda * population stddev of the scores.
inline double compute_tau(std::span<const double> scores, double lambda) {
  if (scores.empty()) throw ParameterError("compute_tau: empty score set");
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(scores.size());
  return mean - lambda * std::sqrt(var);
}

struct MixResult {
  std::vector<float> features;
  GateDecision decision;
};

/// Per-sample selection: row i comes from `heavy` when heavy_scores[i] > tau,
/// from `basic` otherwise. Rows are copied, never blended.
inline MixResult mix(std::span<const float> basic, std::span<const float> heavy, std::span<const double> heavy_scores,
                     double tau) {
  const std::size_t n = heavy_scores.size();
  if (basic.size() != heavy.size()) throw ShapeError("mix: basic and heavy batches differ in size");
  if (n == 0 || basic.size() % n != 0) throw ShapeError("mix: batch size does not match the number of scores");
  const std::size_t row = basic.size() / n;
  MixResult out;
  out.features.resize(basic.size());
  out.decision.tau = tau;
  out.decision.origins.resize(n);
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool keep = heavy_scores[i] > tau;
    const auto src = (keep ? heavy : basic).subspan(i * row, row);
    std::copy(src.begin(), src.end(), out.features.begin() + static_cast<std::ptrdiff_t>(i * row));
    out.decision.origins[i] = keep ? Origin::heavy_kept : Origin::basic_fallback;
    replaced += keep ? 0 : 1;
  }
  out.decision.replaced_fraction = static_cast<double>(replaced) / static_cast<double>(n);
  return out;
}

/// Number of leading epochs that use the basic branch only:
/// ceil(fraction * total), robust to representation error in the product.
inline std::uint32_t warmup_epochs(double fraction, std::uint32_t total_epochs) {
  const double raw = fraction * static_cast<double>(total_epochs);
  const double nearest = std::round(raw);
  const double epochs = std::abs(raw - nearest) < 1e-9 ? nearest : std::ceil(raw);
  return static_cast<std::uint32_t>(std::min<double>(epochs, total_epochs));
}

/// MSP scores of every row of a batch.
inline ScoreSet score_batch(const ModelParams<float>& model, std::span<const float> batch, std::size_t batch_size,
                            double temperature, ScoreTag tag) {
  const auto logits = forward(model, batch, batch_size);
  const std::size_t c = model.arch.classes;
  ScoreSet set{std::vector<double>(batch_size), tag};
  for (std::size_t i = 0; i < batch_size; ++i)
    set.scores[i] = msp_score(std::span<const float>(logits).subspan(i * c, c), temperature);
  return set;
}

/// Selects the model used for scoring: the parameters being trained
/// (online) or a frozen checkpoint loaded once at construction (offline).
class Scorer {
 public:
  Scorer() = default;

  /// Loads and checks the offline checkpoint up front so that a bad path
  /// fails before training starts.
  static Scorer from_config(const GateConfig& config, const Architecture& expected) {
    Scorer s;
    if (config.scorer == ScorerKind::offline) {
      try {
        s.frozen_ = load_checkpoint(config.checkpoint);
      } catch (const Error& e) {
        throw ConfigError("offline scorer checkpoint '" + config.checkpoint + "' unusable: " + e.what());
      }
      if (s.frozen_->arch != expected)
        throw ConfigError("offline scorer checkpoint '" + config.checkpoint +
                          "' has an architecture incompatible with the dataset");
    }
    return s;
  }

  const ModelParams<float>& model(const ModelParams<float>& online) const { return frozen_ ? *frozen_ : online; }
  bool offline() const noexcept { return frozen_.has_value(); }

 private:
  std::optional<ModelParams<float>> frozen_;
};

struct GateResult {
  std::vector<float> features;
  GateDecision decision;
  ScoreSet basic_scores;
  ScoreSet heavy_scores;
};

/// One gated batch. During warm-up the basic batch is returned unchanged
/// and nothing is scored. Afterwards both batches are scored with the
/// scorer model, tau is computed from this batch's basic scores, and the
/// batches are mixed. The model is only read.
inline GateResult gate_batch(const ModelParams<float>& online, const Scorer& scorer, std::span<const float> basic,
                             std::span<const float> heavy, std::size_t batch_size, const GateConfig& config,
                             std::uint32_t epoch, std::uint32_t total_epochs) {
  if (epoch >= total_epochs) throw ParameterError("gate_batch: epoch out of range");
  if (basic.size() != heavy.size()) throw ShapeError("gate_batch: basic and heavy batches differ in size");
  GateResult out;
  if (epoch < warmup_epochs(config.warmup_fraction, total_epochs)) {
    out.features.assign(basic.begin(), basic.end());
    out.decision.warmup = true;
    out.decision.origins.assign(batch_size, Origin::basic_fallback);
    out.decision.replaced_fraction = 1.0;
    return out;
  }
  const ModelParams<float>& model = scorer.model(online);
  out.basic_scores = score_batch(model, basic, batch_size, config.temperature, ScoreTag::basic);
  out.heavy_scores = score_batch(model, heavy, batch_size, config.temperature, ScoreTag::heavy);
  const double tau = compute_tau(out.basic_scores.scores, config.lambda);
  MixResult mixed = mix(basic, heavy, out.heavy_scores.scores, tau);
  out.features = std::move(mixed.features);
  out.decision = std::move(mixed.decision);
  return out;
}

}  // namespace dualaug
