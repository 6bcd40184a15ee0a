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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dualaug/branches.hpp"
#include "dualaug/classifier.hpp"
#include "dualaug/dataset.hpp"
#include "dualaug/error.hpp"
#include "dualaug/gate.hpp"
#include "dualaug/rng.hpp"
#include "dualaug/transforms.hpp"

namespace dualaug {

/// Ablation variants: which branches feed training and whether the gate
/// is used.
enum class Variant : std::uint8_t {
  dual,             ///< basic + heavy + gate
  basic_only,       ///< basic branch only
  heavy_only,       ///< heavy branch only, no gate
  heavy_plus_gate,  ///< heavy + gate, rejected samples fall back to the original
  random_mix,       ///< basic or heavy per sample by a fair coin, no gate
};

inline constexpr std::array<Variant, 5> kAllVariants = {Variant::basic_only, Variant::heavy_only,
                                                         Variant::heavy_plus_gate, Variant::random_mix, Variant::dual};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::dual: return "dual";
    case Variant::basic_only: return "basic_only";
    case Variant::heavy_only: return "heavy_only";
    case Variant::heavy_plus_gate: return "heavy_plus_gate";
    case Variant::random_mix: return "random_mix";
  }
  return "?";
}

inline Variant variant_from_name(std::string_view name) {
  for (Variant v : kAllVariants)
    if (to_string(v) == name) return v;
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

enum class Schedule : std::uint8_t { constant, cosine };

/// Where the data comes from: a generator ("shapes", "gauss") or a path to
/// a dataset file.
struct DataSpec {
  std::string source = "shapes";
  std::uint32_t classes = 3;
  std::uint32_t size = 16;
  std::uint32_t dim = 8;
  std::uint32_t per_class = 2000;
  double spread = 0.15;
  double test_fraction = 0.2;

  bool operator==(const DataSpec&) const = default;
};

struct RunConfig {
  DataSpec data;
  BranchConfig branch;
  GateConfig gate;
  std::uint32_t epochs = 30;
  std::uint32_t batch_size = 128;
  double lr = 0.05;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  Schedule schedule = Schedule::constant;
  std::uint32_t eval_every = 1;
  std::uint64_t seed = 0;
  Variant variant = Variant::dual;
  /// Output directory for metrics.csv and model.ckpt; empty writes nothing.
  std::string out;

  bool operator==(const RunConfig&) const = default;
};

/// Error raised from inside a run, tagged with where it happened.
class RunError : public Error {
 public:
  RunError(const std::string& what, std::uint32_t epoch, std::uint64_t step)
      : Error("epoch " + std::to_string(epoch) + ", step " + std::to_string(step) + ": " + what),
        epoch_(epoch),
        step_(step) {}
  std::uint32_t epoch() const noexcept { return epoch_; }
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint32_t epoch_;
  std::uint64_t step_;
};

struct Splits {
  Dataset train;
  Dataset test;
};

/// Materializes the data described by `spec`: generate (or load) the full
/// set, then hold out a stratified `test_fraction` with a seeded shuffle.
inline Splits make_splits(const DataSpec& spec, std::uint64_t seed) {
  Dataset full;
  if (spec.source == "shapes")
    full = gen_shapes(spec.classes, spec.size, spec.per_class, seed);
  else if (spec.source == "gauss")
    full = gen_gauss(spec.classes, spec.dim, spec.per_class, spec.spread, seed);
  else
    full = load(spec.source);
  validate(full);
  auto [train, test] = split(full, spec.test_fraction, mix64(seed ^ 0x5EED5917ull));
  if (train.samples.empty() || test.samples.empty()) throw ParameterError("dataset too small to split");
  return {std::move(train), std::move(test)};
}

/// Top-1 accuracy of `params` on `ds`.
inline double evaluate(const ModelParams<float>& params, const Dataset& ds) {
  if (ds.mode != params.arch.mode || ds.shape != params.arch.input)
    throw ShapeError("evaluate: dataset layout does not match the model input");
  if (ds.samples.empty()) throw ParameterError("evaluate: empty dataset");
  constexpr std::size_t kChunk = 256;
  const std::size_t d = ds.feature_size();
  std::size_t correct = 0;
  std::vector<float> batch;
  for (std::size_t start = 0; start < ds.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, ds.size() - start);
    batch.resize(n * d);
    for (std::size_t i = 0; i < n; ++i)
      std::copy(ds.samples[start + i].features.begin(), ds.samples[start + i].features.end(),
                batch.begin() + static_cast<std::ptrdiff_t>(i * d));
    const auto pred = predict(params, batch, n);
    for (std::size_t i = 0; i < n; ++i) correct += pred[i] == ds.samples[start + i].label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

inline double evaluate(const TrainState<float>& state, const Dataset& ds) { return evaluate(state.params, ds); }

struct MetricsRow {
  std::uint32_t epoch = 0;
  std::uint64_t step = 0;
  double train_loss = 0.0;
  bool gated = false;  ///< false: variant without a gate, tau column left empty
  bool warmup = false;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double replaced_fraction = 0.0;
  std::optional<double> mean_basic_score;
  std::optional<double> mean_heavy_score;
  std::optional<double> test_accuracy;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace detail

inline constexpr std::string_view kMetricsHeader =
    "epoch,step,train_loss,tau,replaced_fraction,mean_basic_score,mean_heavy_score,test_accuracy";

inline std::string to_csv(const MetricsRow& r) {
  std::string tau;
  if (r.warmup)
    tau = "warmup";
  else if (r.gated)
    tau = detail::format_number(r.tau);
  std::ostringstream os;
  os << r.epoch << ',' << r.step << ',' << detail::format_number(r.train_loss) << ',' << tau << ','
     << detail::format_number(r.replaced_fraction) << ',' << detail::format_optional(r.mean_basic_score) << ','
     << detail::format_optional(r.mean_heavy_score) << ',' << detail::format_optional(r.test_accuracy);
  return os.str();
}

/// Append-only metrics CSV; every row is flushed as soon as it is written,
/// so a crash at step k leaves k complete rows.
class MetricsWriter {
 public:
  MetricsWriter() = default;
  explicit MetricsWriter(const std::filesystem::path& path) : out_(path, std::ios::trunc) {
    if (!out_) throw Error("cannot open metrics file " + path.string());
    out_ << kMetricsHeader << '\n' << std::flush;
  }
  void write(const MetricsRow& row) {
    if (out_.is_open()) out_ << to_csv(row) << '\n' << std::flush;
  }

 private:
  std::ofstream out_;
};

struct TrainResult {
  TrainState<float> state;
  double final_accuracy = 0.0;
  std::vector<MetricsRow> rows;
};

inline void validate(const RunConfig& config, FeatureMode mode) {
  if (config.epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (config.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(config.lr > 0.0)) throw ConfigError("train.lr must be > 0");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) throw ConfigError("train.momentum must be in [0,1)");
  if (!(config.weight_decay >= 0.0)) throw ConfigError("train.weight_decay must be >= 0");
  if (config.eval_every < 1) throw ConfigError("train.eval_every must be >= 1");
  validate(config.branch, mode);
  validate(config.gate);
}

namespace detail {

inline std::vector<std::uint32_t> shuffled_indices(std::size_t n, std::uint64_t seed, std::uint32_t epoch) {
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  RngStream rng = RngStream(seed, epoch, 0, 0).substream(Lane::shuffle);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.uniform_int(static_cast<std::uint32_t>(i))]);
  return idx;
}

inline double learning_rate(const RunConfig& config, std::uint64_t step, std::uint64_t total_steps) {
  if (config.schedule == Schedule::constant || total_steps == 0) return config.lr;
  return 0.5 * config.lr *
         (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / static_cast<double>(total_steps)));
}

}  // namespace detail

/// Runs one training job on pre-built splits.
///
/// Per epoch: seeded shuffle; per batch: draw a BranchPair per sample on the
/// (seed, epoch, batch, sample) stream, augment, build the training batch
/// according to the variant, take one SGD step and log a metrics row. The
/// test split is evaluated every `eval_every` epochs and after the last one.
inline TrainResult train(const RunConfig& config, const Splits& data) {
  const Dataset& train_set = data.train;
  const FeatureLayout layout = FeatureLayout::of(train_set);
  validate(config, layout.mode);
  const Architecture arch = Architecture::default_for(train_set);
  const Scorer scorer = Scorer::from_config(config.gate, arch);

  std::filesystem::path out_dir;
  MetricsWriter metrics;
  if (!config.out.empty()) {
    out_dir = config.out;
    std::filesystem::create_directories(out_dir);
    metrics = MetricsWriter(out_dir / "metrics.csv");
  }

  TrainResult result;
  result.state = TrainState<float>::fresh(arch, config.seed);
  TrainState<float>& state = result.state;

  const std::size_t n = train_set.size();
  const std::size_t d = layout.size();
  const std::size_t batches_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const std::uint64_t total_steps = batches_per_epoch * config.epochs;
  const bool uses_heavy = config.variant != Variant::basic_only;

  std::uint32_t epoch = 0;
  try {
    for (epoch = 0; epoch < config.epochs; ++epoch) {
      state.epoch = epoch;
      const auto order = detail::shuffled_indices(n, config.seed, epoch);
      for (std::size_t b = 0; b < batches_per_epoch; ++b) {
        const std::size_t start = b * config.batch_size;
        const std::size_t bs = std::min<std::size_t>(config.batch_size, n - start);
        std::vector<float> original(bs * d), basic(bs * d), heavy(uses_heavy ? bs * d : 0);
        std::vector<std::uint32_t> labels(bs);
        std::vector<bool> coin(bs, false);
        for (std::size_t i = 0; i < bs; ++i) {
          const Sample& s = train_set.samples[order[start + i]];
          labels[i] = s.label;
          const auto row = static_cast<std::ptrdiff_t>(i * d);
          std::copy(s.features.begin(), s.features.end(), original.begin() + row);
          const RngStream stream(config.seed, epoch, static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(i));
          if (uses_heavy) {
            const BranchPair pair = draw_branches(config.branch, layout.mode, stream);
            AugmentedPair aug = augment(s.features, layout, pair, stream);
            std::copy(aug.basic.begin(), aug.basic.end(), basic.begin() + row);
            std::copy(aug.heavy.begin(), aug.heavy.end(), heavy.begin() + row);
          } else {
            RngStream basic_rng = stream.substream(Lane::basic_draw);
            const BranchPair pair{draw_basic(config.branch, layout.mode, basic_rng), {}, 0};
            const auto x = augment_basic(s.features, layout, pair, stream);
            std::copy(x.begin(), x.end(), basic.begin() + row);
          }
          if (config.variant == Variant::random_mix) coin[i] = stream.substream(Lane::mix_coin).bernoulli(0.5);
        }

        MetricsRow row;
        row.epoch = epoch;
        std::vector<float> batch;
        switch (config.variant) {
          case Variant::basic_only:
            batch = std::move(basic);
            break;
          case Variant::heavy_only:
            batch = std::move(heavy);
            break;
          case Variant::random_mix: {
            batch = basic;
            std::size_t from_basic = 0;
            for (std::size_t i = 0; i < bs; ++i) {
              if (coin[i])
                std::copy_n(heavy.begin() + static_cast<std::ptrdiff_t>(i * d), d,
                            batch.begin() + static_cast<std::ptrdiff_t>(i * d));
              else
                ++from_basic;
            }
            row.replaced_fraction = static_cast<double>(from_basic) / static_cast<double>(bs);
            break;
          }
          case Variant::dual:
          case Variant::heavy_plus_gate: {
            const std::vector<float>& fallback = config.variant == Variant::dual ? basic : original;
            GateResult gated =
                gate_batch(state.params, scorer, fallback, heavy, bs, config.gate, epoch, config.epochs);
            batch = std::move(gated.features);
            row.gated = true;
            row.warmup = gated.decision.warmup;
            row.tau = gated.decision.tau;
            row.replaced_fraction = gated.decision.replaced_fraction;
            if (!gated.decision.warmup) {
              row.mean_basic_score = detail::mean_of(gated.basic_scores.scores);
              row.mean_heavy_score = detail::mean_of(gated.heavy_scores.scores);
            }
            break;
          }
        }

        const auto lg = loss_and_grad(state.params, batch, labels);
        sgd_step(state, lg.grads, detail::learning_rate(config, state.step, total_steps), config.momentum,
                 config.weight_decay);
        row.step = state.step;
        row.train_loss = lg.loss;
        const bool last_batch = b + 1 == batches_per_epoch;
        if (last_batch && ((epoch + 1) % config.eval_every == 0 || epoch + 1 == config.epochs)) {
          result.final_accuracy = evaluate(state, data.test);
          row.test_accuracy = result.final_accuracy;
        }
        metrics.write(row);
        result.rows.push_back(std::move(row));
      }
    }
    state.epoch = config.epochs;
  } catch (const RunError&) {
    throw;
  } catch (const Error& e) {
    throw RunError(e.what(), epoch, state.step);
  }
  if (!out_dir.empty()) save_checkpoint(state.params, out_dir / "model.ckpt");
  return result;
}

inline TrainResult train(const RunConfig& config) { return train(config, make_splits(config.data, config.seed)); }

// ---------------------------------------------------------------------------
// Sweeps and ablations

enum class SweepAxis : std::uint8_t { lambda, m_upper, warmup_fraction, heavy_mode };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::lambda: return "lambda";
    case SweepAxis::m_upper: return "m_upper";
    case SweepAxis::warmup_fraction: return "warmup_fraction";
    case SweepAxis::heavy_mode: return "heavy_mode";
  }
  return "?";
}

inline SweepAxis sweep_axis_from_name(std::string_view name) {
  for (SweepAxis a : {SweepAxis::lambda, SweepAxis::m_upper, SweepAxis::warmup_fraction, SweepAxis::heavy_mode})
    if (to_string(a) == name) return a;
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

/// Returns `base` with the swept field set from its textual value.
inline RunConfig apply_axis(RunConfig base, SweepAxis axis, const std::string& value) {
  try {
    std::size_t used = 0;
    switch (axis) {
      case SweepAxis::lambda:
        base.gate.lambda = std::stod(value, &used);
        break;
      case SweepAxis::m_upper: {
        const long long v = std::stoll(value, &used);
        if (v < 1 || v > 1'000'000) throw ConfigError("m_upper out of range: " + value);
        base.branch.m_upper = static_cast<std::uint32_t>(v);
        break;
      }
      case SweepAxis::warmup_fraction:
        base.gate.warmup_fraction = std::stod(value, &used);
        break;
      case SweepAxis::heavy_mode:
        base.branch.heavy_mode = heavy_mode_from_name(value);
        used = value.size();
        break;
    }
    if (used != value.size()) throw ConfigError("trailing characters in sweep value '" + value + "'");
  } catch (const std::logic_error&) {
    throw ConfigError("invalid value '" + value + "' for sweep axis " + std::string(to_string(axis)));
  }
  return base;
}

struct SweepRow {
  std::string value;
  double final_accuracy = 0.0;
};

/// One training run per value with shared seeds. With an output directory,
/// run i writes to <out>/<axis>=<value>/ and the final accuracies go to
/// <out>/summary.csv.
inline std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis, const std::vector<std::string>& values) {
  std::vector<RunConfig> runs;
  for (const std::string& v : values) {
    RunConfig cfg = apply_axis(base, axis, v);
    if (!base.out.empty())
      cfg.out = (std::filesystem::path(base.out) / (std::string(to_string(axis)) + "=" + v)).string();
    runs.push_back(std::move(cfg));
  }
  std::vector<SweepRow> rows;
  std::optional<Splits> data;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!data) data = make_splits(base.data, base.seed);
    rows.push_back({values[i], train(runs[i], *data).final_accuracy});
  }
  if (!base.out.empty()) {
    std::filesystem::create_directories(base.out);
    std::ofstream out(std::filesystem::path(base.out) / "summary.csv", std::ios::trunc);
    out << to_string(axis) << ",final_accuracy\n";
    for (const SweepRow& r : rows) out << r.value << ',' << detail::format_number(r.final_accuracy) << '\n';
  }
  return rows;
}

struct AblationRow {
  Variant variant = Variant::dual;
  double final_accuracy = 0.0;
  /// Mean replaced fraction over post-warm-up gated steps; 0 without a gate.
  double mean_replaced_fraction = 0.0;
};

/// Runs all five variants with the same seed and data. With an output
/// directory each variant writes to <out>/<variant>/ and the table goes to
/// <out>/ablation.csv.
inline std::vector<AblationRow> ablate(const RunConfig& base) {
  const Splits data = make_splits(base.data, base.seed);
  std::vector<AblationRow> rows;
  for (Variant v : kAllVariants) {
    RunConfig cfg = base;
    cfg.variant = v;
    if (!base.out.empty()) cfg.out = (std::filesystem::path(base.out) / std::string(to_string(v))).string();
    const TrainResult r = train(cfg, data);
    double replaced = 0.0;
    std::size_t counted = 0;
    for (const MetricsRow& m : r.rows) {
      if (m.gated && !m.warmup) {
        replaced += m.replaced_fraction;
        ++counted;
      }
    }
    rows.push_back({v, r.final_accuracy, counted ? replaced / static_cast<double>(counted) : 0.0});
  }
  if (!base.out.empty()) {
    std::ofstream out(std::filesystem::path(base.out) / "ablation.csv", std::ios::trunc);
    out << "variant,final_accuracy,mean_replaced_fraction\n";
    for (const AblationRow& r : rows)
      out << to_string(r.variant) << ',' << detail::format_number(r.final_accuracy) << ','
          << detail::format_number(r.mean_replaced_fraction) << '\n';
  }
  return rows;
}

/// Fixed-width comparison table of ablation results.
inline std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::string out = "variant           accuracy   replaced\n";
  char line[96];
  for (const AblationRow& r : rows) {
    std::snprintf(line, sizeof line, "%-16s  %8.4f   %8.4f\n", std::string(to_string(r.variant)).c_str(),
                  r.final_accuracy, r.mean_replaced_fraction);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Score distributions

inline constexpr std::size_t kScoreBins = 50;

struct ScoreDistribution {
  std::size_t sample_count = 0;
  std::array<std::size_t, kScoreBins> no_aug{};
  std::array<std::size_t, kScoreBins> basic{};
  std::array<std::size_t, kScoreBins> heavy{};
  std::array<std::size_t, kScoreBins> dual{};
  /// Mean of the per-batch thresholds.
  double tau_mean = 0.0;
  /// Dual samples kept from the heavy branch whose heavy score is not above
  /// their batch threshold. Zero for a correct gate.
  std::size_t audit_violations = 0;
  std::size_t heavy_kept = 0;
};

inline std::size_t score_bin(double s) {
  const auto bin = static_cast<std::size_t>(std::floor(s * static_cast<double>(kScoreBins)));
  return std::min(bin, kScoreBins - 1);
}

/// Scores the whole dataset (in stored order, batches of `batch_size`)
/// without augmentation and through the basic, heavy and gated branches,
/// and histograms the scores into 50 uniform bins on [0,1]. The dual column
/// holds the score of whichever version the gate selected.
inline ScoreDistribution score_dist(const ModelParams<float>& params, const Dataset& ds, const BranchConfig& branch,
                                    const GateConfig& gate, std::uint64_t seed, std::uint32_t epoch,
                                    std::size_t batch_size) {
  const FeatureLayout layout = FeatureLayout::of(ds);
  validate(branch, layout.mode);
  if (!(gate.temperature > 0.0)) throw ConfigError("gate.temperature must be > 0");
  if (batch_size == 0) throw ParameterError("score_dist: batch_size must be >= 1");
  if (ds.mode != params.arch.mode || ds.shape != params.arch.input)
    throw ShapeError("score_dist: dataset layout does not match the model input");

  ScoreDistribution dist;
  dist.sample_count = ds.size();
  const std::size_t d = layout.size();
  std::size_t batches = 0;
  for (std::size_t start = 0; start < ds.size(); start += batch_size, ++batches) {
    const std::size_t bs = std::min(batch_size, ds.size() - start);
    std::vector<float> original(bs * d), basic(bs * d), heavy(bs * d);
    for (std::size_t i = 0; i < bs; ++i) {
      const Sample& s = ds.samples[start + i];
      const auto row = static_cast<std::ptrdiff_t>(i * d);
      std::copy(s.features.begin(), s.features.end(), original.begin() + row);
      const RngStream stream(seed, epoch, static_cast<std::uint32_t>(batches), static_cast<std::uint32_t>(i));
      const BranchPair pair = draw_branches(branch, layout.mode, stream);
      const AugmentedPair aug = augment(s.features, layout, pair, stream);
      std::copy(aug.basic.begin(), aug.basic.end(), basic.begin() + row);
      std::copy(aug.heavy.begin(), aug.heavy.end(), heavy.begin() + row);
    }
    const ScoreSet s_orig = score_batch(params, original, bs, gate.temperature, ScoreTag::original);
    const ScoreSet s_basic = score_batch(params, basic, bs, gate.temperature, ScoreTag::basic);
    const ScoreSet s_heavy = score_batch(params, heavy, bs, gate.temperature, ScoreTag::heavy);
    const double tau = compute_tau(s_basic.scores, gate.lambda);
    const MixResult mixed = mix(basic, heavy, s_heavy.scores, tau);
    dist.tau_mean += tau;
    for (std::size_t i = 0; i < bs; ++i) {
      ++dist.no_aug[score_bin(s_orig.scores[i])];
      ++dist.basic[score_bin(s_basic.scores[i])];
      ++dist.heavy[score_bin(s_heavy.scores[i])];
      const bool kept = mixed.decision.origins[i] == Origin::heavy_kept;
      ++dist.dual[score_bin(kept ? s_heavy.scores[i] : s_basic.scores[i])];
      if (kept) {
        ++dist.heavy_kept;
        if (!(s_heavy.scores[i] > tau)) ++dist.audit_violations;
      }
    }
  }
  if (batches > 0) dist.tau_mean /= static_cast<double>(batches);
  return dist;
}

/// CSV with a leading "# tau_mean=<value>" comment line, a header, and one
/// row per bin.
inline std::string to_csv(const ScoreDistribution& dist) {
  std::ostringstream os;
  os << "# tau_mean=" << detail::format_number(dist.tau_mean) << '\n';
  os << "bin_left,bin_right,count_noaug,count_basic,count_heavy,count_dual\n";
  for (std::size_t b = 0; b < kScoreBins; ++b) {
    os << detail::format_number(static_cast<double>(b) / kScoreBins) << ','
       << detail::format_number(static_cast<double>(b + 1) / kScoreBins) << ',' << dist.no_aug[b] << ','
       << dist.basic[b] << ',' << dist.heavy[b] << ',' << dist.dual[b] << '\n';
  }
  return os.str();
}

}  // namespace dualaug
