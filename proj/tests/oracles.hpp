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

// Independent reference computations shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dualaug/classifier.hpp"
#include "dualaug/rng.hpp"

namespace dualaug::testing_oracle {

/// Textbook softmax maximum in long double, no max subtraction; logits are
/// kept small enough by the callers that exp does not overflow.
inline long double msp(std::span<const double> logits, long double temperature) {
  long double denom = 0.0L;
  long double best = 0.0L;
  for (double z : logits) {
    const long double e = std::exp(static_cast<long double>(z) / temperature);
    denom += e;
    best = std::max(best, e);
  }
  return best / denom;
}

/// mean - lambda * sqrt(sum (x - mean)^2 / n), two-pass in long double.
inline long double tau(std::span<const double> scores, long double lambda) {
  long double mean = 0.0L;
  for (double s : scores) mean += s;
  mean /= static_cast<long double>(scores.size());
  long double ss = 0.0L;
  for (double s : scores) ss += (s - mean) * (s - mean);
  return mean - lambda * std::sqrt(ss / static_cast<long double>(scores.size()));
}

/// Standard normal CDF.
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Fills every tensor, including the zero-initialised final layer, with
/// N(0, scale^2) values.
inline ModelParams<double> random_params(const Architecture& arch, std::uint64_t seed, double scale) {
  ModelParams<double> p = zeros_like<double>(arch);
  RngStream rng(seed, 0, 0, 0);
  for (auto& t : p.tensors)
    for (double& v : t) v = scale * rng.normal();
  return p;
}

struct GradCheck {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::string first_failure;
};

/// Compares every analytic gradient entry with a central difference of the
/// loss. An entry passes when |a - n| <= rel * max(|a|, |n|) or when both
/// are below `floor` in magnitude.
inline GradCheck gradient_check(const ModelParams<double>& params, std::span<const float> batch,
                                std::span<const std::uint32_t> labels, double eps, double rel, double floor = 1e-8) {
  const auto analytic = loss_and_grad<double>(params, batch, labels).grads;
  ModelParams<double> probe = params;
  GradCheck out;
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    for (std::size_t i = 0; i < params.tensors[t].size(); ++i) {
      const double orig = probe.tensors[t][i];
      probe.tensors[t][i] = orig + eps;
      const double up = loss_and_grad<double>(probe, batch, labels).loss;
      probe.tensors[t][i] = orig - eps;
      const double down = loss_and_grad<double>(probe, batch, labels).loss;
      probe.tensors[t][i] = orig;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic.tensors[t][i];
      const double diff = std::abs(a - numeric);
      const double scale = std::max(std::abs(a), std::abs(numeric));
      ++out.checked;
      if (scale < floor) continue;
      const double r = diff / scale;
      out.worst = std::max(out.worst, r);
      if (r > rel) {
        if (out.failures == 0)
          out.first_failure = "tensor " + std::to_string(t) + " index " + std::to_string(i) +
                              " analytic " + std::to_string(a) + " numeric " + std::to_string(numeric);
        ++out.failures;
      }
    }
  }
  return out;
}

}  // namespace dualaug::testing_oracle
