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

// Test-only oracle: nearest class-mean classifier, evaluated by brute force.

#pragma once

#include <limits>
#include <vector>

#include "dualaug/dataset.hpp"

namespace dualaug::testing_oracle {

inline std::vector<std::vector<double>> class_means(const Dataset& ds) {
  std::vector<std::vector<double>> means(ds.class_count, std::vector<double>(ds.feature_size(), 0.0));
  std::vector<double> counts(ds.class_count, 0.0);
  for (const Sample& s : ds.samples) {
    for (std::size_t j = 0; j < s.features.size(); ++j) means[s.label][j] += s.features[j];
    counts[s.label] += 1.0;
  }
  for (std::size_t c = 0; c < means.size(); ++c)
    for (double& v : means[c]) v /= counts[c];
  return means;
}

/// Accuracy on `eval` of the nearest class-mean rule fitted on `fit`.
inline double nearest_center_accuracy(const Dataset& fit, const Dataset& eval) {
  const auto means = class_means(fit);
  std::size_t correct = 0;
  for (const Sample& s : eval.samples) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < means.size(); ++c) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < s.features.size(); ++j) d2 += (s.features[j] - means[c][j]) * (s.features[j] - means[c][j]);
      if (d2 < best) {
        best = d2;
        arg = c;
      }
    }
    correct += arg == s.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(eval.size());
}

}  // namespace dualaug::testing_oracle
