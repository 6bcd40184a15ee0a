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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "dualaug/classifier.hpp"
#include "dualaug/dataset.hpp"
#include "oracles.hpp"

namespace dualaug {
namespace {

std::vector<float> flatten(const Dataset& ds, std::size_t first, std::size_t count) {
  std::vector<float> out;
  for (std::size_t i = first; i < first + count; ++i)
    out.insert(out.end(), ds.samples[i].features.begin(), ds.samples[i].features.end());
  return out;
}

std::vector<std::uint32_t> labels_of(const Dataset& ds, std::size_t first, std::size_t count) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = first; i < first + count; ++i) out.push_back(ds.samples[i].label);
  return out;
}

TEST(Architecture, DefaultsAndParameterCounts) {
  const Architecture mlp = Architecture::default_for(FeatureMode::vector, {8}, 3);
  EXPECT_EQ(init_params<float>(mlp, 0).parameter_count(), 8u * 64 + 64 + 64 * 64 + 64 + 64 * 3 + 3);
  const Architecture cnn = Architecture::default_for(FeatureMode::image, {16, 16}, 3);
  EXPECT_EQ(init_params<float>(cnn, 0).parameter_count(), 8u * 9 + 8 + 16 * 8 * 9 + 16 + 3 * 16 * 4 * 4 + 3);
  EXPECT_THROW(validate(Architecture{FeatureMode::image, {2, 2}, 3, {8, 16}}), ConfigError);
}

TEST(Forward, ZeroFinalLayerGivesZeroLogits) {
  const Dataset ds = gen_shapes(3, 16, 2, 1);
  const auto params = init_params<float>(Architecture::default_for(ds), 5);
  for (float z : forward(params, flatten(ds, 0, 6), 6)) EXPECT_EQ(z, 0.f);
}

TEST(Forward, BatchRowsAreIndependent) {
  const Dataset ds = gen_gauss(3, 8, 4, 0.2, 1);
  const auto params = testing_oracle::random_params(Architecture::default_for(ds), 3, 0.3);
  const auto batch = forward(params, flatten(ds, 0, 12), 12);
  for (std::size_t i = 0; i < 12; ++i) {
    const auto single = forward(params, flatten(ds, i, 1), 1);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(single[c], batch[i * 3 + c]);
  }
}

TEST(Forward, ReadsParametersOnly) {
  const Dataset ds = gen_shapes(3, 16, 1, 2);
  const auto params = testing_oracle::random_params(Architecture::default_for(ds), 4, 0.3);
  const auto copy = params;
  const auto a = forward(params, flatten(ds, 0, 3), 3);
  EXPECT_EQ(a, forward(params, flatten(ds, 0, 3), 3));
  EXPECT_EQ(params, copy);
}

TEST(Forward, ShapeMismatchNamesBothSizes) {
  const auto params = init_params<float>(Architecture::default_for(FeatureMode::vector, {4}, 2), 0);
  const std::vector<float> batch(7, 0.f);
  try {
    forward(params, batch, 2);
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("8"), std::string::npos);
  }
}

TEST(LossAndGrad, UniformLogitsGiveLogC) {
  const Dataset ds = gen_gauss(10, 4, 3, 0.2, 1);
  const auto params = init_params<float>(Architecture::default_for(ds), 0);
  const auto r = loss_and_grad(params, flatten(ds, 0, 30), labels_of(ds, 0, 30));
  EXPECT_NEAR(r.loss, std::log(10.0), 1e-6);
}

TEST(LossAndGrad, LabelOutOfRange) {
  const auto params = init_params<float>(Architecture::default_for(FeatureMode::vector, {2}, 2), 0);
  const std::vector<float> x{0.f, 0.f};
  const std::vector<std::uint32_t> y{2};
  EXPECT_THROW(loss_and_grad(params, x, y), ParameterError);
}

TEST(LossAndGrad, MlpMatchesFiniteDifferences) {
  const Dataset ds = gen_gauss(3, 5, 2, 0.3, 7);
  const Architecture arch{FeatureMode::vector, {5}, 3, {8}};
  const auto params = testing_oracle::random_params(arch, 11, 0.5);
  const auto check = testing_oracle::gradient_check(params, flatten(ds, 0, 6), labels_of(ds, 0, 6), 1e-5, 1e-3);
  EXPECT_EQ(check.failures, 0u) << check.first_failure << " worst " << check.worst;
  EXPECT_EQ(check.checked, params.parameter_count());
}

TEST(LossAndGrad, CnnMatchesFiniteDifferences) {
  const Dataset ds = gen_shapes(3, 8, 1, 3);
  const Architecture arch{FeatureMode::image, {8, 8}, 3, {2, 3}};
  const auto params = testing_oracle::random_params(arch, 12, 0.5);
  const auto check = testing_oracle::gradient_check(params, flatten(ds, 0, 3), labels_of(ds, 0, 3), 1e-5, 1e-3);
  EXPECT_EQ(check.failures, 0u) << check.first_failure << " worst " << check.worst;
}

TEST(LossAndGrad, GradientIsBatchMean) {
  const Dataset ds = gen_gauss(2, 3, 2, 0.3, 1);
  const auto params = testing_oracle::random_params(Architecture::default_for(ds), 2, 0.4);
  const auto both = loss_and_grad(params, flatten(ds, 0, 4), labels_of(ds, 0, 4));
  double loss = 0.0;
  ModelParams<double> sum = zeros_like<double>(params.arch);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto one = loss_and_grad(params, flatten(ds, i, 1), labels_of(ds, i, 1));
    loss += one.loss / 4;
    for (std::size_t t = 0; t < sum.tensors.size(); ++t)
      for (std::size_t k = 0; k < sum.tensors[t].size(); ++k) sum.tensors[t][k] += one.grads.tensors[t][k] / 4;
  }
  EXPECT_NEAR(both.loss, loss, 1e-12);
  for (std::size_t t = 0; t < sum.tensors.size(); ++t)
    for (std::size_t k = 0; k < sum.tensors[t].size(); ++k)
      ASSERT_NEAR(both.grads.tensors[t][k], sum.tensors[t][k], 1e-12);
}

TEST(SgdStep, ZeroLearningRateLeavesParameters) {
  const Architecture arch = Architecture::default_for(FeatureMode::vector, {3}, 2);
  auto state = TrainState<float>::fresh(arch, 1);
  const auto before = state.params;
  auto grads = testing_oracle::random_params(arch, 2, 1.0);
  ModelParams<float> g = zeros_like<float>(arch);
  for (std::size_t t = 0; t < g.tensors.size(); ++t)
    for (std::size_t i = 0; i < g.tensors[t].size(); ++i) g.tensors[t][i] = static_cast<float>(grads.tensors[t][i]);
  sgd_step(state, g, 0.0, 0.9, 5e-4);
  EXPECT_EQ(state.params, before);
  EXPECT_EQ(state.step, 1u);
}

TEST(SgdStep, VanillaUpdateIsExact) {
  const Architecture arch = Architecture::default_for(FeatureMode::vector, {3}, 2);
  auto state = TrainState<double>::fresh(arch, 1);
  const auto before = state.params;
  const auto grads = testing_oracle::random_params(arch, 2, 1.0);
  sgd_step(state, grads, 0.1, 0.0, 0.0);
  for (std::size_t t = 0; t < grads.tensors.size(); ++t)
    for (std::size_t i = 0; i < grads.tensors[t].size(); ++i)
      ASSERT_EQ(state.params.tensors[t][i], before.tensors[t][i] - 0.1 * grads.tensors[t][i]);
}

TEST(SgdStep, RejectsNegativeLrAndNonFiniteGradients) {
  const Architecture arch = Architecture::default_for(FeatureMode::vector, {3}, 2);
  auto state = TrainState<float>::fresh(arch, 1);
  auto g = zeros_like<float>(arch);
  EXPECT_THROW(sgd_step(state, g, -0.1, 0.0, 0.0), ParameterError);
  g.tensors[0][0] = std::nanf("");
  EXPECT_THROW(sgd_step(state, g, 0.1, 0.0, 0.0), NumericError);
}

TEST(Training, LossDecreasesOnFixedBatch) {
  const Dataset ds = gen_shapes(3, 16, 8, 4);
  const auto x = flatten(ds, 0, ds.size());
  const auto y = labels_of(ds, 0, ds.size());
  auto state = TrainState<float>::fresh(Architecture::default_for(ds), 3);
  double prev = loss_and_grad(state.params, x, y).loss;
  const double first = prev;
  for (int step = 0; step < 50; ++step) {
    const auto r = loss_and_grad(state.params, x, y);
    sgd_step(state, r.grads, 0.01, 0.0, 0.0);
    const double now = loss_and_grad(state.params, x, y).loss;
    EXPECT_LE(now, prev + 1e-6) << "step " << step;
    prev = now;
  }
  EXPECT_LT(prev, first);
}

TEST(Training, SeparableGaussReachesFullTrainAccuracy) {
  const Dataset ds = gen_gauss(2, 4, 50, 0.1, 9);
  const auto x = flatten(ds, 0, ds.size());
  const auto y = labels_of(ds, 0, ds.size());
  auto state = TrainState<float>::fresh(Architecture::default_for(ds), 1);
  for (int step = 0; step < 200; ++step) sgd_step(state, loss_and_grad(state.params, x, y).grads, 0.05, 0.9, 0.0);
  EXPECT_EQ(predict(state.params, x, ds.size()), y);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  for (const Dataset& ds : {gen_gauss(3, 6, 1, 0.1, 0), gen_shapes(4, 12, 1, 0)}) {
    const auto src = testing_oracle::random_params(Architecture::default_for(ds), 8, 0.5);
    ModelParams<float> params = zeros_like<float>(src.arch);
    for (std::size_t t = 0; t < params.tensors.size(); ++t)
      for (std::size_t i = 0; i < params.tensors[t].size(); ++i)
        params.tensors[t][i] = static_cast<float>(src.tensors[t][i]);
    const auto path = std::filesystem::temp_directory_path() / "dualaug_test_model.ckpt";
    save_checkpoint(params, path);
    EXPECT_EQ(load_checkpoint(path), params);
    std::filesystem::remove(path);
  }
}

TEST(Checkpoint, CorruptInputsAreFormatErrors) {
  const auto bytes = encode_checkpoint(init_params<float>(Architecture::default_for(FeatureMode::vector, {3}, 2), 0));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad), FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_checkpoint(truncated), FormatError);
  auto version = bytes;
  version[8] = 7;
  try {
    decode_checkpoint(version);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
}

}  // namespace
}  // namespace dualaug
