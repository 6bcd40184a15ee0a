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

#include <map>
#include <vector>

#include "dualaug/branches.hpp"
#include "dualaug/dataset.hpp"

namespace dualaug {
namespace {

constexpr FeatureMode kImg = FeatureMode::image;

TEST(DrawBasic, ZeroOpsIsEmpty) {
  BranchConfig cfg;
  cfg.basic_ops_per_sample = 0;
  RngStream rng(1, 0, 0, 0);
  EXPECT_TRUE(draw_basic(cfg, kImg, rng).stages.empty());
}

TEST(DrawBasic, DeterministicAndWithinWindow) {
  BranchConfig cfg;
  RngStream a(5, 1, 2, 3), b(5, 1, 2, 3);
  const Pipeline p = draw_basic(cfg, kImg, a);
  EXPECT_EQ(p, draw_basic(cfg, kImg, b));
  ASSERT_EQ(p.stages.size(), 2u);
  for (const TransformSpec& s : p.stages) {
    EXPECT_EQ(s.probability, 1.0);
    EXPECT_GE(s.magnitude, 0.2);
    EXPECT_LT(s.magnitude, 0.5);
  }
}

// Monte-Carlo uniformity over a 10-operator pool: each stage picks each
// operator with frequency 0.1 +- 0.01.
TEST(DrawBasic, OperatorFrequenciesAreUniform) {
  BranchConfig cfg;
  ASSERT_EQ(basic_pool(cfg, kImg).size(), 10u);
  constexpr int draws = 10000;
  std::vector<std::map<Op, int>> counts(cfg.basic_ops_per_sample);
  for (std::uint32_t k = 0; k < draws; ++k) {
    RngStream rng(2024, 0, 0, k);
    const Pipeline p = draw_basic(cfg, kImg, rng);
    for (std::size_t s = 0; s < p.stages.size(); ++s) ++counts[s][p.stages[s].op];
  }
  for (const auto& stage : counts) {
    EXPECT_EQ(stage.size(), 10u);
    for (const auto& [op, n] : stage) EXPECT_NEAR(n / double(draws), 0.1, 0.01) << to_string(op);
  }
}

TEST(DrawHeavy, SingleExtraStageWhenUpperIsOne) {
  BranchConfig cfg;
  cfg.m_upper = 1;
  RngStream b(1, 0, 0, 0), h(2, 0, 0, 0);
  const Pipeline basic = draw_basic(cfg, kImg, b);
  const BranchPair pair = draw_heavy(basic, cfg, kImg, h);
  EXPECT_EQ(pair.m_drawn, 1u);
  EXPECT_EQ(pair.heavy.stages.size(), basic.stages.size() + 1);
}

TEST(DrawHeavy, UnitBoostReproducesBasic) {
  BranchConfig cfg;
  cfg.heavy_mode = HeavyMode::bigger_magnitude;
  cfg.magnitude_boost = 1.0;
  RngStream b(1, 0, 0, 0), h(2, 0, 0, 0);
  const Pipeline basic = draw_basic(cfg, kImg, b);
  const BranchPair pair = draw_heavy(basic, cfg, kImg, h);
  EXPECT_EQ(pair.heavy, basic);
  EXPECT_EQ(pair.m_drawn, 0u);
}

TEST(DrawHeavy, BoostScalesAndClampsMagnitudes) {
  BranchConfig cfg;
  cfg.heavy_mode = HeavyMode::bigger_magnitude;
  cfg.magnitude_boost = 3.0;
  const Pipeline basic{{{Op::rotate, 1.0, 0.2}, {Op::zoom, 1.0, 0.45}}};
  RngStream h(2, 0, 0, 0);
  const BranchPair pair = draw_heavy(basic, cfg, kImg, h);
  EXPECT_DOUBLE_EQ(pair.heavy.stages[0].magnitude, 0.6000000000000001);
  EXPECT_DOUBLE_EQ(pair.heavy.stages[1].magnitude, 1.0);
}

TEST(DrawHeavy, MoreTypesDrawsFromExtraPool) {
  BranchConfig cfg;
  cfg.heavy_mode = HeavyMode::more_types;
  for (std::uint32_t k = 0; k < 100; ++k) {
    const BranchPair pair = draw_branches(cfg, kImg, RngStream(3, 0, 0, k));
    for (std::uint32_t i = 0; i < pair.m_drawn; ++i) EXPECT_EQ(pair.heavy.stages[i].op, Op::gauss_noise);
  }
  cfg.extra_type_pool = std::vector<Op>{};
  RngStream rng(1, 0, 0, 0);
  EXPECT_THROW(draw_heavy(Pipeline{}, cfg, kImg, rng), ConfigError);
  EXPECT_THROW(validate(cfg, kImg), ConfigError);
}

// Uniform-integer oracle: E[M] = (m_upper + 1) / 2 and a chi-square
// goodness-of-fit test on the histogram.
TEST(DrawHeavy, ExtraCountIsUniform) {
  BranchConfig cfg;
  constexpr int draws = 100000;
  std::vector<int> hist(cfg.m_upper + 1, 0);
  double sum = 0.0;
  for (std::uint32_t k = 0; k < draws; ++k) {
    const BranchPair pair = draw_branches(cfg, kImg, RngStream(77, 0, k / 1000, k % 1000));
    ASSERT_GE(pair.m_drawn, 1u);
    ASSERT_LE(pair.m_drawn, cfg.m_upper);
    ++hist[pair.m_drawn];
    sum += pair.m_drawn;
  }
  EXPECT_NEAR(sum / draws, 5.5, 0.05);
  const double expected = draws / 10.0;
  double chi2 = 0.0;
  for (std::uint32_t m = 1; m <= cfg.m_upper; ++m) chi2 += (hist[m] - expected) * (hist[m] - expected) / expected;
  // 99th percentile of chi-square with 9 degrees of freedom.
  EXPECT_LT(chi2, 21.666);
}

// Stripping the first m_drawn stages of the heavy pipeline recovers the
// basic pipeline exactly.
TEST(DrawHeavy, DecompositionIsRecoverable) {
  for (HeavyMode mode : {HeavyMode::extra_number, HeavyMode::more_types}) {
    BranchConfig cfg;
    cfg.heavy_mode = mode;
    for (std::uint32_t k = 0; k < 500; ++k) {
      const BranchPair pair = draw_branches(cfg, kImg, RngStream(5, 1, 0, k));
      const Pipeline tail{{pair.heavy.stages.begin() + pair.m_drawn, pair.heavy.stages.end()}};
      ASSERT_EQ(tail, pair.basic);
    }
  }
}

TEST(Augment, BasicDrawIndependentOfHeavyConfig) {
  BranchConfig a, b;
  b.m_upper = 3;
  b.heavy_mode = HeavyMode::more_types;
  for (std::uint32_t k = 0; k < 50; ++k) {
    const RngStream s(8, 0, 0, k);
    EXPECT_EQ(draw_branches(a, kImg, s).basic, draw_branches(b, kImg, s).basic);
  }
}

TEST(Augment, UnitBoostHeavyEqualsBasic) {
  BranchConfig cfg;
  cfg.heavy_mode = HeavyMode::bigger_magnitude;
  cfg.magnitude_boost = 1.0;
  const FeatureLayout layout{kImg, {16, 16}};
  const Dataset ds = gen_shapes(3, 16, 10, 1);
  for (std::uint32_t k = 0; k < ds.size(); ++k) {
    const RngStream s(4, 2, 1, k);
    const AugmentedPair out = augment(ds.samples[k].features, layout, draw_branches(cfg, kImg, s), s);
    ASSERT_EQ(out.basic, out.heavy);
  }
}

// The heavy image is the basic pipeline (with the basic branch's draws)
// applied on top of the extra stages.
TEST(Augment, HeavyComposesExtrasThenBasic) {
  BranchConfig cfg;
  const FeatureLayout layout{kImg, {16, 16}};
  const auto x = gen_shapes(3, 16, 1, 2).samples[1].features;
  const RngStream s(4, 2, 1, 0);
  const BranchPair pair = draw_branches(cfg, kImg, s);
  const AugmentedPair out = augment(x, layout, pair, s);

  const Pipeline extras{{pair.heavy.stages.begin(), pair.heavy.stages.begin() + pair.m_drawn}};
  RngStream extra_rng = s.substream(Lane::extra_apply);
  const auto after_extras = apply_pipeline(x, layout, extras, extra_rng);
  RngStream basic_rng = s.substream(Lane::basic_apply);
  EXPECT_EQ(out.heavy, apply_pipeline(after_extras, layout, pair.basic, basic_rng));
  EXPECT_EQ(out.basic, augment_basic(x, layout, pair, s));
}

TEST(BranchConfig, Validation) {
  BranchConfig cfg;
  EXPECT_NO_THROW(validate(cfg, kImg));
  cfg.m_upper = 0;
  EXPECT_THROW(validate(cfg, kImg), ConfigError);
  cfg = {};
  cfg.magnitude_boost = 0.9;
  EXPECT_THROW(validate(cfg, kImg), ConfigError);
  cfg = {};
  cfg.basic_pool = std::vector<Op>{Op::jitter};
  EXPECT_THROW(validate(cfg, kImg), ConfigError);
  EXPECT_EQ(heavy_mode_from_name("bigger_magnitude"), HeavyMode::bigger_magnitude);
  EXPECT_THROW(heavy_mode_from_name("huge"), ConfigError);
}

}  // namespace
}  // namespace dualaug
