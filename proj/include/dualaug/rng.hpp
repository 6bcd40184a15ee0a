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

// Counter-based random streams. Every draw is a pure function of
// (root seed, lane, epoch, batch, sample, draw index), so any sample of
// any batch can be augmented independently and reproducibly.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dualaug {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// SplitMix64 finalizer, used to fold lane tags into a key.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Named sub-stream tags. Distinct purposes never share draws.
enum class Lane : std::uint32_t {
  root = 0,
  basic_draw = 1,
  heavy_draw = 2,
  basic_apply = 3,
  extra_apply = 4,
  mix_coin = 5,
  shuffle = 6,
  init = 7,
  data_centers = 8,
  data_samples = 9,
  data_split = 10,
};

/// A reproducible stream of random draws addressed by coordinates.
///
/// Two streams with equal (root_seed, lane path, epoch, batch, sample) yield
/// identical sequences. `substream` derives an independent child stream at
/// the same coordinates.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t root_seed, std::uint32_t epoch, std::uint32_t batch, std::uint32_t sample)
      : root_seed_(root_seed), lane_key_(mix64(root_seed)), epoch_(epoch), batch_(batch), sample_(sample) {}

  RngStream substream(std::uint64_t tag) const {
    RngStream child = *this;
    child.lane_key_ = mix64(lane_key_ ^ mix64(tag + 0x632BE59BD9B4E019ull));
    child.draws_ = 0;
    return child;
  }
  RngStream substream(Lane lane) const { return substream(static_cast<std::uint64_t>(lane)); }

  std::uint32_t next_u32() {
    const std::uint64_t block = draws_ >> 2;
    const unsigned slot = static_cast<unsigned>(draws_ & 3u);
    if (slot == 0 || block != cached_block_) {
      cache_ = Philox4x32::generate({epoch_, batch_, sample_, static_cast<std::uint32_t>(block)},
                                    {static_cast<std::uint32_t>(lane_key_), static_cast<std::uint32_t>(lane_key_ >> 32)});
      cached_block_ = block;
    }
    ++draws_;
    return cache_[slot];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n), n > 0 (Lemire's multiply-shift with rejection).
  std::uint32_t uniform_int(std::uint32_t n) {
    std::uint64_t m = std::uint64_t{next_u32()} * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
      while (low < threshold) {
        m = std::uint64_t{next_u32()} * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// +1 or -1 with equal probability.
  double sign() { return (next_u32() & 1u) ? 1.0 : -1.0; }

  /// Standard normal via Box-Muller; consumes four u32 draws.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t root_seed() const noexcept { return root_seed_; }
  std::uint32_t epoch() const noexcept { return epoch_; }
  std::uint32_t batch() const noexcept { return batch_; }
  std::uint32_t sample() const noexcept { return sample_; }
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::uint64_t root_seed_ = 0;
  std::uint64_t lane_key_ = mix64(0);
  std::uint32_t epoch_ = 0;
  std::uint32_t batch_ = 0;
  std::uint32_t sample_ = 0;
  std::uint64_t draws_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  Philox4x32::Counter cache_{};
};

}  // namespace dualaug
