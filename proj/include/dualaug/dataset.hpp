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
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "dualaug/error.hpp"
#include "dualaug/rng.hpp"

namespace dualaug {

enum class FeatureMode : std::uint8_t { vector = 0, image = 1 };

inline const char* to_string(FeatureMode mode) { return mode == FeatureMode::vector ? "vector" : "image"; }

/// Feature shape: [d] in vector mode, [h, w] in image mode.
using Shape = std::vector<std::uint32_t>;

inline std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, std::uint32_t b) { return a * b; });
}

struct Sample {
  std::vector<float> features;
  std::uint32_t label = 0;

  bool operator==(const Sample&) const = default;
};

/// An immutable, ordered collection of labeled samples sharing one shape.
struct Dataset {
  FeatureMode mode = FeatureMode::vector;
  std::uint32_t class_count = 0;
  Shape shape;
  std::vector<Sample> samples;
  /// Seed the samples were generated from. Not part of the file format.
  std::uint64_t split_seed = 0;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t feature_size() const { return element_count(shape); }

  /// Content equality; `split_seed` is provenance and is ignored.
  bool operator==(const Dataset& other) const {
    return mode == other.mode && class_count == other.class_count && shape == other.shape &&
           samples == other.samples;
  }
};

/// Checks the type invariants (shape, label range, image value range,
/// nonempty classes). Throws ParameterError.
inline void validate(const Dataset& ds) {
  const bool shape_ok = ds.mode == FeatureMode::vector ? ds.shape.size() == 1 : ds.shape.size() == 2;
  if (!shape_ok || ds.feature_size() == 0) throw ParameterError("dataset shape does not match its mode");
  if (ds.class_count == 0) throw ParameterError("dataset has zero classes");
  std::vector<std::size_t> per_class(ds.class_count, 0);
  for (const Sample& s : ds.samples) {
    if (s.label >= ds.class_count) throw ParameterError("sample label out of range");
    if (s.features.size() != ds.feature_size()) throw ParameterError("sample feature size mismatch");
    if (ds.mode == FeatureMode::image &&
        std::any_of(s.features.begin(), s.features.end(), [](float v) { return !(v >= 0.f && v <= 1.f); }))
      throw ParameterError("image feature outside [0,1]");
    ++per_class[s.label];
  }
  if (std::find(per_class.begin(), per_class.end(), std::size_t{0}) != per_class.end())
    throw ParameterError("dataset has a class with no samples");
}

/// Gaussian clusters around `clusters` centers on the unit sphere in R^dim.
///
/// Centers are chosen by best-candidate sampling (each new center is the
/// farthest of 64 random unit directions from the ones already placed), so
/// clusters stay well separated for small `clusters`. `spread` is the
/// per-coordinate noise standard deviation; 0 places samples on the centers.
inline Dataset gen_gauss(std::uint32_t clusters, std::uint32_t dim, std::uint32_t per_class, double spread,
                         std::uint64_t seed) {
  if (clusters < 2) throw ParameterError("gen_gauss: clusters must be >= 2");
  if (dim < 2) throw ParameterError("gen_gauss: dim must be >= 2");
  if (per_class < 1) throw ParameterError("gen_gauss: per_class must be >= 1");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw ParameterError("gen_gauss: spread must be >= 0");

  constexpr int kCandidates = 64;
  std::vector<std::vector<double>> centers;
  for (std::uint32_t c = 0; c < clusters; ++c) {
    RngStream rng = RngStream(seed, 0, 0, c).substream(Lane::data_centers);
    std::vector<double> best;
    double best_dist = -1.0;
    for (int k = 0; k < kCandidates; ++k) {
      std::vector<double> cand(dim);
      double norm = 0.0;
      for (double& v : cand) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (double& v : cand) v /= norm;
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& other : centers) {
        double d2 = 0.0;
        for (std::uint32_t j = 0; j < dim; ++j) d2 += (cand[j] - other[j]) * (cand[j] - other[j]);
        nearest = std::min(nearest, d2);
      }
      if (nearest > best_dist) {
        best_dist = nearest;
        best = std::move(cand);
      }
    }
    centers.push_back(std::move(best));
  }

  Dataset ds;
  ds.mode = FeatureMode::vector;
  ds.class_count = clusters;
  ds.shape = {dim};
  ds.split_seed = seed;
  ds.samples.reserve(std::size_t{clusters} * per_class);
  for (std::uint32_t c = 0; c < clusters; ++c) {
    for (std::uint32_t i = 0; i < per_class; ++i) {
      RngStream rng = RngStream(seed, 0, c, i).substream(Lane::data_samples);
      Sample s;
      s.label = c;
      s.features.resize(dim);
      for (std::uint32_t j = 0; j < dim; ++j)
        s.features[j] = static_cast<float>(centers[c][j] + spread * rng.normal());
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

/// Shape classes rendered by gen_shapes, in label order.
enum class ShapeKind : std::uint32_t { square = 0, circle = 1, triangle = 2, cross = 3 };

/// Rasterizes one filled shape with half-extent `radius` centered at
/// (cx, cy) into a size x size image, writing `intensity` inside.
inline void rasterize(ShapeKind kind, double cx, double cy, double radius, float intensity, std::uint32_t size,
                      std::vector<float>& image) {
  for (std::uint32_t y = 0; y < size; ++y) {
    for (std::uint32_t x = 0; x < size; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      bool inside = false;
      switch (kind) {
        case ShapeKind::square:
          inside = std::abs(dx) <= radius && std::abs(dy) <= radius;
          break;
        case ShapeKind::circle:
          inside = dx * dx + dy * dy <= radius * radius;
          break;
        case ShapeKind::triangle:
          // Apex up; half-width grows linearly from 0 at the apex to radius at the base.
          inside = dy >= -radius && dy <= radius && std::abs(dx) <= (dy + radius) * 0.5;
          break;
        case ShapeKind::cross: {
          const double arm = radius / 3.0;
          inside = (std::abs(dx) <= radius && std::abs(dy) <= arm) || (std::abs(dy) <= radius && std::abs(dx) <= arm);
          break;
        }
      }
      if (inside) image[std::size_t{y} * size + x] = intensity;
    }
  }
}

/// Single-channel images of filled shapes (square, circle, triangle,
/// cross), one class per shape, with jittered position, scale and
/// intensity, plus clamped Gaussian pixel noise.
inline Dataset gen_shapes(std::uint32_t classes, std::uint32_t size, std::uint32_t per_class, std::uint64_t seed) {
  if (classes < 2 || classes > 4) throw ParameterError("gen_shapes: classes must be in [2,4]");
  if (size < 8 || size > 64) throw ParameterError("gen_shapes: size must be in [8,64]");
  if (per_class < 1) throw ParameterError("gen_shapes: per_class must be >= 1");
  // Half-extent as a fraction of the image side, and additive pixel noise.
  constexpr double kMinRadius = 0.15;
  constexpr double kMaxRadius = 0.4;
  constexpr double kNoise = 0.15;

  Dataset ds;
  ds.mode = FeatureMode::image;
  ds.class_count = classes;
  ds.shape = {size, size};
  ds.split_seed = seed;
  ds.samples.reserve(std::size_t{classes} * per_class);
  for (std::uint32_t c = 0; c < classes; ++c) {
    for (std::uint32_t i = 0; i < per_class; ++i) {
      RngStream rng = RngStream(seed, 0, c, i).substream(Lane::data_samples);
      const double radius = rng.uniform(kMinRadius, kMaxRadius) * size;
      const double cx = rng.uniform(radius, size - radius);
      const double cy = rng.uniform(radius, size - radius);
      const auto intensity = static_cast<float>(rng.uniform(0.5, 1.0));
      Sample s;
      s.label = c;
      s.features.assign(std::size_t{size} * size, 0.f);
      rasterize(static_cast<ShapeKind>(c), cx, cy, radius, intensity, size, s.features);
      for (float& v : s.features) v = std::clamp(static_cast<float>(v + kNoise * rng.normal()), 0.f, 1.f);
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

namespace detail {

inline constexpr std::array<char, 4> kDatasetMagic = {'D', 'A', 'U', 'G'};
inline constexpr std::uint16_t kDatasetVersion = 1;

/// Little-endian byte writer.
class ByteWriter {
 public:
  template <class T>
  void put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    std::array<unsigned char, sizeof(T)> raw{};
    std::memcpy(raw.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    bytes_.insert(bytes_.end(), raw.begin(), raw.end());
  }
  void put_bytes(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  const std::vector<unsigned char>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

/// Little-endian byte reader that reports the failing offset.
class ByteReader {
 public:
  explicit ByteReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  template <class T>
  T get(const char* what) {
    static_assert(std::is_arithmetic_v<T>);
    require(sizeof(T), what);
    std::array<unsigned char, sizeof(T)> raw{};
    std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    T value;
    std::memcpy(&value, raw.data(), sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string get_bytes(std::size_t n, const char* what) {
    require(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  void require(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw FormatError(std::string("truncated file while reading ") + what, pos_);
  }
  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace detail

/// Encodes a dataset in the "DAUG" binary format:
/// magic, u16 version, u8 mode, u32 C, u64 N, u32 rank, u32 dims[rank],
/// then N records of f32 features followed by a u32 label; little-endian.
inline std::vector<unsigned char> encode(const Dataset& ds) {
  detail::ByteWriter w;
  w.put_bytes(std::string_view(detail::kDatasetMagic.data(), detail::kDatasetMagic.size()));
  w.put<std::uint16_t>(detail::kDatasetVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(ds.mode));
  w.put<std::uint32_t>(ds.class_count);
  w.put<std::uint64_t>(ds.samples.size());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ds.shape.size()));
  for (std::uint32_t d : ds.shape) w.put<std::uint32_t>(d);
  for (const Sample& s : ds.samples) {
    for (float v : s.features) w.put<float>(v);
    w.put<std::uint32_t>(s.label);
  }
  return w.bytes();
}

inline Dataset decode(std::vector<unsigned char> bytes) {
  detail::ByteReader r(std::move(bytes));
  if (r.get_bytes(4, "magic") != std::string_view(detail::kDatasetMagic.data(), 4))
    throw FormatError("bad magic, expected \"DAUG\"", 0);
  const std::size_t version_at = r.offset();
  if (r.get<std::uint16_t>("version") != detail::kDatasetVersion)
    throw FormatError("unsupported dataset format version", version_at);
  Dataset ds;
  const std::size_t mode_at = r.offset();
  const auto mode = r.get<std::uint8_t>("mode");
  if (mode > 1) throw FormatError("unknown feature mode", mode_at);
  ds.mode = static_cast<FeatureMode>(mode);
  ds.class_count = r.get<std::uint32_t>("class count");
  const auto n = r.get<std::uint64_t>("sample count");
  const std::size_t rank_at = r.offset();
  const auto rank = r.get<std::uint32_t>("rank");
  if (rank != (ds.mode == FeatureMode::vector ? 1u : 2u)) throw FormatError("rank does not match mode", rank_at);
  for (std::uint32_t i = 0; i < rank; ++i) ds.shape.push_back(r.get<std::uint32_t>("dims"));
  const std::size_t feat = ds.feature_size();
  const std::size_t record = feat * sizeof(float) + sizeof(std::uint32_t);
  if (feat == 0) throw FormatError("zero-sized feature shape", rank_at);
  if (n > r.remaining() / record)
    throw FormatError("truncated file while reading records", r.offset() + (r.remaining() / record) * record);
  ds.samples.resize(n);
  for (Sample& s : ds.samples) {
    s.features.resize(feat);
    for (float& v : s.features) v = r.get<float>("features");
    const std::size_t label_at = r.offset();
    s.label = r.get<std::uint32_t>("label");
    if (s.label >= ds.class_count) throw FormatError("label out of range", label_at);
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last record", r.offset());
  return ds;
}

inline void save(const Dataset& ds, const std::filesystem::path& path) { detail::write_file(path, encode(ds)); }

inline Dataset load(const std::filesystem::path& path) { return decode(detail::read_file(path)); }

/// Deterministic stratified split: within each class, a seeded shuffle
/// assigns round(test_fraction * n_c) samples to the test side. Both sides
/// keep the original relative order.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ParameterError("split: test_fraction must be in (0,1)");
  std::vector<std::vector<std::size_t>> by_class(ds.class_count);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) by_class.at(ds.samples[i].label).push_back(i);
  std::vector<bool> is_test(ds.samples.size(), false);
  for (std::uint32_t c = 0; c < ds.class_count; ++c) {
    auto& idx = by_class[c];
    RngStream rng = RngStream(seed, 0, 0, c).substream(Lane::data_split);
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.uniform_int(static_cast<std::uint32_t>(i))]);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < n_test && k < idx.size(); ++k) is_test[idx[k]] = true;
  }
  Dataset train{ds.mode, ds.class_count, ds.shape, {}, ds.split_seed};
  Dataset test{ds.mode, ds.class_count, ds.shape, {}, ds.split_seed};
  for (std::size_t i = 0; i < ds.samples.size(); ++i) (is_test[i] ? test : train).samples.push_back(ds.samples[i]);
  return {std::move(train), std::move(test)};
}

}  // namespace dualaug
