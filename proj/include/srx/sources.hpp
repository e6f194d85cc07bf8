// Copyright 2026 The srx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "srx/bits.hpp"
#include "srx/rng.hpp"

namespace srx {

/// A distribution over fixed-length bit strings.
///
/// Exact mode stores the full support with double-precision weights
/// (normalized within 2^-40) in canonical lexicographic order; sampler mode
/// wraps a seeded generator for regimes beyond exact enumeration. Sampling
/// in exact mode is inverse-CDF over the canonical order, so equal generator
/// states give equal draws.
class DiscreteSource {
 public:
  DiscreteSource() = default;

  static DiscreteSource point_mass(const BitString& value);
  static DiscreteSource uniform(int n);  // materializes 2^n entries; n <= 20
  static DiscreteSource flat(int n, std::vector<BitString> support);
  static DiscreteSource table(int n, std::vector<std::pair<BitString, double>> entries);
  static DiscreteSource from_sampler(int n, std::function<BitString(Rng&)> sampler);

  int n() const { return n_; }
  bool exact() const { return !sampler_; }
  /// Exact mode only; entries sorted lexicographically, weights sum to 1.
  const std::vector<std::pair<BitString, double>>& entries() const;

  /// min over the support of log2(1/p). Exact mode only.
  double min_entropy() const;

  BitString sample(Rng& rng) const;

 private:
  int n_ = 0;
  std::vector<std::pair<BitString, double>> entries_;
  std::function<BitString(Rng&)> sampler_;
};

/// Uniform distribution over an explicit support set; min-entropy is
/// exactly log2 |support|. Flat sources are the extremal (n, k) sources.
struct FlatSource {
  int n = 0;
  std::vector<BitString> support;

  double min_entropy() const;
  DiscreteSource to_source() const;
};

/// A concatenation of blocks where each block keeps `claimed_k` bits of
/// min-entropy conditioned on every positive-probability fixing of the
/// previous blocks.
class BlockSource {
 public:
  BlockSource(std::vector<int> block_lens, DiscreteSource joint, std::vector<double> claimed_k);

  const std::vector<int>& block_lens() const { return block_lens_; }
  const DiscreteSource& joint() const { return joint_; }
  const std::vector<double>& claimed_k() const { return claimed_k_; }

  /// Min-entropy of block `block` (0-based) conditioned on the previous
  /// blocks being fixed to `prefix`. The prefix must have positive
  /// probability.
  double conditional_min_entropy(int block, const BitString& prefix) const;

  /// Exhaustively checks every positive-probability prefix against the
  /// claims. Exact mode only. On failure, `why` (if non-null) names the
  /// offending block and prefix.
  bool validate(std::string* why = nullptr) const;

 private:
  std::vector<int> block_lens_;
  DiscreteSource joint_;
  std::vector<double> claimed_k_;
};

/// Worst-case test corpus: `count` flat sources with min-entropy exactly k,
/// cycling through random, affine-subspace, prefix-fixed and
/// low-Hamming-weight supports.
std::vector<FlatSource> adversarial_flat_battery(int n, int k, int count, Rng& rng);

/// Plain-text source description files (key = value with a [source] section).
DiscreteSource load_source(std::istream& in);
DiscreteSource load_source_file(const std::string& path);
void save_source(std::ostream& out, const DiscreteSource& s);
BlockSource load_block_source(std::istream& in);
BlockSource load_block_source_file(const std::string& path);
void save_block_source(std::ostream& out, const BlockSource& s);

}  // namespace srx
