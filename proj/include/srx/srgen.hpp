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

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "srx/alternating.hpp"
#include "srx/eval.hpp"
#include "srx/extractors.hpp"

namespace srx {

/// A realized N x row_len matrix; the pipeline's somewhere-random values.
struct SRMatrix {
  int rows = 0;
  int row_len = 0;
  std::vector<BitString> v;

  void validate() const;
  void dump(std::ostream& out) const;
  static SRMatrix load(std::istream& in);
};

/// Parameters of the round-indexed SR generator.
///
/// h is the independence parameter (a power of two, h = 2^l), ell the round
/// width, N = 2^d the row count and b = ceil(d/l) the block count. laext
/// runs t = h rounds per block. slice1_len is the width of the first Q-side
/// slice and bridge_m the width of later slices (the bridge extractor's
/// output); they default to (h+12)*ell and (h^2+12)*ell but are configurable
/// because toy parameter sets cannot afford the full widths.
struct SSRConfig {
  int h = 0, ell = 0, N = 0;
  int d = 0, l = 0, b = 0;  // derived
  int slice1_len = 0;
  AltExtConfig laext;
  std::shared_ptr<const StrongSeededExtractor> bridge;  // Y^i x R -> next slice

  static SSRConfig make(int h, int ell, int N, AltExtConfig laext,
                        std::shared_ptr<const StrongSeededExtractor> bridge,
                        std::optional<int> slice1_len = std::nullopt);
  void validate() const;
};

/// Round-indexed SR generator: for each row, walks the blocks of the row
/// index, alternately extracting from x and re-extracting a fresh slice of
/// the row, and keeps the block-indexed output of the final round.
SRMatrix ssr(const SSRConfig& cfg, const BitString& x, const SRMatrix& y_rows);

struct SrOutput {
  SRMatrix w;     // W_i = ext2(x, ext1(y, r_i))
  SRMatrix ybar;  // Y^i = ext3(y, W_i)
  SRMatrix z;     // ssr(cfg, x, ybar)
};

/// Two-source SR generation: enumerates the 2^d seeds of ext1 in binary
/// order of i-1, derives the W and Ybar matrices and runs ssr.
SrOutput sr(const SSRConfig& cfg, const StrongSeededExtractor& ext1,
            const StrongSeededExtractor& ext2, const StrongSeededExtractor& ext3,
            const BitString& x, const BitString& y);

struct SrQualityEntry {
  BitString y;
  double prob = 0.0;
  int t_size = 0;             // rows whose conditional W_i is tau_row-close to uniform
  int subsets_tested = 0;
  double worst_joint = 0.0;   // worst joint distance over tested subsets of T
  bool pass = false;          // |T| >= 2N/3 and all tested subsets pass tau_joint
};

struct SrQualityReport {
  std::vector<SrQualityEntry> per_y;
  double good_mass = 0.0;
};

/// Exact per-fixing quality scan of the SR pipeline. For each y in supp(Y),
/// computes the conditional distribution of each W_i, collects the rows
/// within tau_row of uniform into T(y), and measures the exact joint
/// distance of (Z_i, i in S) for size-h subsets S of T(y) — all of them when
/// C(|T|, h) <= subsets, otherwise `subsets` sampled ones. Reports the
/// Y-mass of fixings where |T| >= 2N/3 and every tested subset passes
/// tau_joint.
SrQualityReport sr_quality_test(const SSRConfig& cfg, const StrongSeededExtractor& ext1,
                                const StrongSeededExtractor& ext2,
                                const StrongSeededExtractor& ext3, const DiscreteSource& source_x,
                                const DiscreteSource& source_y, double tau_row, double tau_joint,
                                int subsets, Rng& rng,
                                std::uint64_t budget = std::uint64_t{1} << 24);

}  // namespace srx
