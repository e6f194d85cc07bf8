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
#include <memory>
#include <vector>

#include "srx/eval.hpp"
#include "srx/extractors.hpp"
#include "srx/sources.hpp"

namespace srx {

/// Configuration of the two-party alternating-extraction protocol. Both
/// extractors output ell bits and take ell-bit seeds; ext_q extracts from
/// the Q-side value, ext_w from the X-side source. The Q side accepts inputs
/// shorter than ext_q.n by zero-padding on the right, which is how the
/// row-slice widths of the SR generator stay well-typed.
struct AltExtConfig {
  std::shared_ptr<const StrongSeededExtractor> ext_q;
  std::shared_ptr<const StrongSeededExtractor> ext_w;
  int ell = 0;
  int t = 0;

  void validate() const;
};

/// Protocol transcript: s[i] and r[i] are the round-(i+1) messages, each
/// ell bits.
struct Transcript {
  std::vector<BitString> s;
  std::vector<BitString> r;
};

/// Runs the recurrence R_i = Ext_w(x, S_i), S_{i+1} = Ext_q(q, R_i) for
/// t rounds starting from s1. q may be shorter than ext_q.n (zero-padded).
Transcript alternating_extraction(const AltExtConfig& cfg, const BitString& x, const BitString& q,
                                  const BitString& s1);

/// Look-ahead extractor: y is read as (Q, S1) where S1 is the first ell bits
/// of y and Q is y itself; returns R_1..R_t.
std::vector<BitString> la_ext(const AltExtConfig& cfg, const BitString& x, const BitString& y);

struct LookaheadReport {
  int j = 0;
  double distance = 0.0;  // exact conditional-uniformity distance at round j+1
};

/// Exact look-ahead conditional-uniformity test. `seed_source` is the shared seed;
/// `family` holds h deterministic maps from the seed to the parties'
/// (Q, S1) values, the first being the real party. Computes the exact
/// statistical distance between (seed, all parties' rounds 1..j, R_{j+1})
/// and the hybrid where R_{j+1} is replaced by uniform ell bits.
LookaheadReport laext_lookahead_test(
    const AltExtConfig& cfg, const DiscreteSource& source_x, const DiscreteSource& seed_source,
    const std::vector<std::function<BitString(const BitString&)>>& family, int j,
    std::uint64_t budget = std::uint64_t{1} << 24);

}  // namespace srx
