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

#include <cstdint>

#include "srx/bits.hpp"

namespace srx {

/// Counter-based deterministic generator with a 64-bit seed.
///
/// Draw i (1-based) is mix64(seed + i * 0x9e3779b97f4a7c15), where mix64 is
/// the SplitMix64 finalizer. The stream depends only on (seed, counter), is
/// identical on every platform, and is frozen by golden tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, bound); unbiased via rejection. bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  /// `len` fresh bits; bit 64t+j of the result is bit j (from the top) of
  /// draw t+1's word.
  BitString next_bits(int len);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace srx
