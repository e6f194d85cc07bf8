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
#include <vector>

#include "srx/bits.hpp"

namespace srx {

/// Result of one lightest-bin round.
///
/// Bins are selected by the first log2(r) bits of each row (read as the
/// binary expression of bin-1). The chosen bin is the minimal-occupancy
/// NONEMPTY bin — the literal "fewest players" rule would pick an empty bin
/// whenever one exists and kill the surviving set — with ties broken by the
/// lowest bin index. Survivors are listed in ascending player order
/// (1-based).
struct BinOutcome {
  int chosen_bin = 0;               // 1-based
  std::vector<int> survivors;       // ascending, 1-based player indices
  std::vector<int> bin_counts;      // size r
};

BinOutcome lightest_bin(const std::vector<BitString>& rows, int r);

/// Bin count gamma^2/(16h) * N^(1 - 2/sqrt(h)), rounded up to the next power
/// of two (which stays within the allowed factor 2) and clamped to [1, N].
int bin_count_from_params(int N, int h, double gamma);

}  // namespace srx
