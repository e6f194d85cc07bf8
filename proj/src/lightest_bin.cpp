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

#include "srx/lightest_bin.hpp"

#include <bit>
#include <cmath>

#include "srx/error.hpp"

namespace srx {

BinOutcome lightest_bin(const std::vector<BitString>& rows, int r) {
  if (rows.empty()) throw DomainError("lightest_bin: need at least one row");
  if (r < 1 || !std::has_single_bit(static_cast<unsigned>(r)))
    throw DomainError("lightest_bin: r must be a power of two");
  int log_r = std::countr_zero(static_cast<unsigned>(r));
  for (const auto& row : rows)
    if (row.len() < log_r) throw DomainError("lightest_bin: row shorter than log2 r bits");

  BinOutcome out;
  out.bin_counts.assign(static_cast<std::size_t>(r), 0);
  std::vector<int> bin_of(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    int bin = log_r == 0 ? 0 : static_cast<int>(rows[i].prefix(log_r).to_uint());
    bin_of[i] = bin;
    ++out.bin_counts[static_cast<std::size_t>(bin)];
  }

  int chosen = -1;
  for (int b = 0; b < r; ++b) {
    int c = out.bin_counts[static_cast<std::size_t>(b)];
    if (c == 0) continue;
    if (chosen < 0 || c < out.bin_counts[static_cast<std::size_t>(chosen)]) chosen = b;
  }
  out.chosen_bin = chosen + 1;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (bin_of[i] == chosen) out.survivors.push_back(static_cast<int>(i) + 1);
  return out;
}

int bin_count_from_params(int N, int h, double gamma) {
  if (N < 1 || h < 1) throw DomainError("bin_count_from_params: N and h must be >= 1");
  if (gamma <= 0.0 || gamma >= 1.0) throw DomainError("bin_count_from_params: gamma in (0, 1)");
  double raw = gamma * gamma / (16.0 * h) *
               std::pow(static_cast<double>(N), 1.0 - 2.0 / std::sqrt(static_cast<double>(h)));
  if (raw <= 1.0) return 1;
  int r = 1;
  while (r < raw && r < N) r <<= 1;
  return std::min(r, N);
}

}  // namespace srx
