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

#include "srx/rng.hpp"

#include "srx/error.hpp"

namespace srx {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * 0x9e3779b97f4a7c15ull);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("Rng::next_below: bound must be positive");
  // Rejection keeps the draw exactly uniform.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

BitString Rng::next_bits(int len) {
  BitString out(len);
  for (int pos = 0; pos < len; pos += 64) {
    std::uint64_t w = next_u64();
    int take = len - pos < 64 ? len - pos : 64;
    for (int j = 0; j < take; ++j) out.set_bit(pos + j, ((w >> (63 - j)) & 1) != 0);
  }
  return out;
}

}  // namespace srx
