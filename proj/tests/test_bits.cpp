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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "srx/bits.hpp"
#include "srx/error.hpp"
#include "srx/rng.hpp"

using namespace srx;

TEST_CASE("bit order: index 0 is the most significant written bit") {
  BitString b = BitString::from_uint(6, 4);  // "0110"
  CHECK(b.bit(0) == 0);
  CHECK(b.bit(1) == 1);
  CHECK(b.bit(2) == 1);
  CHECK(b.bit(3) == 0);
  CHECK(b.to_binary() == "0110");
  CHECK(b.to_uint() == 6);
}

TEST_CASE("hex literals round-trip with right-padded last digit") {
  BitString b = BitString::from_binary("10100");
  CHECK(b.to_hex() == "5:a0");
  CHECK(BitString::parse_hex("5:a0") == b);
  CHECK(BitString::parse_hex(b.to_hex()) == b);
  // nonzero padding is rejected
  CHECK_THROWS_AS(BitString::parse_hex("5:a1"), ParseError);
  CHECK_THROWS_AS(BitString::parse_hex("bogus"), ParseError);

  Rng rng(11);
  for (int len : {1, 3, 63, 64, 65, 130}) {
    BitString v = rng.next_bits(len);
    CHECK(BitString::parse_hex(v.to_hex()) == v);
  }
}

TEST_CASE("slice and concat agree with bit indexing across word boundaries") {
  Rng rng(5);
  BitString a = rng.next_bits(100);
  BitString b = rng.next_bits(45);
  BitString joined = concat(a, b);
  REQUIRE(joined.len() == 145);
  for (int i = 0; i < 100; ++i) CHECK(joined.bit(i) == a.bit(i));
  for (int i = 0; i < 45; ++i) CHECK(joined.bit(100 + i) == b.bit(i));
  CHECK(joined.slice(0, 100) == a);
  CHECK(joined.slice(100, 45) == b);
  BitString mid = joined.slice(60, 70);
  for (int i = 0; i < 70; ++i) CHECK(mid.bit(i) == joined.bit(60 + i));
  CHECK_THROWS_AS(joined.slice(100, 50), DomainError);
}

TEST_CASE("lexicographic order matches bit strings") {
  CHECK(BitString::from_binary("0011") < BitString::from_binary("0100"));
  CHECK_FALSE(BitString::from_binary("0100") < BitString::from_binary("0011"));
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    BitString a = rng.next_bits(90);
    BitString b = rng.next_bits(90);
    CHECK((a < b) == (a.to_binary() < b.to_binary()));
  }
}

TEST_CASE("decompose_index examples") {
  BlockIndex bi = decompose_index(1, 4, 2);
  CHECK(bi.b == 2);
  CHECK(bi.inds == std::vector<int>{1, 1});

  bi = decompose_index(7, 4, 2);  // 6 = "0110" -> "01", "10"
  CHECK(bi.inds == std::vector<int>{2, 3});

  bi = decompose_index(2, 5, 2);  // 1 = "00001" -> "00", "00", "10" (padded)
  CHECK(bi.b == 3);
  CHECK(bi.inds == std::vector<int>{1, 1, 3});

  CHECK_THROWS_AS(decompose_index(0, 4, 2), DomainError);
  CHECK_THROWS_AS(decompose_index(17, 4, 2), DomainError);
}

TEST_CASE("decompose_index then reconstruction is the identity") {
  for (int d = 1; d <= 16; ++d) {
    for (int l = 1; l <= d; ++l) {
      for (std::uint64_t i = 1; i <= (std::uint64_t{1} << d); ++i) {
        BlockIndex bi = decompose_index(i, d, l);
        // Reassemble the padded expression and truncate the padding.
        std::uint64_t padded = 0;
        for (int v : bi.inds) padded = (padded << l) | static_cast<std::uint64_t>(v - 1);
        std::uint64_t value = padded >> (bi.b * l - d);
        CHECK(value == i - 1);
      }
    }
  }
}

TEST_CASE("prefix_value examples and properties") {
  CHECK(prefix_value(decompose_index(7, 4, 2), 2) == 6);
  CHECK(prefix_value(decompose_index(1, 4, 2), 1) == 0);
  CHECK(prefix_value(decompose_index(7, 4, 2), 1) == 1);
  CHECK_THROWS_AS(prefix_value(decompose_index(7, 4, 2), 3), DomainError);
  CHECK_THROWS_AS(prefix_value(decompose_index(7, 4, 2), 0), DomainError);

  // Full prefix reads back i-1 when l divides d.
  for (std::uint64_t i = 1; i <= 64; ++i) {
    BlockIndex bi = decompose_index(i, 6, 2);
    CHECK(prefix_value(bi, bi.b) == i - 1);
  }

  // f^j is monotone: i < v implies f^j(i) <= f^j(v).
  for (int j = 1; j <= 3; ++j)
    for (std::uint64_t i = 1; i < 64; ++i)
      CHECK(prefix_value(decompose_index(i, 6, 2), j) <=
            prefix_value(decompose_index(i + 1, 6, 2), j));
}

TEST_CASE("toeplitz examples under the pinned convention") {
  // all-zero diagonal: zero matrix
  ToeplitzSeed zero(4, 2, BitString(5));
  CHECK(toeplitz_apply(zero, BitString::from_binary("1011")) == BitString(2));

  ToeplitzSeed s(2, 1, BitString::from_binary("10"));
  CHECK(toeplitz_apply(s, BitString::from_binary("10")) == BitString::from_binary("1"));
  CHECK(toeplitz_apply(s, BitString::from_binary("01")) == BitString::from_binary("0"));

  // wider golden, frozen from a hand multiply
  ToeplitzSeed w(4, 2, BitString::from_binary("10110"));
  CHECK(toeplitz_apply(w, BitString::from_binary("1101")) == BitString::from_binary("10"));

  CHECK_THROWS_AS(toeplitz_apply(s, BitString::from_binary("101")), DomainError);
  CHECK_THROWS_AS(ToeplitzSeed(2, 1, BitString(3)), DomainError);
}

TEST_CASE("toeplitz_apply is GF(2)-linear in x") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(12));
    int m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    ToeplitzSeed seed(n, m, rng.next_bits(n + m - 1));
    BitString x = rng.next_bits(n), y = rng.next_bits(n);
    CHECK(toeplitz_apply(seed, x ^ y) == (toeplitz_apply(seed, x) ^ toeplitz_apply(seed, y)));
  }
}

TEST_CASE("xor and dot basics") {
  BitString a = BitString::from_binary("1100");
  BitString b = BitString::from_binary("1010");
  CHECK((a ^ b) == BitString::from_binary("0110"));
  CHECK(a.dot(b) == 1);  // AND = 1000, parity 1
  CHECK(a.popcount() == 2);
  CHECK(BitString(5).all_zero());
  CHECK_THROWS_AS(a ^ BitString(5), DomainError);
}
