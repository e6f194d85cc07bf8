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
#include <initializer_list>
#include <string>
#include <vector>

namespace srx {

/// Fixed-length bit string, packed 64 bits per word.
///
/// Index 0 is the leftmost (most significant) bit of the written binary
/// expression: from_uint(6, 4) is "0110", so bit(0) == 0 and bit(1) == 1.
/// Within a word, bit i lives at position 63 - (i % 64), which makes plain
/// word comparison agree with lexicographic bit order.
///
/// Hex literals are written "len:digits" with ceil(len/4) digits; bits are
/// taken left to right, the last digit zero-padded on the right. "5:a0" is
/// the bit string 10100.
class BitString {
 public:
  BitString() = default;
  explicit BitString(int len);  // all zero bits

  static BitString from_uint(std::uint64_t value, int len);
  static BitString from_bits(std::initializer_list<int> bits);
  static BitString from_binary(const std::string& bits);  // "0110"
  static BitString parse_hex(const std::string& literal);

  int len() const { return len_; }
  bool empty() const { return len_ == 0; }

  int bit(int i) const;
  void set_bit(int i, bool value);

  std::uint64_t to_uint() const;  // requires len <= 64
  std::string to_hex() const;
  std::string to_binary() const;

  BitString slice(int pos, int count) const;
  BitString prefix(int count) const { return slice(0, count); }
  BitString operator^(const BitString& other) const;

  bool all_zero() const;
  int popcount() const;
  /// Parity of the AND with `other` (GF(2) inner product). Lengths must match.
  int dot(const BitString& other) const;

  bool operator==(const BitString& other) const = default;
  /// Total order: shorter strings first, equal lengths lexicographic by bits.
  bool operator<(const BitString& other) const;

 private:
  int len_ = 0;
  std::vector<std::uint64_t> words_;

  friend BitString concat(const BitString&, const BitString&);
};

BitString concat(const BitString& a, const BitString& b);
BitString concat(const std::vector<BitString>& parts);

/// Seed of an n-column, m-row Toeplitz matrix over GF(2).
///
/// The pinned indexing convention: row r of the matrix is the window
/// diag[m-1-r .. m+n-2-r], i.e. T[r][c] = diag[c - r + m - 1]. Row 0 starts
/// at diag position m-1; each later row shifts the window left by one.
struct ToeplitzSeed {
  int n = 0;  // input length (columns)
  int m = 0;  // output length (rows)
  BitString diag;  // length n + m - 1

  ToeplitzSeed(int n_in, int m_in, BitString diag_in);
};

/// GF(2) matrix-vector product T(seed.diag) * x; returns m bits.
BitString toeplitz_apply(const ToeplitzSeed& seed, const BitString& x);

/// Decomposition of a 1-based row index into l-bit blocks.
///
/// The d-bit binary expression of i-1 is split left to right into
/// b = ceil(d/l) blocks; the last block is zero-padded on the right. Block j
/// holds the integer inds[j] in [1, 2^l] whose (l-bit) expression equals the
/// block's bits plus one.
struct BlockIndex {
  int i = 0;  // original 1-based index
  int d = 0;  // total index bits
  int l = 0;  // block width
  int b = 0;  // block count = ceil(d/l)
  std::vector<int> inds;  // 1-based, one per block
};

BlockIndex decompose_index(std::uint64_t i, int d, int l);

/// Integer whose binary expression is blocks 1..j of `bi` concatenated
/// (including the zero padding when j covers the last block).
std::uint64_t prefix_value(const BlockIndex& bi, int j);

}  // namespace srx
