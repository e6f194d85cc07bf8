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

#include "srx/bits.hpp"

#include <algorithm>
#include <bit>

#include "srx/error.hpp"

namespace srx {

namespace {

constexpr int kMaxLen = 1 << 24;

int words_for(int len) { return (len + 63) / 64; }

// Mask keeping the top `bits` positions of a word (bits in [0, 64]).
std::uint64_t top_mask(int bits) {
  if (bits <= 0) return 0;
  if (bits >= 64) return ~std::uint64_t{0};
  return ~std::uint64_t{0} << (64 - bits);
}

int hex_digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString::BitString(int len) {
  if (len < 0 || len > kMaxLen) throw DomainError("BitString: bad length " + std::to_string(len));
  len_ = len;
  words_.assign(words_for(len), 0);
}

BitString BitString::from_uint(std::uint64_t value, int len) {
  if (len < 0 || len > 64) throw DomainError("BitString::from_uint: len must be in [0, 64]");
  if (len < 64 && (value >> len) != 0)
    throw DomainError("BitString::from_uint: value does not fit in " + std::to_string(len) + " bits");
  BitString out(len);
  if (len > 0) out.words_[0] = value << (64 - len);
  return out;
}

BitString BitString::from_bits(std::initializer_list<int> bits) {
  BitString out(static_cast<int>(bits.size()));
  int i = 0;
  for (int b : bits) out.set_bit(i++, b != 0);
  return out;
}

BitString BitString::from_binary(const std::string& bits) {
  BitString out(static_cast<int>(bits.size()));
  for (int i = 0; i < out.len_; ++i) {
    char c = bits[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1') throw ParseError("BitString::from_binary: bad character");
    out.set_bit(i, c == '1');
  }
  return out;
}

int BitString::bit(int i) const {
  if (i < 0 || i >= len_) throw DomainError("BitString::bit: index " + std::to_string(i) + " out of range");
  return static_cast<int>((words_[static_cast<std::size_t>(i >> 6)] >> (63 - (i & 63))) & 1u);
}

void BitString::set_bit(int i, bool value) {
  if (i < 0 || i >= len_) throw DomainError("BitString::set_bit: index out of range");
  std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
  if (value)
    words_[static_cast<std::size_t>(i >> 6)] |= mask;
  else
    words_[static_cast<std::size_t>(i >> 6)] &= ~mask;
}

std::uint64_t BitString::to_uint() const {
  if (len_ > 64) throw DomainError("BitString::to_uint: length exceeds 64");
  if (len_ == 0) return 0;
  return words_[0] >> (64 - len_);
}

std::string BitString::to_hex() const {
  std::string digits;
  int ndigits = (len_ + 3) / 4;
  digits.reserve(static_cast<std::size_t>(ndigits));
  for (int t = 0; t < ndigits; ++t) {
    int v = 0;
    for (int j = 0; j < 4; ++j) {
      int pos = 4 * t + j;
      v = (v << 1) | (pos < len_ ? bit(pos) : 0);
    }
    digits.push_back("0123456789abcdef"[v]);
  }
  return std::to_string(len_) + ":" + digits;
}

BitString BitString::parse_hex(const std::string& literal) {
  auto colon = literal.find(':');
  if (colon == std::string::npos) throw ParseError("bit-string literal missing ':': " + literal);
  int len = 0;
  try {
    std::size_t used = 0;
    len = std::stoi(literal.substr(0, colon), &used);
    if (used != colon) throw ParseError("");
  } catch (const std::exception&) {
    throw ParseError("bad length in bit-string literal: " + literal);
  }
  std::string digits = literal.substr(colon + 1);
  if (static_cast<int>(digits.size()) != (len + 3) / 4)
    throw ParseError("bit-string literal has wrong digit count: " + literal);
  BitString out(len);
  for (int t = 0; t < static_cast<int>(digits.size()); ++t) {
    int v = hex_digit_value(digits[static_cast<std::size_t>(t)]);
    if (v < 0) throw ParseError("bad hex digit in bit-string literal: " + literal);
    for (int j = 0; j < 4; ++j) {
      int pos = 4 * t + j;
      bool b = ((v >> (3 - j)) & 1) != 0;
      if (pos < len) {
        out.set_bit(pos, b);
      } else if (b) {
        throw ParseError("nonzero padding bits in bit-string literal: " + literal);
      }
    }
  }
  return out;
}

std::string BitString::to_binary() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(len_));
  for (int i = 0; i < len_; ++i) s.push_back(bit(i) ? '1' : '0');
  return s;
}

BitString BitString::slice(int pos, int count) const {
  if (count < 0 || pos < 0 || pos + count > len_)
    throw DomainError("BitString::slice: range [" + std::to_string(pos) + ", " +
                      std::to_string(pos + count) + ") outside length " + std::to_string(len_));
  BitString out(count);
  int shift = pos & 63;
  int w0 = pos >> 6;
  for (std::size_t t = 0; t < out.words_.size(); ++t) {
    std::uint64_t hi = words_[static_cast<std::size_t>(w0) + t];
    std::uint64_t word = shift == 0 ? hi : (hi << shift);
    if (shift != 0 && static_cast<std::size_t>(w0) + t + 1 < words_.size())
      word |= words_[static_cast<std::size_t>(w0) + t + 1] >> (64 - shift);
    out.words_[t] = word;
  }
  if (count & 63) out.words_.back() &= top_mask(count & 63);
  return out;
}

BitString BitString::operator^(const BitString& other) const {
  if (len_ != other.len_) throw DomainError("BitString::operator^: length mismatch");
  BitString out = *this;
  for (std::size_t t = 0; t < words_.size(); ++t) out.words_[t] ^= other.words_[t];
  return out;
}

bool BitString::all_zero() const {
  for (std::uint64_t w : words_)
    if (w != 0) return false;
  return true;
}

int BitString::popcount() const {
  int total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

int BitString::dot(const BitString& other) const {
  if (len_ != other.len_) throw DomainError("BitString::dot: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t t = 0; t < words_.size(); ++t) acc ^= words_[t] & other.words_[t];
  return std::popcount(acc) & 1;
}

bool BitString::operator<(const BitString& other) const {
  if (len_ != other.len_) return len_ < other.len_;
  return std::lexicographical_compare(words_.begin(), words_.end(), other.words_.begin(),
                                      other.words_.end());
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out(a.len_ + b.len_);
  std::copy(a.words_.begin(), a.words_.end(), out.words_.begin());
  int shift = a.len_ & 63;
  int w0 = a.len_ >> 6;
  if (shift == 0) {
    std::copy(b.words_.begin(), b.words_.end(), out.words_.begin() + w0);
  } else {
    for (std::size_t t = 0; t < b.words_.size(); ++t) {
      out.words_[static_cast<std::size_t>(w0) + t] |= b.words_[t] >> shift;
      if (static_cast<std::size_t>(w0) + t + 1 < out.words_.size())
        out.words_[static_cast<std::size_t>(w0) + t + 1] = b.words_[t] << (64 - shift);
    }
  }
  return out;
}

BitString concat(const std::vector<BitString>& parts) {
  int total = 0;
  for (const auto& p : parts) total += p.len();
  BitString out(total);
  int pos = 0;
  for (const auto& p : parts) {
    for (int i = 0; i < p.len(); ++i) out.set_bit(pos + i, p.bit(i) != 0);
    pos += p.len();
  }
  return out;
}

ToeplitzSeed::ToeplitzSeed(int n_in, int m_in, BitString diag_in)
    : n(n_in), m(m_in), diag(std::move(diag_in)) {
  if (n < 1 || m < 1) throw DomainError("ToeplitzSeed: n and m must be positive");
  if (diag.len() != n + m - 1)
    throw DomainError("ToeplitzSeed: diag length " + std::to_string(diag.len()) + " != n+m-1 = " +
                      std::to_string(n + m - 1));
}

BitString toeplitz_apply(const ToeplitzSeed& seed, const BitString& x) {
  if (x.len() != seed.n)
    throw DomainError("toeplitz_apply: input length " + std::to_string(x.len()) + " != n = " +
                      std::to_string(seed.n));
  BitString out(seed.m);
  for (int r = 0; r < seed.m; ++r) {
    BitString row = seed.diag.slice(seed.m - 1 - r, seed.n);
    out.set_bit(r, row.dot(x) != 0);
  }
  return out;
}

BlockIndex decompose_index(std::uint64_t i, int d, int l) {
  if (d < 1 || d > 63) throw DomainError("decompose_index: d must be in [1, 63]");
  if (l < 1) throw DomainError("decompose_index: l must be >= 1");
  if (i < 1 || i > (std::uint64_t{1} << d))
    throw DomainError("decompose_index: index " + std::to_string(i) + " outside [1, 2^" +
                      std::to_string(d) + "]");
  BlockIndex bi;
  bi.i = static_cast<int>(i);
  bi.d = d;
  bi.l = l;
  bi.b = (d + l - 1) / l;
  // Zero padding appended on the right of the written expression.
  int padded = bi.b * l;
  if (padded > 63) throw DomainError("decompose_index: padded width exceeds 63 bits");
  std::uint64_t shifted = (i - 1) << (padded - d);
  std::uint64_t mask = (std::uint64_t{1} << l) - 1;
  bi.inds.resize(static_cast<std::size_t>(bi.b));
  for (int j = 0; j < bi.b; ++j)
    bi.inds[static_cast<std::size_t>(j)] =
        static_cast<int>((shifted >> (padded - (j + 1) * l)) & mask) + 1;
  return bi;
}

std::uint64_t prefix_value(const BlockIndex& bi, int j) {
  if (j < 1 || j > bi.b) throw DomainError("prefix_value: block count out of range");
  std::uint64_t v = 0;
  for (int t = 0; t < j; ++t) v = (v << bi.l) | static_cast<std::uint64_t>(bi.inds[static_cast<std::size_t>(t)] - 1);
  return v;
}

}  // namespace srx
