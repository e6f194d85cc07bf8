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

#include "srx/sources.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "srx/error.hpp"

namespace srx {

namespace {

constexpr double kNormTol = 0x1.0p-40;

void check_normalized(const std::vector<std::pair<BitString, double>>& entries, int n) {
  double sum = 0.0;
  for (const auto& [v, p] : entries) {
    if (v.len() != n) throw DomainError("DiscreteSource: support element length mismatch");
    if (p < 0.0) throw DomainError("DiscreteSource: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kNormTol)
    throw DomainError("DiscreteSource: probabilities sum to " + std::to_string(sum));
}

}  // namespace

DiscreteSource DiscreteSource::point_mass(const BitString& value) {
  DiscreteSource s;
  s.n_ = value.len();
  s.entries_ = {{value, 1.0}};
  return s;
}

DiscreteSource DiscreteSource::uniform(int n) {
  if (n < 0 || n > 20) throw GuardError("DiscreteSource::uniform: n must be in [0, 20]");
  DiscreteSource s;
  s.n_ = n;
  std::uint64_t size = std::uint64_t{1} << n;
  double p = 1.0 / static_cast<double>(size);
  s.entries_.reserve(size);
  for (std::uint64_t v = 0; v < size; ++v) s.entries_.emplace_back(BitString::from_uint(v, n), p);
  return s;
}

DiscreteSource DiscreteSource::flat(int n, std::vector<BitString> support) {
  if (support.empty()) throw DomainError("DiscreteSource::flat: empty support");
  std::sort(support.begin(), support.end());
  if (std::adjacent_find(support.begin(), support.end()) != support.end())
    throw DomainError("DiscreteSource::flat: duplicate support element");
  DiscreteSource s;
  s.n_ = n;
  double p = 1.0 / static_cast<double>(support.size());
  for (auto& v : support) {
    if (v.len() != n) throw DomainError("DiscreteSource::flat: element length mismatch");
    s.entries_.emplace_back(std::move(v), p);
  }
  return s;
}

DiscreteSource DiscreteSource::table(int n, std::vector<std::pair<BitString, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Merge duplicates so callers can build tables additively.
  std::vector<std::pair<BitString, double>> merged;
  for (auto& e : entries) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(std::move(e));
  }
  std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });
  check_normalized(merged, n);
  DiscreteSource s;
  s.n_ = n;
  s.entries_ = std::move(merged);
  return s;
}

DiscreteSource DiscreteSource::from_sampler(int n, std::function<BitString(Rng&)> sampler) {
  DiscreteSource s;
  s.n_ = n;
  s.sampler_ = std::move(sampler);
  return s;
}

const std::vector<std::pair<BitString, double>>& DiscreteSource::entries() const {
  if (!exact()) throw DomainError("DiscreteSource::entries: sampler mode has no table");
  return entries_;
}

double DiscreteSource::min_entropy() const {
  if (!exact()) throw DomainError("DiscreteSource::min_entropy: unsupported in sampler mode");
  double max_p = 0.0;
  for (const auto& [v, p] : entries_) max_p = std::max(max_p, p);
  return -std::log2(max_p);
}

BitString DiscreteSource::sample(Rng& rng) const {
  if (sampler_) return sampler_(rng);
  double u = rng.next_double();
  double acc = 0.0;
  for (const auto& [v, p] : entries_) {
    acc += p;
    if (u < acc) return v;
  }
  return entries_.back().first;  // u landed in the rounding tail
}

double FlatSource::min_entropy() const {
  return std::log2(static_cast<double>(support.size()));
}

DiscreteSource FlatSource::to_source() const {
  return DiscreteSource::flat(n, support);
}

BlockSource::BlockSource(std::vector<int> block_lens, DiscreteSource joint,
                         std::vector<double> claimed_k)
    : block_lens_(std::move(block_lens)), joint_(std::move(joint)), claimed_k_(std::move(claimed_k)) {
  if (block_lens_.empty()) throw DomainError("BlockSource: no blocks");
  if (claimed_k_.size() != block_lens_.size())
    throw DomainError("BlockSource: claimed_k count != block count");
  int total = 0;
  for (int len : block_lens_) {
    if (len <= 0) throw DomainError("BlockSource: non-positive block length");
    total += len;
  }
  if (total != joint_.n()) throw DomainError("BlockSource: block lengths do not sum to joint length");
}

double BlockSource::conditional_min_entropy(int block, const BitString& prefix) const {
  if (block < 0 || block >= static_cast<int>(block_lens_.size()))
    throw DomainError("BlockSource: block index out of range");
  int prefix_len = 0;
  for (int b = 0; b < block; ++b) prefix_len += block_lens_[static_cast<std::size_t>(b)];
  if (prefix.len() != prefix_len)
    throw DomainError("BlockSource: prefix length != sum of previous block lengths");
  int blen = block_lens_[static_cast<std::size_t>(block)];
  std::map<BitString, double> cond;
  double mass = 0.0;
  for (const auto& [v, p] : joint_.entries()) {
    if (v.prefix(prefix_len) != prefix) continue;
    cond[v.slice(prefix_len, blen)] += p;
    mass += p;
  }
  if (mass <= 0.0) throw DomainError("BlockSource: prefix has zero probability");
  double max_p = 0.0;
  for (const auto& [v, p] : cond) max_p = std::max(max_p, p / mass);
  return -std::log2(max_p);
}

bool BlockSource::validate(std::string* why) const {
  std::set<BitString> prefixes;
  int prefix_len = 0;
  for (std::size_t b = 0; b < block_lens_.size(); ++b) {
    prefixes.clear();
    for (const auto& [v, p] : joint_.entries())
      if (p > 0.0) prefixes.insert(v.prefix(prefix_len));
    for (const auto& prefix : prefixes) {
      double ent = conditional_min_entropy(static_cast<int>(b), prefix);
      if (ent + 1e-9 < claimed_k_[b]) {
        if (why)
          *why = "block " + std::to_string(b) + " given prefix " + prefix.to_hex() +
                 " has min-entropy " + std::to_string(ent) + " < claimed " +
                 std::to_string(claimed_k_[b]);
        return false;
      }
    }
    prefix_len += block_lens_[b];
  }
  return true;
}

namespace {

std::vector<BitString> random_distinct_strings(int n, std::uint64_t count, Rng& rng) {
  std::set<BitString> out;
  while (out.size() < count) out.insert(rng.next_bits(n));
  return {out.begin(), out.end()};
}

// Basis completion over GF(2): keep candidate rows that grow the span.
std::vector<BitString> random_affine_support(int n, int k, Rng& rng) {
  std::uint64_t basis[64] = {};
  std::vector<BitString> dirs;
  while (static_cast<int>(dirs.size()) < k) {
    BitString cand = rng.next_bits(n);
    std::uint64_t v = cand.to_uint();
    for (int bit = 63; bit >= 0 && v != 0; --bit) {
      if (((v >> bit) & 1) == 0) continue;
      if (basis[bit] == 0) {
        basis[bit] = v;
        dirs.push_back(cand);
        v = 0;
        break;
      }
      v ^= basis[bit];
    }
  }
  BitString offset = rng.next_bits(n);
  std::vector<BitString> support;
  support.reserve(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    BitString v = offset;
    for (int j = 0; j < k; ++j)
      if ((mask >> j) & 1) v = v ^ dirs[static_cast<std::size_t>(j)];
    support.push_back(v);
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  return support;
}

std::vector<BitString> prefix_fixed_support(int n, int k, Rng& rng) {
  BitString head = rng.next_bits(n - k);
  std::vector<BitString> support;
  support.reserve(std::size_t{1} << k);
  for (std::uint64_t tail = 0; tail < (std::uint64_t{1} << k); ++tail)
    support.push_back(concat(head, BitString::from_uint(tail, k)));
  return support;
}

// The 2^k strings of least Hamming weight (weight-major, lexicographic
// within a weight class), pushed through a random coordinate permutation.
std::vector<BitString> low_weight_support(int n, int k, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i) + 1))]);

  std::uint64_t want = std::uint64_t{1} << k;
  std::vector<BitString> support;
  support.reserve(want);
  for (int w = 0; w <= n && support.size() < want; ++w) {
    // Combinations of w set positions in lexicographic order.
    std::vector<int> pos(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) pos[static_cast<std::size_t>(i)] = i;
    for (;;) {
      BitString v(n);
      for (int p : pos) v.set_bit(perm[static_cast<std::size_t>(p)], true);
      support.push_back(v);
      if (support.size() == want) break;
      int j = w - 1;
      while (j >= 0 && pos[static_cast<std::size_t>(j)] == n - w + j) --j;
      if (j < 0) break;
      ++pos[static_cast<std::size_t>(j)];
      for (int t = j + 1; t < w; ++t)
        pos[static_cast<std::size_t>(t)] = pos[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
  return support;
}

}  // namespace

std::vector<FlatSource> adversarial_flat_battery(int n, int k, int count, Rng& rng) {
  if (k > n) throw DomainError("adversarial_flat_battery: k > n");
  if (n > 64) throw GuardError("adversarial_flat_battery: n > 64 unsupported");
  std::vector<FlatSource> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<BitString> support;
    if (k == n) {
      support.reserve(std::size_t{1} << n);
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
        support.push_back(BitString::from_uint(v, n));
    } else {
      switch (i % 4) {
        case 0: support = random_distinct_strings(n, std::uint64_t{1} << k, rng); break;
        case 1: support = random_affine_support(n, k, rng); break;
        case 2: support = prefix_fixed_support(n, k, rng); break;
        default: support = low_weight_support(n, k, rng); break;
      }
    }
    out.push_back(FlatSource{n, std::move(support)});
  }
  return out;
}

namespace {

struct KvFile {
  // section -> ordered (key, value) pairs; keys may repeat.
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

  const std::vector<std::pair<std::string, std::string>>* find(const std::string& name) const {
    for (const auto& [sec, kvs] : sections)
      if (sec == name) return &kvs;
    return nullptr;
  }
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

KvFile parse_kv(std::istream& in) {
  KvFile file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": unterminated section");
      file.sections.push_back({t.substr(1, t.size() - 2), {}});
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    if (file.sections.empty()) throw ParseError("line " + std::to_string(lineno) + ": key outside any section");
    file.sections.back().second.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return file;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> out;
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

std::string require(const std::vector<std::pair<std::string, std::string>>& kvs, const std::string& key) {
  for (const auto& [k, v] : kvs)
    if (k == key) return v;
  throw ParseError("source file: missing key '" + key + "'");
}

DiscreteSource source_from_section(const std::vector<std::pair<std::string, std::string>>& kvs) {
  int n = std::stoi(require(kvs, "n"));
  std::string kind = require(kvs, "kind");
  if (kind == "flat") {
    std::vector<BitString> support;
    for (const auto& [k, v] : kvs)
      if (k == "support")
        for (const auto& tok : split_ws(v)) support.push_back(BitString::parse_hex(tok));
    return DiscreteSource::flat(n, std::move(support));
  }
  if (kind == "table") {
    std::vector<std::pair<BitString, double>> entries;
    for (const auto& [k, v] : kvs)
      if (k == "entry") {
        auto toks = split_ws(v);
        if (toks.size() != 2) throw ParseError("source file: entry wants '<hex> <prob>'");
        entries.emplace_back(BitString::parse_hex(toks[0]), std::stod(toks[1]));
      }
    return DiscreteSource::table(n, std::move(entries));
  }
  throw ParseError("source file: unknown kind '" + kind + "'");
}

}  // namespace

DiscreteSource load_source(std::istream& in) {
  KvFile file = parse_kv(in);
  const auto* kvs = file.find("source");
  if (!kvs) throw ParseError("source file: missing [source] section");
  return source_from_section(*kvs);
}

DiscreteSource load_source_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open source file: " + path);
  return load_source(in);
}

void save_source(std::ostream& out, const DiscreteSource& s) {
  out << "[source]\n";
  out << "n = " << s.n() << "\n";
  bool flat = true;
  double p0 = s.entries().front().second;
  for (const auto& [v, p] : s.entries())
    if (std::fabs(p - p0) > kNormTol) flat = false;
  if (flat) {
    out << "kind = flat\n";
    std::string line = "support =";
    for (const auto& [v, p] : s.entries()) line += " " + v.to_hex();
    out << line << "\n";
  } else {
    out << "kind = table\n";
    out.precision(17);
    for (const auto& [v, p] : s.entries()) out << "entry = " << v.to_hex() << " " << p << "\n";
  }
}

BlockSource load_block_source(std::istream& in) {
  KvFile file = parse_kv(in);
  const auto* kvs = file.find("source");
  if (!kvs) throw ParseError("source file: missing [source] section");
  if (require(*kvs, "kind") != "block") throw ParseError("source file: kind is not 'block'");
  std::vector<int> lens;
  for (const auto& tok : split_ws(require(*kvs, "block_lens"))) lens.push_back(std::stoi(tok));
  std::vector<double> ks;
  for (const auto& tok : split_ws(require(*kvs, "claimed_k"))) ks.push_back(std::stod(tok));
  int n = std::stoi(require(*kvs, "n"));
  std::vector<std::pair<BitString, double>> entries;
  for (const auto& [k, v] : *kvs)
    if (k == "entry") {
      auto toks = split_ws(v);
      if (toks.size() != 2) throw ParseError("source file: entry wants '<hex> <prob>'");
      entries.emplace_back(BitString::parse_hex(toks[0]), std::stod(toks[1]));
    }
  return BlockSource(std::move(lens), DiscreteSource::table(n, std::move(entries)), std::move(ks));
}

BlockSource load_block_source_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open source file: " + path);
  return load_block_source(in);
}

void save_block_source(std::ostream& out, const BlockSource& s) {
  out << "[source]\n";
  out << "n = " << s.joint().n() << "\n";
  out << "kind = block\n";
  std::string lens = "block_lens =";
  for (int len : s.block_lens()) lens += " " + std::to_string(len);
  out << lens << "\n";
  std::string ks = "claimed_k =";
  for (double k : s.claimed_k()) ks += " " + std::to_string(k);
  out << ks << "\n";
  out.precision(17);
  for (const auto& [v, p] : s.joint().entries()) out << "entry = " << v.to_hex() << " " << p << "\n";
}

}  // namespace srx
