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

#include "srx/extractors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "srx/error.hpp"

namespace srx {

namespace {

// Number of 2^k-element subsets of 2^n elements, capped at 2^63.
double combination_count(int n, int k) {
  double total = std::pow(2.0, n);
  double pick = std::pow(2.0, k);
  double log_c = std::lgamma(total + 1.0) - std::lgamma(pick + 1.0) - std::lgamma(total - pick + 1.0);
  return std::exp(std::min(log_c, 43.0 * std::log(2.0)));
}

// Lexicographic walk over size-`pick` subsets of [0, total).
struct CombinationWalker {
  std::vector<int> idx;
  int total;

  CombinationWalker(int total_in, int pick) : total(total_in) {
    idx.resize(static_cast<std::size_t>(pick));
    std::iota(idx.begin(), idx.end(), 0);
  }

  bool advance() {
    int pick = static_cast<int>(idx.size());
    int j = pick - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == total - pick + j) --j;
    if (j < 0) return false;
    ++idx[static_cast<std::size_t>(j)];
    for (int t = j + 1; t < pick; ++t)
      idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    return true;
  }
};

}  // namespace

StrongSeededExtractor::StrongSeededExtractor(int n, int d, int m, double claimed_k,
                                             double claimed_eps)
    : n_(n), d_(d), m_(m), claimed_k_(claimed_k), claimed_eps_(claimed_eps) {
  if (n < 1 || d < 0 || m < 1) throw DomainError("StrongSeededExtractor: bad shape");
}

ToeplitzExtractor::ToeplitzExtractor(int n, int m, double claimed_k)
    : StrongSeededExtractor(n, n + m - 1, m, claimed_k, lhl_eps(claimed_k, m)) {
  if (m > n) throw DomainError("ToeplitzExtractor: m > n");
}

BitString ToeplitzExtractor::eval(const BitString& x, const BitString& seed) const {
  if (seed.len() != d_) throw DomainError("ToeplitzExtractor: seed length mismatch");
  return toeplitz_apply(ToeplitzSeed(n_, m_, seed), x);
}

double lhl_eps(double k, int m) { return std::exp2(-(k - m) / 2.0); }

namespace {

void dump_entries(std::ostream& out, const std::vector<std::uint32_t>& table, int m) {
  int digits = (m + 3) / 4;
  int per_line = std::max(1, 64 / digits);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (int t = digits - 1; t >= 0; --t)
      out << "0123456789abcdef"[(table[i] >> (4 * t)) & 0xf];
    out << (((i + 1) % static_cast<std::size_t>(per_line) == 0 || i + 1 == table.size()) ? '\n'
                                                                                         : ' ');
  }
}

std::vector<std::uint32_t> read_entries(std::istream& in, std::size_t count, int m) {
  int digits = (m + 3) / 4;
  std::vector<std::uint32_t> table;
  table.reserve(count);
  std::string tok;
  while (table.size() < count && in >> tok) {
    if (static_cast<int>(tok.size()) != digits) throw ParseError("table dump: bad entry width");
    std::uint32_t v = 0;
    for (char c : tok) {
      int h = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
      if (h < 0) throw ParseError("table dump: bad hex digit");
      v = (v << 4) | static_cast<std::uint32_t>(h);
    }
    table.push_back(v);
  }
  if (table.size() != count) throw ParseError("table dump: truncated");
  return table;
}

std::string read_header_value(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("table file: truncated header");
  auto eq = line.find('=');
  if (eq == std::string::npos || line.substr(0, eq).find(key) == std::string::npos)
    throw ParseError("table file: expected '" + key + " = ...'");
  return line.substr(eq + 1);
}

}  // namespace

LookupExtractor::LookupExtractor(int n, int d, int m, double claimed_k, double measured_eps,
                                 std::vector<std::uint32_t> table)
    : StrongSeededExtractor(n, d, m, claimed_k, measured_eps), table_(std::move(table)) {
  if (n > 24 || d > 24 || n + d > 28) throw GuardError("LookupExtractor: table too large");
  if (m > 20) throw GuardError("LookupExtractor: m > 20 unsupported");
  if (table_.size() != (std::size_t{1} << (n + d)))
    throw DomainError("LookupExtractor: table size != 2^(n+d)");
  for (std::uint32_t v : table_)
    if (m < 32 && (v >> m) != 0) throw DomainError("LookupExtractor: entry wider than m bits");
}

BitString LookupExtractor::eval(const BitString& x, const BitString& seed) const {
  if (x.len() != n_ || seed.len() != d_) throw DomainError("LookupExtractor: shape mismatch");
  std::uint64_t idx = (x.to_uint() << d_) | seed.to_uint();
  return BitString::from_uint(table_[idx], m_);
}

void LookupExtractor::save(std::ostream& out) const {
  out << "srx-lookup-table v1\n";
  out << "n = " << n_ << "\n";
  out << "d = " << d_ << "\n";
  out << "m = " << m_ << "\n";
  out.precision(17);
  out << "k = " << claimed_k_ << "\n";
  out << "measured_eps = " << claimed_eps_ << "\n";
  dump_entries(out, table_, m_);
}

std::shared_ptr<LookupExtractor> LookupExtractor::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "srx-lookup-table v1")
    throw ParseError("lookup table: bad magic line");
  int n = std::stoi(read_header_value(in, "n"));
  int d = std::stoi(read_header_value(in, "d"));
  int m = std::stoi(read_header_value(in, "m"));
  double k = std::stod(read_header_value(in, "k"));
  double eps = std::stod(read_header_value(in, "measured_eps"));
  auto table = read_entries(in, std::size_t{1} << (n + d), m);
  return std::make_shared<LookupExtractor>(n, d, m, k, eps, std::move(table));
}

void LookupExtractor::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  save(out);
}

std::shared_ptr<LookupExtractor> LookupExtractor::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lookup table: " + path);
  return load(in);
}

FunctionExtractor::FunctionExtractor(int n, int d, int m,
                                     std::function<BitString(const BitString&, const BitString&)> fn,
                                     std::string kind)
    : StrongSeededExtractor(n, d, m, 0.0, 1.0), fn_(std::move(fn)), kind_(std::move(kind)) {}

BitString FunctionExtractor::eval(const BitString& x, const BitString& seed) const {
  if (x.len() != n_ || seed.len() != d_) throw DomainError("FunctionExtractor: shape mismatch");
  BitString out = fn_(x, seed);
  if (out.len() != m_) throw DomainError("FunctionExtractor: output length mismatch");
  return out;
}

std::shared_ptr<LookupExtractor> random_permutation_extractor(int n, int d, Rng& rng) {
  std::size_t domain = std::size_t{1} << n;
  std::vector<std::uint32_t> table(domain << d);
  std::vector<std::uint32_t> perm(domain);
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << d); ++r) {
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = domain - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.next_below(i + 1)]);
    for (std::size_t x = 0; x < domain; ++x) table[(x << d) | r] = perm[x];
  }
  return std::make_shared<LookupExtractor>(n, d, n, static_cast<double>(n), 0.0, std::move(table));
}

std::shared_ptr<LookupExtractor> random_lookup_extractor(int n, int d, int m, Rng& rng) {
  std::vector<std::uint32_t> table(std::size_t{1} << (n + d));
  for (auto& v : table) v = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << m));
  return std::make_shared<LookupExtractor>(n, d, m, 0.0, 1.0, std::move(table));
}

namespace {

// Exact strong/weak distance machinery over precomputed value tables.
struct FlatScan {
  int n, d, m, k;
  std::vector<std::uint32_t> vals;  // (x << d) | r -> output

  FlatScan(const StrongSeededExtractor& ext, int k_in) : n(ext.n()), d(ext.d()), m(ext.m()), k(k_in) {
    if (n > 16 || d > 16 || n + d > 26) throw GuardError("flat-source scan: 2^n * 2^d too large");
    vals.resize(std::size_t{1} << (n + d));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      BitString xb = BitString::from_uint(x, n);
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << d); ++r)
        vals[(x << d) | r] = static_cast<std::uint32_t>(
            ext.eval(xb, BitString::from_uint(r, d)).to_uint());
    }
  }

  // Strong distance of the flat source over `support` (element indices).
  double strong(const std::vector<int>& support) const {
    std::uint64_t seeds = std::uint64_t{1} << d;
    double inv_sup = 1.0 / static_cast<double>(support.size());
    double u = std::ldexp(1.0, -m);
    double total = 0.0;
    std::vector<int> counts(std::size_t{1} << m);
    for (std::uint64_t r = 0; r < seeds; ++r) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int x : support) ++counts[vals[(static_cast<std::uint64_t>(x) << d) | r]];
      double sum = 0.0;
      for (int c : counts) sum += std::fabs(static_cast<double>(c) * inv_sup - u);
      total += sum / 2.0;
    }
    return total / static_cast<double>(seeds);
  }

  double weak(const std::vector<int>& support) const {
    std::uint64_t seeds = std::uint64_t{1} << d;
    std::vector<int> counts(std::size_t{1} << m);
    for (std::uint64_t r = 0; r < seeds; ++r)
      for (int x : support) ++counts[vals[(static_cast<std::uint64_t>(x) << d) | r]];
    double inv = 1.0 / static_cast<double>(seeds * support.size());
    double u = std::ldexp(1.0, -m);
    double sum = 0.0;
    for (int c : counts) sum += std::fabs(static_cast<double>(c) * inv - u);
    return sum / 2.0;
  }
};

template <typename DistFn>
double worst_flat_distance_impl(const StrongSeededExtractor& ext, int k, double abort_above,
                                DistFn&& dist) {
  if (k > ext.n()) throw DomainError("worst flat distance: k > n");
  if (combination_count(ext.n(), k) > static_cast<double>(std::uint64_t{1} << 24))
    throw GuardError("worst flat distance: C(2^n, 2^k) exceeds the enumeration budget");
  double worst = 0.0;
  CombinationWalker walker(1 << ext.n(), 1 << k);
  do {
    worst = std::max(worst, dist(walker.idx));
    if (worst > abort_above) return worst;
  } while (walker.advance());
  return worst;
}

}  // namespace

double worst_flat_strong_distance(const StrongSeededExtractor& ext, int k, double abort_above) {
  FlatScan scan(ext, k);
  return worst_flat_distance_impl(ext, k, abort_above,
                                  [&](const std::vector<int>& s) { return scan.strong(s); });
}

double worst_flat_weak_distance(const StrongSeededExtractor& ext, int k, double abort_above) {
  FlatScan scan(ext, k);
  return worst_flat_distance_impl(ext, k, abort_above,
                                  [&](const std::vector<int>& s) { return scan.weak(s); });
}

SearchResult search_ideal_extractor(const SearchParams& params, Rng& rng) {
  if (params.n > 6 || params.k > 3)
    throw GuardError("search_ideal_extractor: guard requires n <= 6 and k <= 3");
  if (params.k > params.n || params.m < 1 || params.d < 0)
    throw DomainError("search_ideal_extractor: bad shape");
  if (combination_count(params.n, params.k) > static_cast<double>(std::uint64_t{1} << 24))
    throw GuardError("search_ideal_extractor: verification budget exceeded");

  std::vector<int> kinds;
  if (params.kind_random) kinds.push_back(0);
  if (params.kind_affine) kinds.push_back(1);
  if (params.kind_perm && params.m == params.n) kinds.push_back(2);
  if (kinds.empty()) throw DomainError("search_ideal_extractor: no candidate kinds enabled");

  std::size_t table_size = std::size_t{1} << (params.n + params.d);
  std::vector<std::uint32_t> table(table_size);
  double best_eps = 2.0;
  std::shared_ptr<LookupExtractor> best;
  std::int64_t trials_used = 0;

  for (std::int64_t trial = 0; trial < params.trials; ++trial) {
    ++trials_used;
    int kind = kinds[static_cast<std::size_t>(trial % static_cast<std::int64_t>(kinds.size()))];
    if (kind == 0) {
      for (auto& v : table)
        v = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << params.m));
    } else if (kind == 1) {
      // XOR-affine: output bit j of seed r is <a_{r,j}, x> ^ c_{r,j}.
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << params.d); ++r) {
        std::vector<std::uint64_t> masks(static_cast<std::size_t>(params.m));
        std::uint64_t offset = rng.next_below(std::uint64_t{1} << params.m);
        for (auto& mk : masks) mk = rng.next_below(std::uint64_t{1} << params.n);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << params.n); ++x) {
          std::uint32_t v = 0;
          for (int j = 0; j < params.m; ++j)
            v = (v << 1) |
                static_cast<std::uint32_t>(std::popcount(x & masks[static_cast<std::size_t>(j)]) & 1);
          table[(x << params.d) | r] = v ^ static_cast<std::uint32_t>(offset);
        }
      }
    } else {
      std::size_t domain = std::size_t{1} << params.n;
      std::vector<std::uint32_t> perm(domain);
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << params.d); ++r) {
        std::iota(perm.begin(), perm.end(), 0u);
        for (std::size_t i = domain - 1; i > 0; --i)
          std::swap(perm[i], perm[rng.next_below(i + 1)]);
        for (std::size_t x = 0; x < domain; ++x) table[(x << params.d) | r] = perm[x];
      }
    }

    LookupExtractor candidate(params.n, params.d, params.m, params.k, 1.0, table);
    double worst = worst_flat_strong_distance(candidate, params.k, best_eps);
    if (worst < best_eps) {
      best_eps = worst;
      best = std::make_shared<LookupExtractor>(params.n, params.d, params.m,
                                               static_cast<double>(params.k), worst, table);
      if (best_eps <= params.target_eps) break;
    }
  }

  if (!best || best_eps > params.target_eps)
    throw SearchError("search_ideal_extractor: no table met target " +
                          std::to_string(params.target_eps) + " within " +
                          std::to_string(params.trials) + " trials (best " +
                          std::to_string(best_eps) + ")",
                      best_eps);
  return SearchResult{best, best_eps, trials_used};
}

BadSetReport verify_bad_set_bound(const StrongSeededExtractor& ext, int k, double eps) {
  if (ext.m() > 3 || ext.n() > 10 || ext.d() > 16)
    throw GuardError("verify_bad_set_bound: guard requires m <= 3, n <= 10, d <= 16");

  std::uint64_t inputs = std::uint64_t{1} << ext.n();
  std::uint64_t seeds = std::uint64_t{1} << ext.d();
  std::uint64_t outputs = std::uint64_t{1} << ext.m();

  // counts[x][v] = number of seeds mapping x to v.
  std::vector<std::vector<std::uint64_t>> counts(inputs, std::vector<std::uint64_t>(outputs, 0));
  for (std::uint64_t x = 0; x < inputs; ++x) {
    BitString xb = BitString::from_uint(x, ext.n());
    for (std::uint64_t r = 0; r < seeds; ++r)
      ++counts[x][ext.eval(xb, BitString::from_uint(r, ext.d())).to_uint()];
  }

  BadSetReport report;
  report.bound = std::uint64_t{1} << k;
  for (std::uint64_t t_mask = 0; t_mask < (std::uint64_t{1} << outputs); ++t_mask) {
    int t_size = std::popcount(t_mask);
    // Pr[ext(x, R) in T] > |T|/2^m + eps, all in units of 1/(2^d * 2^m):
    // lhs * 2^m > |T| * 2^d + eps * 2^(d+m).
    double rhs = static_cast<double>(t_size) * static_cast<double>(seeds) +
                 eps * static_cast<double>(seeds) * static_cast<double>(outputs);
    int bad = 0;
    for (std::uint64_t x = 0; x < inputs; ++x) {
      std::uint64_t hits = 0;
      for (std::uint64_t v = 0; v < outputs; ++v)
        if ((t_mask >> v) & 1) hits += counts[x][v];
      if (static_cast<double>(hits * outputs) > rhs + 1e-9) ++bad;
    }
    if (bad > report.max_count) {
      report.max_count = bad;
      report.worst_T = t_mask;
    }
  }
  report.pass = static_cast<std::uint64_t>(report.max_count) <= report.bound;
  return report;
}

SRExtractor::SRExtractor(int n, int rows, int row_len, int m, double claimed_eps)
    : n_(n), rows_(rows), row_len_(row_len), m_(m), claimed_eps_(claimed_eps) {
  if (n < 1 || rows < 1 || row_len < 1 || m < 1) throw DomainError("SRExtractor: bad shape");
}

LookupSRExtractor::LookupSRExtractor(int n, int rows, int row_len, int m, double measured_eps,
                                     std::vector<std::uint32_t> table)
    : SRExtractor(n, rows, row_len, m, measured_eps), table_(std::move(table)) {
  int sr_bits = rows * row_len;
  if (n + sr_bits > 24) throw GuardError("LookupSRExtractor: table too large");
  if (table_.size() != (std::size_t{1} << (n + sr_bits)))
    throw DomainError("LookupSRExtractor: table size mismatch");
}

BitString LookupSRExtractor::eval(const BitString& x, const std::vector<BitString>& sr_rows) const {
  if (x.len() != n_ || static_cast<int>(sr_rows.size()) != rows_)
    throw DomainError("LookupSRExtractor: shape mismatch");
  for (const auto& row : sr_rows)
    if (row.len() != row_len_) throw DomainError("LookupSRExtractor: row length mismatch");
  std::uint64_t idx = x.to_uint();
  for (const auto& row : sr_rows) idx = (idx << row_len_) | row.to_uint();
  return BitString::from_uint(table_[idx], m_);
}

void LookupSRExtractor::save(std::ostream& out) const {
  out << "srx-sr-lookup-table v1\n";
  out << "n = " << n_ << "\n";
  out << "rows = " << rows_ << "\n";
  out << "row_len = " << row_len_ << "\n";
  out << "m = " << m_ << "\n";
  out.precision(17);
  out << "measured_eps = " << claimed_eps_ << "\n";
  dump_entries(out, table_, m_);
}

std::shared_ptr<LookupSRExtractor> LookupSRExtractor::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "srx-sr-lookup-table v1")
    throw ParseError("sr lookup table: bad magic line");
  int n = std::stoi(read_header_value(in, "n"));
  int rows = std::stoi(read_header_value(in, "rows"));
  int row_len = std::stoi(read_header_value(in, "row_len"));
  int m = std::stoi(read_header_value(in, "m"));
  double eps = std::stod(read_header_value(in, "measured_eps"));
  auto table = read_entries(in, std::size_t{1} << (n + rows * row_len), m);
  return std::make_shared<LookupSRExtractor>(n, rows, row_len, m, eps, std::move(table));
}

void LookupSRExtractor::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  save(out);
}

std::shared_ptr<LookupSRExtractor> LookupSRExtractor::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sr lookup table: " + path);
  return load(in);
}

FoldSRExtractor::FoldSRExtractor(std::shared_ptr<const StrongSeededExtractor> inner, int rows)
    : SRExtractor(inner->n(), rows, inner->d(), inner->m(), 1.0), inner_(std::move(inner)) {}

BitString FoldSRExtractor::eval(const BitString& x, const std::vector<BitString>& sr_rows) const {
  if (x.len() != n_ || static_cast<int>(sr_rows.size()) != rows_)
    throw DomainError("FoldSRExtractor: shape mismatch");
  BitString acc(m_);
  for (const auto& row : sr_rows) acc = acc ^ inner_->eval(x, row);
  return acc;
}

namespace {

// Iterates every assignment of deterministic maps f_j : {0,1}^rl -> {0,1}^rl
// for the non-good rows, encoded as mixed-radix counters.
struct MapFamily {
  int row_len;
  int others;
  std::uint64_t per_row;  // (2^rl)^(2^rl)
  std::vector<std::uint64_t> code;

  MapFamily(int row_len_in, int others_in) : row_len(row_len_in), others(others_in) {
    int points = 1 << row_len;
    double bits = static_cast<double>(points) * row_len * others;
    if (bits > 16.0) throw GuardError("SR verification family: map space exceeds 2^16");
    per_row = 1;
    for (int p = 0; p < points; ++p) per_row <<= row_len;
    code.assign(static_cast<std::size_t>(others), 0);
  }

  bool advance() {
    for (std::size_t j = 0; j < code.size(); ++j) {
      if (++code[j] < per_row) return true;
      code[j] = 0;
    }
    return false;
  }

  // Value of map j at point u.
  std::uint64_t apply(int j, std::uint64_t u) const {
    return (code[static_cast<std::size_t>(j)] >> (u * static_cast<std::uint64_t>(row_len))) &
           ((std::uint64_t{1} << row_len) - 1);
  }
};

}  // namespace

double worst_srext_distance(const SRExtractor& ext, int k, double abort_above) {
  int n = ext.n(), rows = ext.rows(), rl = ext.row_len(), m = ext.m();
  if (n > 6 || k > 3) throw GuardError("worst_srext_distance: guard requires n <= 6 and k <= 3");
  if (combination_count(n, k) > static_cast<double>(std::uint64_t{1} << 24))
    throw GuardError("worst_srext_distance: support enumeration budget exceeded");
  int sr_bits = rows * rl;
  if (n + sr_bits > 20) throw GuardError("worst_srext_distance: value table too large");

  // Materialize ext over its whole domain once; the fixture scan below is
  // then pure array work.
  std::vector<std::uint32_t> vals(std::size_t{1} << (n + sr_bits));
  {
    std::vector<BitString> row_vals(static_cast<std::size_t>(rows));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      BitString xb = BitString::from_uint(x, n);
      for (std::uint64_t sr = 0; sr < (std::uint64_t{1} << sr_bits); ++sr) {
        for (int r = 0; r < rows; ++r)
          row_vals[static_cast<std::size_t>(r)] =
              BitString::from_uint((sr >> ((rows - 1 - r) * rl)) & ((std::uint64_t{1} << rl) - 1), rl);
        vals[(x << sr_bits) | sr] = static_cast<std::uint32_t>(ext.eval(xb, row_vals).to_uint());
      }
    }
  }

  std::uint64_t points = std::uint64_t{1} << rl;
  double u_out = std::ldexp(1.0, -m);
  std::vector<int> counts(std::size_t{1} << m);
  std::vector<std::uint64_t> sr_index(points);

  double worst = 0.0;
  for (int good = 0; good < rows; ++good) {
    MapFamily family(rl, rows - 1);
    do {
      for (std::uint64_t u = 0; u < points; ++u) {
        std::uint64_t sr = 0;
        int other = 0;
        for (int r = 0; r < rows; ++r)
          sr = (sr << rl) | (r == good ? u : family.apply(other++, u));
        sr_index[u] = sr;
      }
      CombinationWalker supports(1 << n, 1 << k);
      do {
        std::fill(counts.begin(), counts.end(), 0);
        for (int xi : supports.idx) {
          std::uint64_t base = static_cast<std::uint64_t>(xi) << sr_bits;
          for (std::uint64_t u = 0; u < points; ++u) ++counts[vals[base | sr_index[u]]];
        }
        double inv = 1.0 / static_cast<double>(supports.idx.size() * points);
        double sum = 0.0;
        for (int c : counts) sum += std::fabs(static_cast<double>(c) * inv - u_out);
        worst = std::max(worst, sum / 2.0);
        if (worst > abort_above) return worst;
      } while (supports.advance());
    } while (family.advance());
  }
  return worst;
}

BasicExtSearchResult search_ideal_basicext(const BasicExtSearchParams& params, Rng& rng) {
  if (params.n > 6 || params.k > 3)
    throw GuardError("search_ideal_basicext: guard requires n <= 6 and k <= 3");
  int sr_bits = params.rows * params.row_len;
  if (params.n + sr_bits > 20) throw GuardError("search_ideal_basicext: table too large");

  std::size_t table_size = std::size_t{1} << (params.n + sr_bits);
  std::vector<std::uint32_t> table(table_size);
  double best_eps = 2.0;
  std::shared_ptr<LookupSRExtractor> best;
  std::int64_t trials_used = 0;

  for (std::int64_t trial = 0; trial < params.trials; ++trial) {
    ++trials_used;
    if (trial % 2 == 0) {
      for (auto& v : table)
        v = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << params.m));
    } else {
      // XOR-affine in the concatenated (x, rows) input.
      int width = params.n + sr_bits;
      std::vector<std::uint64_t> masks(static_cast<std::size_t>(params.m));
      std::uint64_t offset = rng.next_below(std::uint64_t{1} << params.m);
      for (auto& mk : masks) mk = rng.next_below(std::uint64_t{1} << width);
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << width); ++w) {
        std::uint32_t v = 0;
        for (int j = 0; j < params.m; ++j)
          v = (v << 1) |
              static_cast<std::uint32_t>(std::popcount(w & masks[static_cast<std::size_t>(j)]) & 1);
        table[w] = v ^ static_cast<std::uint32_t>(offset);
      }
    }

    LookupSRExtractor candidate(params.n, params.rows, params.row_len, params.m, 1.0, table);
    double worst = worst_srext_distance(candidate, params.k, best_eps);
    if (worst < best_eps) {
      best_eps = worst;
      best = std::make_shared<LookupSRExtractor>(params.n, params.rows, params.row_len, params.m,
                                                 worst, table);
      if (best_eps <= params.target_eps) break;
    }
  }

  if (!best || best_eps > params.target_eps)
    throw SearchError("search_ideal_basicext: no table met target " +
                          std::to_string(params.target_eps) + " (best " +
                          std::to_string(best_eps) + ")",
                      best_eps);
  return BasicExtSearchResult{best, best_eps, trials_used};
}

std::shared_ptr<SRExtractor> fold_basicext(std::shared_ptr<const StrongSeededExtractor> inner,
                                           int rows) {
  return std::make_shared<FoldSRExtractor>(std::move(inner), rows);
}

}  // namespace srx
