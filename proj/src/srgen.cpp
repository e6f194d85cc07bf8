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

#include "srx/srgen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "srx/error.hpp"

namespace srx {

void SRMatrix::validate() const {
  if (static_cast<int>(v.size()) != rows) throw DomainError("SRMatrix: row count mismatch");
  for (const auto& row : v)
    if (row.len() != row_len) throw DomainError("SRMatrix: row length mismatch");
}

void SRMatrix::dump(std::ostream& out) const {
  out << rows << " " << row_len << "\n";
  for (const auto& row : v) out << row.to_hex() << "\n";
}

SRMatrix SRMatrix::load(std::istream& in) {
  SRMatrix m;
  if (!(in >> m.rows >> m.row_len)) throw ParseError("SRMatrix: bad header");
  std::string tok;
  for (int i = 0; i < m.rows; ++i) {
    if (!(in >> tok)) throw ParseError("SRMatrix: truncated dump");
    m.v.push_back(BitString::parse_hex(tok));
  }
  m.validate();
  return m;
}

SSRConfig SSRConfig::make(int h, int ell, int N, AltExtConfig laext,
                          std::shared_ptr<const StrongSeededExtractor> bridge,
                          std::optional<int> slice1_len) {
  SSRConfig cfg;
  cfg.h = h;
  cfg.ell = ell;
  cfg.N = N;
  cfg.l = 0;
  while ((1 << cfg.l) < h) ++cfg.l;
  cfg.d = 0;
  while ((1 << cfg.d) < N) ++cfg.d;
  cfg.b = (cfg.d + cfg.l - 1) / cfg.l;
  cfg.slice1_len = slice1_len.value_or((h + 12) * ell);
  cfg.laext = std::move(laext);
  cfg.bridge = std::move(bridge);
  cfg.validate();
  return cfg;
}

void SSRConfig::validate() const {
  if (h < 2 || (1 << l) != h) throw DomainError("SSRConfig: h must be a power of two >= 2");
  if (N < 1 || (1 << d) != N) throw DomainError("SSRConfig: N must be a power of two");
  if (ell < 1) throw DomainError("SSRConfig: ell must be positive");
  laext.validate();
  if (laext.t != h) throw DomainError("SSRConfig: laExt round count must equal h");
  if (laext.ell != ell) throw DomainError("SSRConfig: laExt width must equal ell");
  if (slice1_len < ell) throw DomainError("SSRConfig: slice1_len must be >= ell");
  if (b > 1) {
    if (!bridge) throw DomainError("SSRConfig: bridge extractor required when b > 1");
    if (bridge->d() != ell) throw DomainError("SSRConfig: bridge seed length must be ell");
    if (bridge->m() < ell) throw DomainError("SSRConfig: bridge output must be >= ell bits");
  }
}

SRMatrix ssr(const SSRConfig& cfg, const BitString& x, const SRMatrix& y_rows) {
  cfg.validate();
  y_rows.validate();
  if (y_rows.rows != cfg.N) throw DomainError("ssr: y_rows must have N rows");
  if (y_rows.row_len < cfg.slice1_len)
    throw DomainError("ssr: rows have " + std::to_string(y_rows.row_len) +
                      " bits but the first slice needs " + std::to_string(cfg.slice1_len));
  if (cfg.b > 1 && cfg.bridge->n() != y_rows.row_len)
    throw DomainError("ssr: bridge extractor input length != row length");

  SRMatrix z;
  z.rows = cfg.N;
  z.row_len = cfg.ell;
  z.v.reserve(static_cast<std::size_t>(cfg.N));
  for (int i = 1; i <= cfg.N; ++i) {
    BlockIndex bi = decompose_index(static_cast<std::uint64_t>(i), cfg.d, cfg.l);
    const BitString& y_row = y_rows.v[static_cast<std::size_t>(i - 1)];
    BitString slice = y_row.prefix(cfg.slice1_len);
    for (int j = 1; j < bi.b; ++j) {
      std::vector<BitString> r = la_ext(cfg.laext, x, slice);
      const BitString& picked = r[static_cast<std::size_t>(bi.inds[static_cast<std::size_t>(j - 1)] - 1)];
      slice = cfg.bridge->eval(y_row, picked);
    }
    std::vector<BitString> r = la_ext(cfg.laext, x, slice);
    z.v.push_back(r[static_cast<std::size_t>(bi.inds[static_cast<std::size_t>(bi.b - 1)] - 1)]);
  }
  return z;
}

SrOutput sr(const SSRConfig& cfg, const StrongSeededExtractor& ext1,
            const StrongSeededExtractor& ext2, const StrongSeededExtractor& ext3,
            const BitString& x, const BitString& y) {
  cfg.validate();
  if (ext1.d() != cfg.d) throw DomainError("sr: ext1 seed length must equal d = log2 N");
  if (ext1.m() != ext2.d()) throw DomainError("sr: ext1 output must seed ext2");
  if (ext2.m() != cfg.ell) throw DomainError("sr: ext2 must output ell bits");
  if (ext3.d() != cfg.ell) throw DomainError("sr: ext3 seed length must be ell");
  if (y.len() != ext1.n() || y.len() != ext3.n()) throw DomainError("sr: y length mismatch");
  if (x.len() != ext2.n()) throw DomainError("sr: x length mismatch");

  SrOutput out;
  out.w.rows = cfg.N;
  out.w.row_len = cfg.ell;
  out.ybar.rows = cfg.N;
  out.ybar.row_len = ext3.m();
  for (int i = 1; i <= cfg.N; ++i) {
    BitString r_i = BitString::from_uint(static_cast<std::uint64_t>(i - 1), cfg.d);
    BitString w_i = ext2.eval(x, ext1.eval(y, r_i));
    out.w.v.push_back(w_i);
    out.ybar.v.push_back(ext3.eval(y, w_i));
  }
  out.z = ssr(cfg, x, out.ybar);
  return out;
}

SrQualityReport sr_quality_test(const SSRConfig& cfg, const StrongSeededExtractor& ext1,
                                const StrongSeededExtractor& ext2,
                                const StrongSeededExtractor& ext3, const DiscreteSource& source_x,
                                const DiscreteSource& source_y, double tau_row, double tau_joint,
                                int subsets, Rng& rng, std::uint64_t budget) {
  if (!source_x.exact() || !source_y.exact())
    throw DomainError("sr_quality_test: sources must be exact");
  std::uint64_t per_y = source_x.entries().size() * static_cast<std::uint64_t>(cfg.N);
  if (per_y * source_y.entries().size() > budget)
    throw GuardError("sr_quality_test: enumeration budget exceeded");

  SrQualityReport report;
  for (const auto& [y, py] : source_y.entries()) {
    // Conditioned on Y = y, both W and Z are deterministic in X. One pass
    // over supp(X) collects every row distribution and the Z matrix.
    std::vector<std::map<BitString, double>> w_dist(static_cast<std::size_t>(cfg.N));
    std::vector<std::pair<SRMatrix, double>> z_by_x;
    for (const auto& [x, px] : source_x.entries()) {
      SrOutput o = sr(cfg, ext1, ext2, ext3, x, y);
      for (int i = 0; i < cfg.N; ++i)
        w_dist[static_cast<std::size_t>(i)][o.w.v[static_cast<std::size_t>(i)]] += px;
      z_by_x.emplace_back(std::move(o.z), px);
    }

    SrQualityEntry entry;
    entry.y = y;
    entry.prob = py;
    std::vector<int> t_rows;
    double u = std::ldexp(1.0, -cfg.ell);
    for (int i = 0; i < cfg.N; ++i) {
      double sum = 0.0;
      for (const auto& [v, p] : w_dist[static_cast<std::size_t>(i)]) sum += std::fabs(p - u);
      sum += (std::ldexp(1.0, cfg.ell) - static_cast<double>(w_dist[static_cast<std::size_t>(i)].size())) * u;
      if (sum / 2.0 <= tau_row) t_rows.push_back(i);
    }
    entry.t_size = static_cast<int>(t_rows.size());

    bool joints_ok = true;
    if (entry.t_size >= cfg.h) {
      // All size-h subsets of T when few enough, otherwise a sample.
      std::vector<std::vector<int>> picks;
      double n_subsets = 1.0;
      for (int i = 0; i < cfg.h; ++i)
        n_subsets *= static_cast<double>(entry.t_size - i) / static_cast<double>(i + 1);
      if (n_subsets <= static_cast<double>(subsets)) {
        std::vector<int> pick(static_cast<std::size_t>(cfg.h));
        for (int i = 0; i < cfg.h; ++i) pick[static_cast<std::size_t>(i)] = i;
        for (;;) {
          picks.push_back(pick);
          int j = cfg.h - 1;
          while (j >= 0 && pick[static_cast<std::size_t>(j)] == entry.t_size - cfg.h + j) --j;
          if (j < 0) break;
          ++pick[static_cast<std::size_t>(j)];
          for (int t2 = j + 1; t2 < cfg.h; ++t2)
            pick[static_cast<std::size_t>(t2)] = pick[static_cast<std::size_t>(t2 - 1)] + 1;
        }
      } else {
        std::set<std::vector<int>> seen;
        while (static_cast<int>(seen.size()) < subsets) {
          std::set<int> s;
          while (static_cast<int>(s.size()) < cfg.h)
            s.insert(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(entry.t_size))));
          seen.insert(std::vector<int>(s.begin(), s.end()));
        }
        picks.assign(seen.begin(), seen.end());
      }

      for (const auto& pick : picks) {
        JointTable joint;
        joint.var_lens.assign(static_cast<std::size_t>(cfg.h), cfg.ell);
        for (const auto& [zm, px] : z_by_x) {
          std::vector<BitString> parts;
          parts.reserve(pick.size());
          for (int p : pick)
            parts.push_back(zm.v[static_cast<std::size_t>(t_rows[static_cast<std::size_t>(p)])]);
          joint.add(concat(parts), px);
        }
        double dist = distance_from_uniform(joint);
        entry.worst_joint = std::max(entry.worst_joint, dist);
        if (dist > tau_joint) joints_ok = false;
      }
      entry.subsets_tested = static_cast<int>(picks.size());
    }

    entry.pass = entry.t_size * 3 >= 2 * cfg.N && joints_ok;
    if (entry.pass) report.good_mass += py;
    report.per_y.push_back(std::move(entry));
  }
  return report;
}

}  // namespace srx
