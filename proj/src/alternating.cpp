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

#include "srx/alternating.hpp"

#include "srx/error.hpp"

namespace srx {

void AltExtConfig::validate() const {
  if (!ext_q || !ext_w) throw DomainError("AltExtConfig: missing extractor");
  if (ell < 1 || t < 1) throw DomainError("AltExtConfig: ell and t must be positive");
  if (ext_q->m() != ell || ext_w->m() != ell)
    throw DomainError("AltExtConfig: extractor outputs must be ell bits");
  if (ext_q->d() != ell || ext_w->d() != ell)
    throw DomainError("AltExtConfig: extractor seeds must be ell bits");
}

namespace {

BitString pad_q(const AltExtConfig& cfg, const BitString& q) {
  if (q.len() > cfg.ext_q->n())
    throw DomainError("alternating extraction: Q-side value longer than ext_q.n");
  if (q.len() == cfg.ext_q->n()) return q;
  return concat(q, BitString(cfg.ext_q->n() - q.len()));
}

}  // namespace

Transcript alternating_extraction(const AltExtConfig& cfg, const BitString& x, const BitString& q,
                                  const BitString& s1) {
  cfg.validate();
  if (s1.len() != cfg.ell) throw DomainError("alternating extraction: s1 length != ell");
  if (x.len() != cfg.ext_w->n()) throw DomainError("alternating extraction: x length != ext_w.n");
  BitString q_pad = pad_q(cfg, q);

  Transcript tr;
  tr.s.reserve(static_cast<std::size_t>(cfg.t));
  tr.r.reserve(static_cast<std::size_t>(cfg.t));
  BitString s = s1;
  for (int i = 1; i <= cfg.t; ++i) {
    tr.s.push_back(s);
    BitString r = cfg.ext_w->eval(x, s);
    tr.r.push_back(r);
    if (i < cfg.t) s = cfg.ext_q->eval(q_pad, r);
  }
  return tr;
}

std::vector<BitString> la_ext(const AltExtConfig& cfg, const BitString& x, const BitString& y) {
  if (y.len() < cfg.ell) throw DomainError("la_ext: y shorter than ell bits");
  return alternating_extraction(cfg, x, y, y.prefix(cfg.ell)).r;
}

LookaheadReport laext_lookahead_test(
    const AltExtConfig& cfg, const DiscreteSource& source_x, const DiscreteSource& seed_source,
    const std::vector<std::function<BitString(const BitString&)>>& family, int j,
    std::uint64_t budget) {
  cfg.validate();
  if (family.empty()) throw DomainError("laext_lookahead_test: empty family");
  if (j < 0 || j >= cfg.t) throw DomainError("laext_lookahead_test: j must be in [0, t-1]");

  // Joint variables: seed, then rounds 1..j of every party, then the real
  // party's round j+1.
  TupleMap f = [&](const std::vector<BitString>& in) {
    const BitString& x = in[0];
    const BitString& u = in[1];
    std::vector<BitString> out;
    out.push_back(u);
    std::vector<BitString> first;
    for (std::size_t p = 0; p < family.size(); ++p) {
      std::vector<BitString> r = la_ext(cfg, x, family[p](u));
      for (int round = 0; round < j; ++round) out.push_back(r[static_cast<std::size_t>(round)]);
      if (p == 0) first = std::move(r);
    }
    out.push_back(first[static_cast<std::size_t>(j)]);
    return out;
  };

  JointTable joint = push_forward(f, {source_x, seed_source}, budget);
  LookaheadReport report;
  report.j = j;
  report.distance = conditional_uniform_distance(joint, static_cast<int>(joint.var_lens.size()) - 1);
  return report;
}

}  // namespace srx
