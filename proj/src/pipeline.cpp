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

#include "srx/pipeline.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "srx/error.hpp"

namespace srx {

namespace {

int ceil_log2(double x) {
  int e = 0;
  while (std::exp2(e) < x) ++e;
  return e;
}

void add_check(ConstraintReport& report, const std::string& name, const std::string& formula,
               double lhs, double rhs, bool strict_greater = false, bool advisory = false) {
  bool pass = strict_greater ? lhs > rhs : lhs >= rhs;
  report.checks.push_back({name, formula, lhs, rhs, pass, lhs - rhs, advisory});
  if (!pass && !advisory) report.all_pass = false;
}

}  // namespace

std::string ConstraintReport::to_string() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.pass ? "pass " : (c.advisory ? "warn " : "FAIL ")) << c.name << ": " << c.formula
        << "  [lhs=" << c.lhs << " rhs=" << c.rhs << " margin=" << c.margin
        << (c.advisory ? " advisory" : "") << "]\n";
  }
  out << (all_pass ? "all constraints pass" : "constraint violations present") << "\n";
  return out.str();
}

DerivedParams derive_params(double n, double k, double alpha, double beta, double gamma,
                            ParamMode mode, const ParamConstants& constants,
                            const ToyOverrides& overrides) {
  if (!(n >= 2.0) || n > 1e300) throw DomainError("derive_params: n out of range");
  if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
    throw DomainError("derive_params: need 0 < alpha < beta < 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("derive_params: gamma in (0, 1)");
  if (k < 1.0) throw DomainError("derive_params: k must be >= 1");

  ParamSet p;
  p.n = n;
  p.k = k;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.mode = mode;
  p.constants = constants;
  p.overrides = overrides;

  double k_alpha = std::pow(k, alpha);
  p.h = 1 << ceil_log2(k_alpha);
  if (p.h < 2) p.h = 2;
  p.l = ceil_log2(static_cast<double>(p.h));
  double ell_exact = std::ceil(std::pow(k, beta));
  p.ell = static_cast<int>(std::min(ell_exact, std::exp2(30)));
  p.d = overrides.d.value_or(ceil_log2(n));
  if (p.d < 1) p.d = 1;
  if (p.d <= 30) {
    p.N = 1 << p.d;
    p.r = overrides.r.value_or(bin_count_from_params(p.N, p.h, gamma));
  }
  p.b = (p.d + p.l - 1) / p.l;
  p.t = p.h;
  p.eps_prime = std::exp2(-ell_exact / constants.eps_exponent);

  auto sat_ceil = [](double x) {
    return static_cast<int>(std::ceil(std::min(x, 1e9)));
  };
  p.m2 = overrides.m2.value_or(sat_ceil(std::sqrt(k)));
  p.m3 = overrides.m3.value_or(sat_ceil(1.9 * k));
  p.m_out = overrides.m_out.value_or(sat_ceil(0.9 * k));

  double log_n = std::log2(n);
  double log_inv_eps = ell_exact / constants.eps_exponent;
  double h_d = static_cast<double>(p.h);
  double ell_d = ell_exact;
  double b_d = static_cast<double>(p.b);

  ConstraintReport report;
  add_check(report, "laext-entropy", "k >= 2(bh+2)(h^2+12) ell", k,
            2.0 * (b_d * h_d + 2.0) * (h_d * h_d + 12.0) * ell_d);
  add_check(report, "row-width", "ell >= C h log2 n", ell_d, constants.c_ell * h_d * log_n);
  add_check(report, "sr-entropy", "k >= (h+1) ell", k, (h_d + 1.0) * ell_d);
  add_check(report, "bin-error", "log2(1/eps') > 6 h log2 N", log_inv_eps,
            6.0 * h_d * static_cast<double>(p.d), true);
  add_check(report, "bin-entropy", "k > 20 h (log2 n + log2(1/eps'))", k,
            20.0 * h_d * (log_n + log_inv_eps), true);
  add_check(report, "bin-width", "m > 10 (log2 n + log2(1/eps'))", ell_d,
            10.0 * (log_n + log_inv_eps), true);
  add_check(report, "h-floor", "h >= C1", h_d, constants.c1_h);
  add_check(report, "h-range", "k^alpha <= h < 2 k^alpha", h_d < 2.0 * k_alpha ? h_d : -1.0,
            k_alpha);
  // Advisory rows: constants the analysis treats as proof artifacts. They
  // are recorded with margins but never fatal.
  add_check(report, "laext-advisory", "k > h t ell + 10 ell + 2 log2(1/eps')", k,
            h_d * static_cast<double>(p.t) * ell_d + 10.0 * ell_d + 2.0 * log_inv_eps, true,
            /*advisory=*/true);
  add_check(report, "loop-width-advisory", "ell <= k / (2h)", k / (2.0 * h_d), ell_d, false,
            /*advisory=*/true);

  if (mode == ParamMode::strict && !report.all_pass)
    throw ConstraintError("derive_params: constraint violations in strict mode",
                          report.to_string());
  return DerivedParams{std::move(p), std::move(report)};
}

BextExponents bext_exponents(double eta) {
  if (eta <= 0.0) throw DomainError("bext_exponents: eta must be positive");
  BextExponents e;
  e.mu = 0.95 * eta;
  e.alpha = e.mu / (6.0 * (2.0 + e.mu));
  e.beta = (6.0 + 2.0 * e.mu) / (6.0 * (2.0 + e.mu));
  e.gamma = eta / 70.0;
  e.t_blocks = static_cast<int>(std::ceil(7.0 / eta)) + 1;
  return e;
}

ProofScanReport scan_proof_inequalities(double alpha, double beta, double c_ell, double coeff,
                                        double k_exponent, double n_lo, double n_hi,
                                        int grid_points) {
  if (grid_points < 2) throw DomainError("scan_proof_inequalities: need at least 2 grid points");
  ProofScanReport report;
  double log_lo = std::log(n_lo), log_hi = std::log(n_hi);
  for (int i = 0; i < grid_points; ++i) {
    double n = std::exp(log_lo + (log_hi - log_lo) * i / (grid_points - 1));
    double log_n = std::log2(n);
    double k = coeff * std::pow(log_n, k_exponent);
    ProofScanEntry e;
    e.n = n;
    e.k = k;
    e.entropy_ok = std::pow(k, 1.0 - 3.0 * alpha - beta) >= 24.0 * log_n;
    e.width_ok = std::pow(k, beta - alpha) >= c_ell * log_n;
    report.grid.push_back(e);
  }
  for (std::size_t i = report.grid.size(); i-- > 0;) {
    if (report.grid[i].entropy_ok && report.grid[i].width_ok) {
      report.c0 = report.grid[i].n;
      report.found = true;
    } else {
      break;
    }
  }
  return report;
}

SSRConfig ExtractorSuite::ssr_config(const ParamSet& p) const {
  if (p.N < 1) throw DomainError("ssr_config: rows are not materializable at this scale");
  AltExtConfig alt{la_q, la_w, p.ell, p.t};
  std::optional<int> slice1 = p.overrides.slice1_len;
  if (!slice1.has_value()) slice1 = (p.h + 12) * p.ell;
  if (p.overrides.bridge_m && bridge && bridge->m() != *p.overrides.bridge_m)
    throw DomainError("ssr_config: bridge extractor output != configured bridge_m");
  return SSRConfig::make(p.h, p.ell, p.N, std::move(alt), bridge, slice1);
}

namespace {

SRMatrix select_rows(const SRMatrix& z, const std::vector<int>& survivors) {
  SRMatrix out;
  out.rows = static_cast<int>(survivors.size());
  out.row_len = z.row_len;
  for (int p : survivors) out.v.push_back(z.v[static_cast<std::size_t>(p - 1)]);
  return out;
}

void pad_rows(SRMatrix& m, int target) {
  while (m.rows < target) {
    m.v.push_back(BitString(m.row_len));
    ++m.rows;
  }
}

void require_shape(bool ok, const std::string& what) {
  if (!ok) throw DomainError("pipeline: " + what);
}

void dump_matrix(std::ostream& out, const std::string& name, const SRMatrix& m) {
  out << name << " (" << m.rows << " x " << m.row_len << ")\n";
  for (const auto& row : m.v) out << "  " << row.to_hex() << "\n";
}

}  // namespace

IExtTrace iext(const ParamSet& params, const ExtractorSuite& suite, const BitString& x,
               const BitString& y1, const BitString& y2) {
  require_shape(suite.sr1 && suite.sr2 && suite.sr3 && suite.la_q && suite.la_w && suite.step4 &&
                    suite.step5 && suite.basic,
                "iext: extractor suite incomplete");
  if (params.mode == ParamMode::strict && !suite.basic->sound())
    throw ConstraintError("iext: strict mode refuses an unsound SR-extractor substitute",
                          suite.basic->kind());

  SSRConfig cfg = suite.ssr_config(params);
  require_shape(suite.step4->d() == params.ell, "step4 seed length must be ell");
  require_shape(suite.step4->m() == params.m2, "step4 must output m2 bits");
  require_shape(suite.step4->n() == y2.len(), "step4 input length != |y2|");
  require_shape(suite.step5->d() == params.m2, "step5 seed length must be m2");
  require_shape(suite.step5->m() == params.m3, "step5 must output m3 bits");
  require_shape(suite.step5->n() == x.len(), "step5 input length != |x|");
  require_shape(suite.basic->n() == y2.len(), "basicext input length != |y2|");
  require_shape(suite.basic->row_len() == params.m3, "basicext row length != m3");
  require_shape(suite.basic->m() == params.m_out, "basicext output length != m_out");

  IExtTrace trace;
  trace.params = params;

  // Step 1: somewhere-random generation from (x, y1).
  trace.sr_stage = sr(cfg, *suite.sr1, *suite.sr2, *suite.sr3, x, y1);

  // Step 2: lightest bin over the Z rows.
  trace.bin = lightest_bin(trace.sr_stage.z.v, params.r);

  // Step 3: keep surviving rows, pad with all-zero rows to floor(N/r).
  // N1 <= floor(N/r) holds whenever at least two bins are occupied; on
  // degenerate inputs the lightest nonempty bin can be larger, and the
  // overflow is dropped (ascending order) to keep the output domain fixed.
  int n1_target = params.N / params.r;
  trace.z1 = select_rows(trace.sr_stage.z, trace.bin.survivors);
  if (trace.z1.rows > n1_target) {
    trace.z1.v.resize(static_cast<std::size_t>(n1_target));
    trace.z1.rows = n1_target;
  }
  pad_rows(trace.z1, n1_target);
  require_shape(suite.basic->rows() == trace.z1.rows, "basicext row count != N1");

  // Step 4: extract from y2 with each surviving row as seed.
  trace.z2.rows = trace.z1.rows;
  trace.z2.row_len = params.m2;
  for (const auto& row : trace.z1.v) trace.z2.v.push_back(suite.step4->eval(y2, row));

  // Step 5: extract from x with each Z2 row as seed.
  trace.z3.rows = trace.z1.rows;
  trace.z3.row_len = params.m3;
  for (const auto& row : trace.z2.v) trace.z3.v.push_back(suite.step5->eval(x, row));

  // Step 6: the injected SR-extractor.
  trace.v = suite.basic->eval(y2, trace.z3.v);
  return trace;
}

void IExtTrace::dump(std::ostream& out, const ConstraintReport* report) const {
  out << "[params]\n";
  out << "n = " << params.n << "\nk = " << params.k << "\nh = " << params.h
      << "\nell = " << params.ell << "\nb = " << params.b << "\nl = " << params.l
      << "\nd = " << params.d << "\nN = " << params.N << "\nr = " << params.r
      << "\nt = " << params.t << "\nm2 = " << params.m2 << "\nm3 = " << params.m3
      << "\nm_out = " << params.m_out << "\n";
  if (report) {
    out << "[constraints]\n" << report->to_string();
  }
  out << "[stage 1: somewhere-random generation]\n";
  dump_matrix(out, "W", sr_stage.w);
  dump_matrix(out, "Ybar", sr_stage.ybar);
  dump_matrix(out, "Z", sr_stage.z);
  out << "[stage 2: lightest bin]\n";
  out << "bin_counts =";
  for (int c : bin.bin_counts) out << " " << c;
  out << "\nchosen_bin = " << bin.chosen_bin << "\nsurvivors =";
  for (int s : bin.survivors) out << " " << s;
  out << "\n";
  out << "[stage 3: surviving rows]\n";
  dump_matrix(out, "Z1", z1);
  out << "[stage 4: second-block extraction]\n";
  dump_matrix(out, "Z2", z2);
  out << "[stage 5: first-source extraction]\n";
  dump_matrix(out, "Z3", z3);
  out << "[stage 6: output]\n";
  out << "V = " << v.to_hex() << "\n";
}

BExtTrace bext(const ParamSet& params, const ExtractorSuite& suite,
               const std::vector<BitString>& x_blocks, const std::vector<BitString>& y_blocks) {
  require_shape(suite.sr1 && suite.sr2 && suite.sr3 && suite.la_q && suite.la_w && suite.loop &&
                    suite.final_ext && suite.basic,
                "bext: extractor suite incomplete");
  if (params.mode == ParamMode::strict && !suite.basic->sound())
    throw ConstraintError("bext: strict mode refuses an unsound SR-extractor substitute",
                          suite.basic->kind());
  if (params.t_blocks > 0) {
    if (static_cast<int>(x_blocks.size()) < params.t_blocks ||
        static_cast<int>(y_blocks.size()) < params.t_blocks)
      throw DomainError("bext: need at least ceil(7/eta)+1 = " + std::to_string(params.t_blocks) +
                        " blocks per source");
  }
  if (x_blocks.empty() || y_blocks.empty()) throw DomainError("bext: need blocks");
  require_shape(suite.loop->d() == params.ell, "loop extractor seed length must be ell");
  require_shape(suite.loop->m() == params.ell, "loop extractor must output ell bits");
  require_shape(suite.final_ext->d() == params.ell, "final extractor seed length must be ell");
  require_shape(suite.final_ext->m() == params.m2, "final extractor must output m2 bits");

  int stop_rows = params.overrides.stop_rows.value_or(static_cast<int>(
      std::floor(16.0 * std::pow(static_cast<double>(params.h), 3.0) / (params.gamma * params.gamma))));

  BExtTrace trace;
  trace.params = params;
  SSRConfig cfg = suite.ssr_config(params);
  trace.sr_stage = sr(cfg, *suite.sr1, *suite.sr2, *suite.sr3, x_blocks[0], y_blocks[0]);

  SRMatrix z = trace.sr_stage.z;
  int v_y = 1;
  std::size_t xi = 1, yi = 1;
  int round = 0;
  while (z.rows > stop_rows) {
    ++round;
    int r_t = params.overrides.r.value_or(bin_count_from_params(z.rows, params.h, params.gamma));
    if (r_t < 2)
      throw GuardError("bext: lightest bin stalled at round " + std::to_string(round) +
                       " (r = 1 with N_t = " + std::to_string(z.rows) + ")");
    BExtRound rec;
    rec.n_before = z.rows;
    rec.r = r_t;
    rec.bin = lightest_bin(z.v, r_t);
    SRMatrix selected = select_rows(z, rec.bin.survivors);

    const BitString* block = nullptr;
    if (v_y == 1) {
      if (yi >= y_blocks.size())
        throw DomainError("bext: source Y exhausted at round " + std::to_string(round));
      block = &y_blocks[yi++];
      rec.consumed = 'Y';
      rec.block_index = static_cast<int>(yi);
      v_y = 0;
    } else {
      if (xi >= x_blocks.size())
        throw DomainError("bext: source X exhausted at round " + std::to_string(round));
      block = &x_blocks[xi++];
      rec.consumed = 'X';
      rec.block_index = static_cast<int>(xi);
      v_y = 1;
    }
    require_shape(suite.loop->n() == block->len(), "loop extractor input length != block length");

    SRMatrix next;
    next.rows = selected.rows;
    next.row_len = params.ell;
    for (const auto& row : selected.v) next.v.push_back(suite.loop->eval(*block, row));
    rec.n_after = next.rows;
    if (rec.n_after >= rec.n_before)
      throw GuardError("bext: no row-count progress at round " + std::to_string(round) +
                       " (all rows landed in one bin)");
    rec.z = next;
    trace.rounds.push_back(std::move(rec));
    z = std::move(next);
  }

  // Terminal step: when v_y = 1 the roles of X and Y switch.
  trace.role_swap = (v_y == 1);
  const BitString& last_x = x_blocks[xi - 1];
  const BitString& last_y = y_blocks[yi - 1];
  const BitString& ext_from = trace.role_swap ? last_y : last_x;
  const BitString& basic_from = trace.role_swap ? last_x : last_y;
  require_shape(suite.final_ext->n() == ext_from.len(), "final extractor input length mismatch");

  pad_rows(z, stop_rows);
  trace.z_final.rows = z.rows;
  trace.z_final.row_len = params.m2;
  for (const auto& row : z.v) trace.z_final.v.push_back(suite.final_ext->eval(ext_from, row));

  require_shape(suite.basic->n() == basic_from.len(), "basicext input length mismatch");
  require_shape(suite.basic->rows() == trace.z_final.rows, "basicext row count mismatch");
  require_shape(suite.basic->row_len() == params.m2, "basicext row length != m2");
  trace.w = suite.basic->eval(basic_from, trace.z_final.v);
  return trace;
}

void BExtTrace::dump(std::ostream& out) const {
  out << "[params]\n";
  out << "h = " << params.h << "\nell = " << params.ell << "\ngamma = " << params.gamma
      << "\neta = " << params.eta << "\nt_blocks = " << params.t_blocks << "\n";
  out << "[stage 1: somewhere-random generation]\n";
  dump_matrix(out, "Z1", sr_stage.z);
  int i = 0;
  for (const auto& r : rounds) {
    out << "[round " << ++i << "]\n";
    out << "N_before = " << r.n_before << "\nr = " << r.r << "\nchosen_bin = " << r.bin.chosen_bin
        << "\nconsumed = " << r.consumed << r.block_index << "\nN_after = " << r.n_after << "\n";
    dump_matrix(out, "Z", r.z);
  }
  out << "[terminal]\n";
  out << "role_swap = " << (role_swap ? "true" : "false") << "\n";
  dump_matrix(out, "Zfinal", z_final);
  out << "W = " << w.to_hex() << "\n";
}

}  // namespace srx
