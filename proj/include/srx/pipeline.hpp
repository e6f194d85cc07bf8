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

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srx/lightest_bin.hpp"
#include "srx/srgen.hpp"

namespace srx {

enum class ParamMode { strict, relaxed };

/// Constants the analysis leaves unspecified; all exposed as configuration
/// with documented defaults.
struct ParamConstants {
  double c_ell = 8.0;        // ell >= c_ell * h * log2 n
  double c1_h = 2.0;         // h >= c1_h
  double eps_exponent = 12;  // eps' = 2^(-ell / eps_exponent)
  double laext_const = 4.0;  // look-ahead bound c * t * eps
  double hwise_const = 4.0;  // joint bound c * b * h^2 * eps
};

/// Desk-scale overrides for quantities whose paper values are unreachable at
/// toy sizes (slice widths, per-stage output lengths, bin counts). Unset
/// fields fall back to the derived values.
struct ToyOverrides {
  std::optional<int> d;           // log2 N (defaults to ceil(log2 n))
  std::optional<int> slice1_len;  // default (h+12)*ell
  std::optional<int> bridge_m;    // default (h^2+12)*ell
  std::optional<int> m2;          // default ceil(sqrt(k)) in iext, ceil(1.9k) in bext
  std::optional<int> m3;          // default ceil(1.9k)
  std::optional<int> m_out;
  std::optional<int> r;           // lightest-bin count override
  std::optional<int> stop_rows;   // bext loop guard, default floor(16h^3/gamma^2)
};

struct ParamSet {
  double n = 0.0;  // double so symbolic-scale checks (n ~ 2^200) work
  double k = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double eta = 0.0, mu = 0.0;  // bext only
  int h = 0, ell = 0, b = 0, l = 0, d = 0, t = 0;
  int N = 0, r = 0;  // 0 when d > 30: rows are not materializable
  int m2 = 0, m3 = 0, m_out = 0;
  int t_blocks = 0;  // bext: ceil(7/eta) + 1
  double eps_prime = 0.0;
  ParamMode mode = ParamMode::relaxed;
  ParamConstants constants;
  ToyOverrides overrides;
};

struct ConstraintCheck {
  std::string name;
  std::string formula;
  double lhs = 0.0, rhs = 0.0;
  bool pass = false;
  double margin = 0.0;   // lhs - rhs, signed so failures read negative
  bool advisory = false; // recorded but never fatal, even in strict mode
};

struct ConstraintReport {
  std::vector<ConstraintCheck> checks;
  bool all_pass = true;

  std::string to_string() const;
};

struct DerivedParams {
  ParamSet params;
  ConstraintReport report;
};

/// Derives h (smallest power of two >= k^alpha), ell = ceil(k^beta), block
/// structure and the bin count, then evaluates the constraint checklist.
/// Strict mode throws ConstraintError on any violation. n may be symbolic
/// scale (up to ~2^900); rows are materializable only when log2 N <= 30 and
/// the N/r fields read 0 otherwise. The checklist itself is evaluated in
/// doubles, so it stays meaningful at symbolic scale.
DerivedParams derive_params(double n, double k, double alpha, double beta, double gamma,
                            ParamMode mode, const ParamConstants& constants = {},
                            const ToyOverrides& overrides = {});

/// Exponents used by the block-source pipeline for a given eta.
struct BextExponents {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, mu = 0.0;
  int t_blocks = 0;
};
BextExponents bext_exponents(double eta);

struct ProofScanEntry {
  double n = 0.0;
  double k = 0.0;
  bool entropy_ok = false;  // k^(1-3a-b) >= 24 log2 n
  bool width_ok = false;    // k^(b-a) >= C log2 n
};

struct ProofScanReport {
  std::vector<ProofScanEntry> grid;
  double c0 = 0.0;  // smallest scanned n from which both inequalities hold onward
  bool found = false;
};

/// Scans n over a log-spaced grid with k = coeff * log2(n)^k_exponent and
/// checks the two proof inequalities of the three-source analysis.
ProofScanReport scan_proof_inequalities(double alpha, double beta, double c_ell,
                                        double coeff = 1.0, double k_exponent = 12.0,
                                        double n_lo = 16.0, double n_hi = 1e30,
                                        int grid_points = 120);

/// Named extractor roles consumed by the pipelines. Shapes are validated
/// against the ParamSet before running.
struct ExtractorSuite {
  std::shared_ptr<const StrongSeededExtractor> sr1;     // seeds d, outputs seed of sr2
  std::shared_ptr<const StrongSeededExtractor> sr2;     // x side, outputs ell
  std::shared_ptr<const StrongSeededExtractor> sr3;     // y side, outputs the row length
  std::shared_ptr<const StrongSeededExtractor> la_q;    // laExt Q side
  std::shared_ptr<const StrongSeededExtractor> la_w;    // laExt X side
  std::shared_ptr<const StrongSeededExtractor> bridge;  // SSR slice refresh
  std::shared_ptr<const StrongSeededExtractor> step4;   // iext: extract from y2 with Z1 rows
  std::shared_ptr<const StrongSeededExtractor> step5;   // iext: extract from x with Z2 rows
  std::shared_ptr<const StrongSeededExtractor> loop;    // bext: per-round block extraction
  std::shared_ptr<const StrongSeededExtractor> final_ext;  // bext terminal extraction
  std::shared_ptr<const SRExtractor> basic;

  SSRConfig ssr_config(const ParamSet& p) const;
};

struct IExtTrace {
  ParamSet params;
  SrOutput sr_stage;       // step 1
  BinOutcome bin;          // step 2
  SRMatrix z1;             // step 3 (padded)
  SRMatrix z2;             // step 4
  SRMatrix z3;             // step 5
  BitString v;             // step 6

  void dump(std::ostream& out, const ConstraintReport* report = nullptr) const;
};

/// Three-source extractor over x and the block source (y1, y2).
IExtTrace iext(const ParamSet& params, const ExtractorSuite& suite, const BitString& x,
               const BitString& y1, const BitString& y2);

struct BExtRound {
  int n_before = 0, n_after = 0, r = 0;
  BinOutcome bin;
  char consumed = '?';     // 'X' or 'Y'
  int block_index = 0;     // 1-based within its source
  SRMatrix z;              // Z_{t+1}
};

struct BExtTrace {
  ParamSet params;
  SrOutput sr_stage;
  std::vector<BExtRound> rounds;
  bool role_swap = false;  // terminal v_y = 1, roles of X and Y switched
  SRMatrix z_final;        // Z' (rows of m2 bits)
  BitString w;

  void dump(std::ostream& out) const;
};

/// Block-source extractor: SR on the first blocks, then alternating
/// lightest-bin rounds consuming fresh blocks per the v_y flag, then the
/// terminal extraction and the injected SR-extractor.
BExtTrace bext(const ParamSet& params, const ExtractorSuite& suite,
               const std::vector<BitString>& x_blocks, const std::vector<BitString>& y_blocks);

}  // namespace srx
