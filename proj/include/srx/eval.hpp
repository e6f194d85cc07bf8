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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srx/bits.hpp"
#include "srx/rng.hpp"
#include "srx/sources.hpp"

namespace srx {

class StrongSeededExtractor;

/// Exact joint distribution over a tuple of bit-string variables. Keys are
/// the concatenated variable values; probabilities sum to 1 within 2^-40.
struct JointTable {
  std::vector<int> var_lens;
  std::map<BitString, double> table;

  int total_len() const;
  double total_mass() const;
  void add(const BitString& key, double w);
  BitString part(const BitString& key, int var) const;
  /// Marginal over the listed variable indices (in the given order).
  JointTable marginal(const std::vector<int>& keep) const;
};

/// Deterministic map from a tuple of source draws to a tuple of outputs.
using TupleMap = std::function<std::vector<BitString>(const std::vector<BitString>&)>;

/// Exact output distribution of `f` over independent exact-mode sources, by
/// weighted enumeration of the product of supports. Throws GuardError when
/// the product exceeds `budget` evaluations.
JointTable push_forward(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                        std::uint64_t budget = std::uint64_t{1} << 24, int workers = 1);

/// Half-L1 distance. Shapes must match.
double statistical_distance(const JointTable& p, const JointTable& q);

/// Distance from the uniform distribution over all of p's variables.
double distance_from_uniform(const JointTable& p);

/// Distance of p from the hybrid where variable `uniform_var` is replaced by
/// an independent uniform string, keeping the joint distribution of the
/// remaining variables. This is the conditional-uniformity quantity in every
/// "(..., V, side) ~ (..., U, side)" statement.
double conditional_uniform_distance(const JointTable& p, int uniform_var);

/// Exact strong-extractor distance |(Ext(X, R), R) - (U_m, R)| with R
/// uniform over seeds, equal to the seed-average of per-seed distances.
double strong_distance(const StrongSeededExtractor& ext, const DiscreteSource& source,
                       std::uint64_t budget = std::uint64_t{1} << 24);

/// Exact weak (non-strong) distance |Ext(X, R) - U_m| with R uniform.
double weak_distance(const StrongSeededExtractor& ext, const DiscreteSource& source,
                     std::uint64_t budget = std::uint64_t{1} << 24);

struct SubsetDistance {
  std::vector<int> subset;  // row indices, ascending
  double distance = 0.0;
};

struct HwiseReport {
  double worst = 0.0;
  std::vector<SubsetDistance> subsets;
};

/// Joint distance from uniform of every (or `sampled` random) size-h subset
/// of the rows of a joint table. `joint` must have one variable per row.
HwiseReport hwise_report(const JointTable& joint, int h,
                         std::optional<int> sampled = std::nullopt, Rng* rng = nullptr);

struct ConditionalEntry {
  BitString y;
  double prob = 0.0;
  double value = 0.0;
  bool pass = false;
};

struct ConditionalReport {
  std::vector<ConditionalEntry> entries;
  double passing_mass = 0.0;
};

/// For each value y of sources[condition_on], computes `metric` on the exact
/// conditional push-forward of `f` (with that source fixed to y) and
/// aggregates the probability mass of y's whose metric is <= threshold.
ConditionalReport conditional_analysis(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                                       int condition_on,
                                       const std::function<double(const JointTable&)>& metric,
                                       double threshold,
                                       std::uint64_t budget = std::uint64_t{1} << 24);

struct McResult {
  double estimate = 0.0;  // plug-in half-L1 vs uniform; biased up
  double lo = 0.0, hi = 0.0;  // two-sided 99% bootstrap interval
  std::uint64_t samples = 0;
};

/// Monte Carlo plug-in estimate of the distance from uniform of f's (single,
/// concatenated) output, for regimes beyond exact enumeration. The estimate
/// is BIASED UP; the interval comes from a multinomial bootstrap. Output
/// length must be <= 20 bits.
McResult mc_distance_upper(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                           std::uint64_t samples, Rng& rng, int bootstrap_rounds = 200);

struct EntropyLossEntry {
  BitString fixing;
  double prob = 0.0;
  double conditional_entropy = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct EntropyLossReport {
  std::vector<EntropyLossEntry> entries;
  double passing_mass = 0.0;
  bool pass = false;  // passing_mass >= 1 - eps
};

/// Checks that for all but eps mass of fixings of g(X), the conditional
/// min-entropy of X is >= H_inf(X) - fixing_len - log2(1/eps).
EntropyLossReport min_entropy_loss_check(const DiscreteSource& source,
                                         const std::function<BitString(const BitString&)>& g,
                                         int fixing_len, double eps);

/// Report rows in the CSV/JSON metric files.
struct MetricRow {
  std::string metric;
  std::string fixture;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows);
void write_metrics_json(std::ostream& out, const std::vector<MetricRow>& rows);

/// JSON mirrors carrying the full per-subset / per-fixing detail.
void write_hwise_json(std::ostream& out, const HwiseReport& report);
void write_conditional_json(std::ostream& out, const ConditionalReport& report);

}  // namespace srx
