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

#include "srx/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>
#include <set>

#include <nlohmann/json.hpp>

#include "srx/error.hpp"
#include "srx/extractors.hpp"

namespace srx {

int JointTable::total_len() const {
  int total = 0;
  for (int len : var_lens) total += len;
  return total;
}

double JointTable::total_mass() const {
  double sum = 0.0;
  for (const auto& [k, p] : table) sum += p;
  return sum;
}

void JointTable::add(const BitString& key, double w) {
  if (key.len() != total_len()) throw DomainError("JointTable::add: key length mismatch");
  table[key] += w;
}

BitString JointTable::part(const BitString& key, int var) const {
  if (var < 0 || var >= static_cast<int>(var_lens.size()))
    throw DomainError("JointTable::part: variable index out of range");
  int pos = 0;
  for (int v = 0; v < var; ++v) pos += var_lens[static_cast<std::size_t>(v)];
  return key.slice(pos, var_lens[static_cast<std::size_t>(var)]);
}

JointTable JointTable::marginal(const std::vector<int>& keep) const {
  JointTable out;
  for (int v : keep) {
    if (v < 0 || v >= static_cast<int>(var_lens.size()))
      throw DomainError("JointTable::marginal: variable index out of range");
    out.var_lens.push_back(var_lens[static_cast<std::size_t>(v)]);
  }
  for (const auto& [key, p] : table) {
    std::vector<BitString> parts;
    parts.reserve(keep.size());
    for (int v : keep) parts.push_back(part(key, v));
    out.table[concat(parts)] += p;
  }
  return out;
}

namespace {

// Enumerates [begin, end) over the first source's entries crossed with the
// full product of the remaining supports.
JointTable push_forward_range(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                              std::size_t begin, std::size_t end) {
  JointTable out;
  std::vector<std::size_t> idx(sources.size(), 0);
  std::vector<BitString> draw(sources.size());
  idx[0] = begin;
  if (begin >= end) return out;
  bool first = true;
  for (;;) {
    double w = 1.0;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const auto& e = sources[s].entries()[idx[s]];
      draw[s] = e.first;
      w *= e.second;
    }
    std::vector<BitString> val = f(draw);
    if (first) {
      for (const auto& v : val) out.var_lens.push_back(v.len());
      first = false;
    }
    out.add(concat(val), w);

    std::size_t s = sources.size();
    while (s > 0) {
      --s;
      ++idx[s];
      if (s == 0 ? idx[0] < end : idx[s] < sources[s].entries().size()) break;
      idx[s] = 0;
      if (s == 0) return out;
    }
  }
}

}  // namespace

JointTable push_forward(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                        std::uint64_t budget, int workers) {
  if (sources.empty()) throw DomainError("push_forward: no sources");
  std::uint64_t combos = 1;
  for (const auto& s : sources) {
    if (!s.exact()) throw DomainError("push_forward: all sources must be exact");
    std::uint64_t size = s.entries().size();
    if (combos > budget / size)
      throw GuardError("push_forward: enumeration budget " + std::to_string(budget) +
                       " exceeded; consider Monte Carlo mode");
    combos *= size;
  }

  std::size_t outer = sources[0].entries().size();
  if (workers <= 1 || outer < 2 * static_cast<std::size_t>(workers))
    return push_forward_range(f, sources, 0, outer);

  // Partition the outer support; merge chunk tables in chunk order so the
  // floating-point accumulation is deterministic for a given worker count.
  std::size_t n_chunks = static_cast<std::size_t>(workers);
  std::vector<JointTable> parts(n_chunks);
  std::vector<std::thread> threads;
  threads.reserve(n_chunks);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    std::size_t begin = outer * c / n_chunks;
    std::size_t end = outer * (c + 1) / n_chunks;
    threads.emplace_back(
        [&, c, begin, end] { parts[c] = push_forward_range(f, sources, begin, end); });
  }
  for (auto& t : threads) t.join();

  JointTable out;
  for (auto& part : parts) {
    if (part.table.empty()) continue;
    if (out.var_lens.empty()) out.var_lens = part.var_lens;
    if (part.var_lens != out.var_lens) throw DomainError("push_forward: inconsistent output shape");
    for (auto& [key, p] : part.table) out.table[key] += p;
  }
  return out;
}

double statistical_distance(const JointTable& p, const JointTable& q) {
  if (p.var_lens != q.var_lens) throw DomainError("statistical_distance: shape mismatch");
  double sum = 0.0;
  auto it_p = p.table.begin();
  auto it_q = q.table.begin();
  while (it_p != p.table.end() || it_q != q.table.end()) {
    if (it_q == q.table.end() || (it_p != p.table.end() && it_p->first < it_q->first)) {
      sum += std::fabs(it_p->second);
      ++it_p;
    } else if (it_p == p.table.end() || it_q->first < it_p->first) {
      sum += std::fabs(it_q->second);
      ++it_q;
    } else {
      sum += std::fabs(it_p->second - it_q->second);
      ++it_p;
      ++it_q;
    }
  }
  return sum / 2.0;
}

double distance_from_uniform(const JointTable& p) {
  int total = p.total_len();
  if (total > 62) throw GuardError("distance_from_uniform: output wider than 62 bits");
  double u = std::ldexp(1.0, -total);
  double sum = 0.0;
  for (const auto& [k, prob] : p.table) sum += std::fabs(prob - u);
  double missing = static_cast<double>((std::uint64_t{1} << total) - p.table.size());
  return (sum + missing * u) / 2.0;
}

double conditional_uniform_distance(const JointTable& p, int uniform_var) {
  if (uniform_var < 0 || uniform_var >= static_cast<int>(p.var_lens.size()))
    throw DomainError("conditional_uniform_distance: variable index out of range");
  int m = p.var_lens[static_cast<std::size_t>(uniform_var)];
  if (m > 62) throw GuardError("conditional_uniform_distance: uniform part wider than 62 bits");
  double u = std::ldexp(1.0, -m);

  // Group by the side information (all variables except uniform_var).
  int pos = 0;
  for (int v = 0; v < uniform_var; ++v) pos += p.var_lens[static_cast<std::size_t>(v)];
  std::map<BitString, std::vector<double>> members;
  std::map<BitString, double> side_mass;
  for (const auto& [key, prob] : p.table) {
    BitString side = concat(key.slice(0, pos), key.slice(pos + m, key.len() - pos - m));
    members[side].push_back(prob);
    side_mass[side] += prob;
  }
  double total = 0.0;
  for (const auto& [side, probs] : members) {
    double target = side_mass[side] * u;
    double sum = 0.0;
    for (double prob : probs) sum += std::fabs(prob - target);
    sum += (std::ldexp(1.0, m) - static_cast<double>(probs.size())) * target;
    total += sum / 2.0;
  }
  return total;
}

double strong_distance(const StrongSeededExtractor& ext, const DiscreteSource& source,
                       std::uint64_t budget) {
  if (!source.exact()) throw DomainError("strong_distance: source must be exact");
  std::uint64_t seeds = std::uint64_t{1} << ext.d();
  if (seeds * source.entries().size() > budget)
    throw GuardError("strong_distance: enumeration budget exceeded (2^d * |support| = " +
                     std::to_string(seeds * source.entries().size()) + ")");
  double u = std::ldexp(1.0, -ext.m());
  double total = 0.0;
  std::map<BitString, double> cond;
  for (std::uint64_t r = 0; r < seeds; ++r) {
    BitString seed = BitString::from_uint(r, ext.d());
    cond.clear();
    for (const auto& [x, p] : source.entries()) cond[ext.eval(x, seed)] += p;
    double sum = 0.0;
    for (const auto& [v, p] : cond) sum += std::fabs(p - u);
    sum += (std::ldexp(1.0, ext.m()) - static_cast<double>(cond.size())) * u;
    total += sum / 2.0;
  }
  return total / static_cast<double>(seeds);
}

double weak_distance(const StrongSeededExtractor& ext, const DiscreteSource& source,
                     std::uint64_t budget) {
  if (!source.exact()) throw DomainError("weak_distance: source must be exact");
  std::uint64_t seeds = std::uint64_t{1} << ext.d();
  if (seeds * source.entries().size() > budget)
    throw GuardError("weak_distance: enumeration budget exceeded");
  double seed_w = 1.0 / static_cast<double>(seeds);
  std::map<BitString, double> dist;
  for (std::uint64_t r = 0; r < seeds; ++r) {
    BitString seed = BitString::from_uint(r, ext.d());
    for (const auto& [x, p] : source.entries()) dist[ext.eval(x, seed)] += p * seed_w;
  }
  double u = std::ldexp(1.0, -ext.m());
  double sum = 0.0;
  for (const auto& [v, p] : dist) sum += std::fabs(p - u);
  sum += (std::ldexp(1.0, ext.m()) - static_cast<double>(dist.size())) * u;
  return sum / 2.0;
}

HwiseReport hwise_report(const JointTable& joint, int h, std::optional<int> sampled, Rng* rng) {
  int rows = static_cast<int>(joint.var_lens.size());
  if (h < 1 || h > rows) throw DomainError("hwise_report: h out of range");

  std::vector<std::vector<int>> subsets;
  if (!sampled.has_value()) {
    std::vector<int> pick(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) pick[static_cast<std::size_t>(i)] = i;
    for (;;) {
      subsets.push_back(pick);
      int j = h - 1;
      while (j >= 0 && pick[static_cast<std::size_t>(j)] == rows - h + j) --j;
      if (j < 0) break;
      ++pick[static_cast<std::size_t>(j)];
      for (int t = j + 1; t < h; ++t)
        pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
    }
  } else {
    if (!rng) throw DomainError("hwise_report: sampling requires an rng");
    std::set<std::vector<int>> seen;
    int want = *sampled;
    int attempts = 0;
    while (static_cast<int>(seen.size()) < want && attempts < want * 64) {
      ++attempts;
      std::set<int> s;
      while (static_cast<int>(s.size()) < h)
        s.insert(static_cast<int>(rng->next_below(static_cast<std::uint64_t>(rows))));
      seen.insert(std::vector<int>(s.begin(), s.end()));
    }
    subsets.assign(seen.begin(), seen.end());
  }

  HwiseReport report;
  for (const auto& subset : subsets) {
    double dist = distance_from_uniform(joint.marginal(subset));
    report.subsets.push_back({subset, dist});
    report.worst = std::max(report.worst, dist);
  }
  return report;
}

ConditionalReport conditional_analysis(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                                       int condition_on,
                                       const std::function<double(const JointTable&)>& metric,
                                       double threshold, std::uint64_t budget) {
  if (condition_on < 0 || condition_on >= static_cast<int>(sources.size()))
    throw DomainError("conditional_analysis: source index out of range");
  const DiscreteSource& cond = sources[static_cast<std::size_t>(condition_on)];
  if (!cond.exact()) throw DomainError("conditional_analysis: conditioned source must be exact");

  ConditionalReport report;
  for (const auto& [y, py] : cond.entries()) {
    std::vector<DiscreteSource> fixed = sources;
    fixed[static_cast<std::size_t>(condition_on)] = DiscreteSource::point_mass(y);
    JointTable t = push_forward(f, fixed, budget);
    double value = metric(t);
    bool pass = value <= threshold;
    report.entries.push_back({y, py, value, pass});
    if (pass) report.passing_mass += py;
  }
  return report;
}

McResult mc_distance_upper(const TupleMap& f, const std::vector<DiscreteSource>& sources,
                           std::uint64_t samples, Rng& rng, int bootstrap_rounds) {
  if (samples == 0) throw DomainError("mc_distance_upper: need samples");

  std::map<BitString, std::uint64_t> counts;
  int out_len = -1;
  std::vector<BitString> draw(sources.size());
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < sources.size(); ++i) draw[i] = sources[i].sample(rng);
    BitString v = concat(f(draw));
    if (out_len < 0) {
      out_len = v.len();
      if (out_len > 20)
        throw GuardError(
            "mc_distance_upper: output wider than 20 bits; plug-in estimate invalid "
            "(collision-based testing is out of scope)");
    }
    ++counts[v];
  }

  auto plugin = [&](const std::map<BitString, std::uint64_t>& c, std::uint64_t total) {
    double u = std::ldexp(1.0, -out_len);
    double sum = 0.0;
    for (const auto& [v, cnt] : c)
      sum += std::fabs(static_cast<double>(cnt) / static_cast<double>(total) - u);
    sum += (std::ldexp(1.0, out_len) - static_cast<double>(c.size())) * u;
    return sum / 2.0;
  };

  McResult result;
  result.samples = samples;
  result.estimate = plugin(counts, samples);

  // Multinomial bootstrap from the empirical distribution.
  std::vector<std::pair<BitString, double>> cdf;
  double acc = 0.0;
  for (const auto& [v, cnt] : counts) {
    acc += static_cast<double>(cnt) / static_cast<double>(samples);
    cdf.emplace_back(v, acc);
  }
  std::vector<double> boots;
  boots.reserve(static_cast<std::size_t>(bootstrap_rounds));
  std::map<BitString, std::uint64_t> resample;
  for (int b = 0; b < bootstrap_rounds; ++b) {
    resample.clear();
    for (std::uint64_t s = 0; s < samples; ++s) {
      double uu = rng.next_double();
      auto it = std::lower_bound(cdf.begin(), cdf.end(), uu,
                                 [](const auto& e, double x) { return e.second < x; });
      if (it == cdf.end()) --it;
      ++resample[it->first];
    }
    boots.push_back(plugin(resample, samples));
  }
  std::sort(boots.begin(), boots.end());
  auto quantile = [&](double q) {
    double pos = q * static_cast<double>(boots.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, boots.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return boots[lo] * (1.0 - frac) + boots[hi] * frac;
  };
  result.lo = quantile(0.005);
  result.hi = quantile(0.995);
  return result;
}

EntropyLossReport min_entropy_loss_check(const DiscreteSource& source,
                                         const std::function<BitString(const BitString&)>& g,
                                         int fixing_len, double eps) {
  if (!source.exact()) throw DomainError("min_entropy_loss_check: source must be exact");
  if (eps <= 0.0 || eps > 1.0) throw DomainError("min_entropy_loss_check: eps must be in (0, 1]");

  double h_total = source.min_entropy();
  double bound = h_total - fixing_len - std::log2(1.0 / eps);

  std::map<BitString, std::pair<double, double>> fixings;  // value -> (mass, max conditional p)
  for (const auto& [x, p] : source.entries()) {
    BitString y = g(x);
    if (y.len() != fixing_len) throw DomainError("min_entropy_loss_check: fixing length mismatch");
    auto& [mass, maxp] = fixings[y];
    mass += p;
    maxp = std::max(maxp, p);
  }

  EntropyLossReport report;
  for (const auto& [y, mm] : fixings) {
    double cond_entropy = -std::log2(mm.second / mm.first);
    bool pass = cond_entropy >= bound - 1e-9;
    report.entries.push_back({y, mm.first, cond_entropy, bound, pass});
    if (pass) report.passing_mass += mm.first;
  }
  report.pass = report.passing_mass >= 1.0 - eps - 1e-12;
  return report;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "metric,fixture,measured,threshold,pass\n";
  out.precision(12);
  for (const auto& r : rows)
    out << r.metric << "," << r.fixture << "," << r.measured << "," << r.threshold << ","
        << (r.pass ? "true" : "false") << "\n";
}

void write_metrics_json(std::ostream& out, const std::vector<MetricRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"metric", r.metric},
                 {"fixture", r.fixture},
                 {"measured", r.measured},
                 {"threshold", r.threshold},
                 {"pass", r.pass}});
  out << j.dump(2) << "\n";
}

void write_hwise_json(std::ostream& out, const HwiseReport& report) {
  nlohmann::json j;
  j["worst"] = report.worst;
  j["subsets"] = nlohmann::json::array();
  for (const auto& s : report.subsets)
    j["subsets"].push_back({{"rows", s.subset}, {"distance", s.distance}});
  out << j.dump(2) << "\n";
}

void write_conditional_json(std::ostream& out, const ConditionalReport& report) {
  nlohmann::json j;
  j["passing_mass"] = report.passing_mass;
  j["per_y"] = nlohmann::json::array();
  for (const auto& e : report.entries)
    j["per_y"].push_back(
        {{"y", e.y.to_hex()}, {"prob", e.prob}, {"value", e.value}, {"pass", e.pass}});
  out << j.dump(2) << "\n";
}

}  // namespace srx
