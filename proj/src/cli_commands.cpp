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

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "srx/config.hpp"
#include "srx/error.hpp"
#include "srx/eval.hpp"

namespace srx {

namespace {

constexpr const char* kVersion = "srx 0.1.0";

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  return out;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& dir) {
  auto out = open_out(dir, "manifest.txt");
  out << "version = " << kVersion << "\n";
  out << "config_hash = " << std::hex << std::setw(16) << std::setfill('0') << cfg.hash() << "\n";
  out << std::dec;
  out << "seed = " << cfg.get_int("eval", "seed", 0) << "\n";
}

ExtractorSuite suite_from_config(const ExperimentConfig& cfg, bool for_bext) {
  ExtractorSuite suite;
  auto role = [&](const std::string& name) { return build_extractor(cfg.get_str("extractors", name)); };
  suite.sr1 = role("sr1");
  suite.sr2 = role("sr2");
  suite.sr3 = role("sr3");
  suite.la_q = role("la_q");
  suite.la_w = role("la_w");
  if (cfg.has("extractors", "bridge")) suite.bridge = role("bridge");
  if (for_bext) {
    suite.loop = role("loop");
    suite.final_ext = role("final");
  } else {
    suite.step4 = role("step4");
    suite.step5 = role("step5");
  }
  suite.basic = build_basicext(cfg.get_str("extractors", "basicext"));
  return suite;
}

int run_iext(const ExperimentConfig& cfg, const ParamSet& params, const ConstraintReport& report,
             const std::string& out_dir, std::ostream& out) {
  ExtractorSuite suite = suite_from_config(cfg, false);
  DiscreteSource sx = build_source(cfg.get_str("sources", "x"));
  DiscreteSource sy1 = build_source(cfg.get_str("sources", "y1"));
  DiscreteSource sy2 = build_source(cfg.get_str("sources", "y2"));

  Rng rng(static_cast<std::uint64_t>(cfg.get_int("eval", "seed", 0)));
  BitString x = sx.sample(rng), y1 = sy1.sample(rng), y2 = sy2.sample(rng);
  IExtTrace trace = iext(params, suite, x, y1, y2);
  {
    auto tf = open_out(out_dir, "trace.txt");
    tf << "x = " << x.to_hex() << "\ny1 = " << y1.to_hex() << "\ny2 = " << y2.to_hex() << "\n";
    trace.dump(tf, &report);
  }

  std::vector<MetricRow> rows;
  if (cfg.get_bool("eval", "exact", true)) {
    std::uint64_t budget =
        static_cast<std::uint64_t>(cfg.get_int("eval", "budget", std::int64_t{1} << 24));
    int workers = static_cast<int>(cfg.get_int("eval", "workers", 1));
    TupleMap fy = [&](const std::vector<BitString>& in) {
      IExtTrace t = iext(params, suite, in[0], in[1], in[2]);
      return std::vector<BitString>{t.v, in[1], in[2]};
    };
    JointTable joint = push_forward(fy, {sx, sy1, sy2}, budget, workers);
    double v_dist = distance_from_uniform(joint.marginal({0}));
    double strong_y = conditional_uniform_distance(joint, 0);
    TupleMap fx = [&](const std::vector<BitString>& in) {
      IExtTrace t = iext(params, suite, in[0], in[1], in[2]);
      return std::vector<BitString>{t.v, in[0]};
    };
    double strong_x =
        conditional_uniform_distance(push_forward(fx, {sx, sy1, sy2}, budget, workers), 0);

    double v_thr = cfg.get_double("eval", "v_threshold", 0.2);
    double s_thr = cfg.get_double("eval", "strong_threshold", 0.25);
    rows.push_back({"v_distance", "iext", v_dist, v_thr, v_dist <= v_thr});
    rows.push_back({"strong_in_y", "iext", strong_y, s_thr, strong_y <= s_thr});
    rows.push_back({"strong_in_x", "iext", strong_x, s_thr, strong_x <= s_thr});
  }
  if (cfg.get_bool("output", "csv", true)) {
    auto f = open_out(out_dir, "metrics.csv");
    write_metrics_csv(f, rows);
  }
  if (cfg.get_bool("output", "json", true)) {
    auto f = open_out(out_dir, "metrics.json");
    write_metrics_json(f, rows);
  }
  write_manifest(cfg, out_dir);
  for (const auto& r : rows)
    out << r.metric << " = " << r.measured << " (threshold " << r.threshold << ", "
        << (r.pass ? "pass" : "FAIL") << ")\n";
  out << "wrote " << out_dir << "/trace.txt\n";
  return 0;
}

int run_bext(const ExperimentConfig& cfg, const ParamSet& params, const std::string& out_dir,
             std::ostream& out) {
  ExtractorSuite suite = suite_from_config(cfg, true);
  auto parse_blocks = [&](const std::string& key) {
    std::istringstream iss(cfg.get_str("sources", key));
    std::vector<BitString> blocks;
    std::string tok;
    while (iss >> tok) blocks.push_back(BitString::parse_hex(tok));
    return blocks;
  };
  std::vector<BitString> xb = parse_blocks("xblocks");
  std::vector<BitString> yb = parse_blocks("yblocks");
  BExtTrace trace = bext(params, suite, xb, yb);
  {
    auto tf = open_out(out_dir, "trace.txt");
    trace.dump(tf);
  }
  std::vector<MetricRow> rows;
  double min_rounds = cfg.get_double("eval", "min_rounds", 0.0);
  rows.push_back({"bext_rounds", "bext", static_cast<double>(trace.rounds.size()), min_rounds,
                  static_cast<double>(trace.rounds.size()) >= min_rounds});
  if (cfg.get_bool("output", "csv", true)) {
    auto f = open_out(out_dir, "metrics.csv");
    write_metrics_csv(f, rows);
  }
  if (cfg.get_bool("output", "json", true)) {
    auto f = open_out(out_dir, "metrics.json");
    write_metrics_json(f, rows);
  }
  write_manifest(cfg, out_dir);
  out << "bext: " << trace.rounds.size() << " lightest-bin rounds, W = " << trace.w.to_hex()
      << "\n";
  out << "wrote " << out_dir << "/trace.txt\n";
  return 0;
}

}  // namespace

int cmd_params(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    ConstraintReport report;
    params_from_config(cfg, &report);
    out << report.to_string();
    return 0;
  } catch (const ConstraintError& e) {
    err << e.what() << "\n" << e.report();
    return 2;
  }
}

int cmd_search(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  auto it = cfg.sections.find("extractors");
  if (it == cfg.sections.end()) {
    err << "config has no [extractors] section\n";
    return 4;
  }
  try {
    for (const auto& [role, spec] : it->second) {
      std::string path = out_dir + "/" + role + ".tbl";
      if (spec.rfind("search:", 0) == 0) {
        auto ext = build_extractor(spec);
        auto lookup = std::dynamic_pointer_cast<const LookupExtractor>(ext);
        std::filesystem::create_directories(out_dir);
        lookup->save_file(path);
        out << role << ": measured_eps = " << lookup->measured_eps() << " -> " << path << "\n";
      } else if (spec.rfind("ideal:", 0) == 0) {
        auto ext = build_basicext(spec);
        auto lookup = std::dynamic_pointer_cast<const LookupSRExtractor>(ext);
        std::filesystem::create_directories(out_dir);
        lookup->save_file(path);
        out << role << ": measured_eps = " << lookup->measured_eps() << " -> " << path << "\n";
      }
    }
    return 0;
  } catch (const SearchError& e) {
    err << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
            std::ostream& err) {
  try {
    ConstraintReport report;
    ParamSet params = params_from_config(cfg, &report);
    std::string algorithm = cfg.get_str("params", "algorithm", "iext");
    if (algorithm == "iext") return run_iext(cfg, params, report, out_dir, out);
    if (algorithm == "bext") return run_bext(cfg, params, out_dir, out);
    err << "unknown algorithm: " << algorithm << "\n";
    return 4;
  } catch (const ConstraintError& e) {
    err << e.what() << "\n" << e.report();
    return 2;
  } catch (const GuardError& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const SearchError& e) {
    err << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
             std::ostream& err) {
  try {
    auto ext = build_extractor(cfg.get_str("eval", "target"));
    int n = ext->n();
    int k = static_cast<int>(cfg.get_int("eval", "battery_k"));
    int count = static_cast<int>(cfg.get_int("eval", "battery_count", 50));
    std::uint64_t budget =
        static_cast<std::uint64_t>(cfg.get_int("eval", "budget", std::int64_t{1} << 24));
    Rng rng(static_cast<std::uint64_t>(cfg.get_int("eval", "seed", 0)));

    std::vector<MetricRow> rows;
    double threshold = cfg.get_double("eval", "strong_threshold", lhl_eps(k, ext->m()));
    double worst = 0.0;
    auto battery = adversarial_flat_battery(n, k, count, rng);
    for (std::size_t i = 0; i < battery.size(); ++i) {
      double dist = strong_distance(*ext, battery[i].to_source(), budget);
      worst = std::max(worst, dist);
      rows.push_back(
          {"strong_distance", "flat[" + std::to_string(i) + "]", dist, threshold, dist <= threshold});
    }
    rows.push_back({"worst_strong_distance", "battery", worst, threshold, worst <= threshold});

    if (cfg.get_bool("eval", "bad_set_check", false)) {
      BadSetReport bad = verify_bad_set_bound(*ext, k, worst);
      rows.push_back({"bad_set_max", "bad-set", static_cast<double>(bad.max_count),
                      static_cast<double>(bad.bound), bad.pass});
    }

    if (cfg.get_bool("output", "csv", true)) {
      auto f = open_out(out_dir, "metrics.csv");
      write_metrics_csv(f, rows);
    }
    if (cfg.get_bool("output", "json", true)) {
      auto f = open_out(out_dir, "metrics.json");
      write_metrics_json(f, rows);
    }
    write_manifest(cfg, out_dir);
    out << "worst strong distance over " << count << " sources: " << worst << " (threshold "
        << threshold << ")\n";
    return 0;
  } catch (const GuardError& e) {
    err << e.what() << "\n";
    return 3;
  }
}

}  // namespace srx
