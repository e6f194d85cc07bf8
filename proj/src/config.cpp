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

#include "srx/config.hpp"

#include <fstream>
#include <sstream>

#include "srx/error.hpp"

namespace srx {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

// "key=value,key=value" payloads inside extractor/source specs.
std::map<std::string, std::string> parse_kv_list(const std::string& s) {
  std::map<std::string, std::string> out;
  std::istringstream iss(s);
  std::string item;
  while (std::getline(iss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("spec item missing '=': " + item);
    out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return out;
}

std::int64_t kv_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("spec missing '" + key + "'");
  return std::stoll(it->second);
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    throw ParseError("spec missing '" + key + "'");
  }
  return std::stod(it->second);
}

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) + ": unterminated section");
      section = t.substr(1, t.size() - 2);
      cfg.sections[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": key outside any section");
    cfg.sections[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [section, kvs] : sections) {
    out << "[" << section << "]\n";
    for (const auto& [k, v] : kvs) out << k << " = " << v << "\n";
  }
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : serialize()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

std::string ExperimentConfig::get_str(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end() || !s->second.count(key))
    throw ParseError("config: missing [" + section + "] " + key);
  return s->second.at(key);
}

std::string ExperimentConfig::get_str(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? get_str(section, key) : fallback;
}

std::int64_t ExperimentConfig::get_int(const std::string& section, const std::string& key,
                                       std::optional<std::int64_t> fallback) const {
  if (!has(section, key)) {
    if (fallback) return *fallback;
    throw ParseError("config: missing [" + section + "] " + key);
  }
  try {
    return std::stoll(get_str(section, key));
  } catch (const std::exception&) {
    throw ParseError("config: [" + section + "] " + key + " is not an integer");
  }
}

double ExperimentConfig::get_double(const std::string& section, const std::string& key,
                                    std::optional<double> fallback) const {
  if (!has(section, key)) {
    if (fallback) return *fallback;
    throw ParseError("config: missing [" + section + "] " + key);
  }
  try {
    return std::stod(get_str(section, key));
  } catch (const std::exception&) {
    throw ParseError("config: [" + section + "] " + key + " is not a number");
  }
}

bool ExperimentConfig::get_bool(const std::string& section, const std::string& key,
                                bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get_str(section, key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("config: [" + section + "] " + key + " is not a bool");
}

void ExperimentConfig::set(const std::string& section, const std::string& key,
                           const std::string& value) {
  sections[section][key] = value;
}

std::shared_ptr<const StrongSeededExtractor> build_extractor(const std::string& spec) {
  auto [kind, payload] = split_spec(spec);
  if (kind == "file") return LookupExtractor::load_file(payload);
  auto kv = parse_kv_list(payload);
  if (kind == "toeplitz") {
    return std::make_shared<ToeplitzExtractor>(static_cast<int>(kv_int(kv, "n")),
                                               static_cast<int>(kv_int(kv, "m")),
                                               kv_double(kv, "k"));
  }
  if (kind == "search") {
    SearchParams p;
    p.n = static_cast<int>(kv_int(kv, "n"));
    p.d = static_cast<int>(kv_int(kv, "d"));
    p.m = static_cast<int>(kv_int(kv, "m"));
    p.k = static_cast<int>(kv_int(kv, "k"));
    p.target_eps = kv_double(kv, "target", 0.25);
    p.trials = kv_int(kv, "trials");
    if (kv.count("kinds")) {
      const std::string& kinds = kv.at("kinds");
      p.kind_random = kinds.find("random") != std::string::npos;
      p.kind_affine = kinds.find("affine") != std::string::npos;
      p.kind_perm = kinds.find("perm") != std::string::npos;
    }
    Rng rng(static_cast<std::uint64_t>(kv_int(kv, "seed")));
    return search_ideal_extractor(p, rng).ext;
  }
  if (kind == "permtable") {
    Rng rng(static_cast<std::uint64_t>(kv_int(kv, "seed")));
    return random_permutation_extractor(static_cast<int>(kv_int(kv, "n")),
                                        static_cast<int>(kv_int(kv, "d")), rng);
  }
  if (kind == "randtable") {
    Rng rng(static_cast<std::uint64_t>(kv_int(kv, "seed")));
    return random_lookup_extractor(static_cast<int>(kv_int(kv, "n")),
                                   static_cast<int>(kv_int(kv, "d")),
                                   static_cast<int>(kv_int(kv, "m")), rng);
  }
  throw ParseError("unknown extractor spec kind: " + kind);
}

std::shared_ptr<const SRExtractor> build_basicext(const std::string& spec) {
  auto [kind, payload] = split_spec(spec);
  if (kind == "file") return LookupSRExtractor::load_file(payload);
  auto kv = parse_kv_list(payload);
  if (kind == "ideal") {
    BasicExtSearchParams p;
    p.n = static_cast<int>(kv_int(kv, "n"));
    p.rows = static_cast<int>(kv_int(kv, "rows"));
    p.row_len = static_cast<int>(kv_int(kv, "rowlen"));
    p.m = static_cast<int>(kv_int(kv, "m"));
    p.k = static_cast<int>(kv_int(kv, "k"));
    p.target_eps = kv_double(kv, "target", 0.3);
    p.trials = kv_int(kv, "trials");
    Rng rng(static_cast<std::uint64_t>(kv_int(kv, "seed")));
    return search_ideal_basicext(p, rng).ext;
  }
  if (kind == "fold") {
    Rng rng(static_cast<std::uint64_t>(kv_int(kv, "seed")));
    auto inner = random_lookup_extractor(static_cast<int>(kv_int(kv, "n")),
                                         static_cast<int>(kv_int(kv, "rowlen")),
                                         static_cast<int>(kv_int(kv, "m")), rng);
    return fold_basicext(inner, static_cast<int>(kv_int(kv, "rows")));
  }
  throw ParseError("unknown basicext spec kind: " + kind);
}

DiscreteSource build_source(const std::string& spec) {
  auto [kind, payload] = split_spec(spec);
  if (kind == "file") return load_source_file(payload);
  if (kind == "uniform") {
    auto kv = parse_kv_list(payload);
    return DiscreteSource::uniform(static_cast<int>(kv_int(kv, "n")));
  }
  if (kind == "pointmass") return DiscreteSource::point_mass(BitString::parse_hex(payload));
  if (kind == "flat") {
    auto kv = parse_kv_list(payload);
    int n = static_cast<int>(kv_int(kv, "n"));
    int k = static_cast<int>(kv_int(kv, "k"));
    Rng rng(static_cast<std::uint64_t>(kv_int(kv, "seed")));
    std::string want = kv.count("kind") ? kv.at("kind") : "random";
    int offset = want == "random" ? 0 : want == "affine" ? 1 : want == "prefix" ? 2 : 3;
    auto battery = adversarial_flat_battery(n, k, offset + 1, rng);
    return battery.back().to_source();
  }
  throw ParseError("unknown source spec kind: " + kind);
}

ParamSet params_from_config(const ExperimentConfig& cfg, ConstraintReport* report) {
  ParamMode mode =
      cfg.get_str("params", "mode", "relaxed") == "strict" ? ParamMode::strict : ParamMode::relaxed;
  ParamConstants constants;
  constants.c_ell = cfg.get_double("params", "c_ell", constants.c_ell);
  constants.c1_h = cfg.get_double("params", "c1_h", constants.c1_h);
  constants.eps_exponent = cfg.get_double("params", "eps_exponent", constants.eps_exponent);
  constants.laext_const = cfg.get_double("params", "laext_const", constants.laext_const);
  constants.hwise_const = cfg.get_double("params", "hwise_const", constants.hwise_const);

  ToyOverrides ov;
  auto opt_int = [&](const std::string& key) -> std::optional<int> {
    if (!cfg.has("params", key)) return std::nullopt;
    return static_cast<int>(cfg.get_int("params", key));
  };
  ov.d = opt_int("d");
  ov.slice1_len = opt_int("slice1_len");
  ov.bridge_m = opt_int("bridge_m");
  ov.m2 = opt_int("m2");
  ov.m3 = opt_int("m3");
  ov.m_out = opt_int("m_out");
  ov.r = opt_int("r");
  ov.stop_rows = opt_int("stop_rows");

  double alpha = cfg.get_double("params", "alpha", 1.0 / 6.0);
  double beta = cfg.get_double("params", "beta", 1.0 / 3.0);
  double gamma = cfg.get_double("params", "gamma", 0.25);
  double eta = cfg.get_double("params", "eta", 0.0);
  int t_blocks = 0;
  if (eta > 0.0) {
    BextExponents e = bext_exponents(eta);
    alpha = cfg.get_double("params", "alpha", e.alpha);
    beta = cfg.get_double("params", "beta", e.beta);
    gamma = cfg.get_double("params", "gamma", e.gamma);
    t_blocks = e.t_blocks;
  }

  DerivedParams derived = derive_params(cfg.get_double("params", "n"),
                                        cfg.get_double("params", "k"), alpha, beta, gamma, mode,
                                        constants, ov);
  derived.params.eta = eta;
  derived.params.t_blocks = t_blocks;
  if (report) *report = derived.report;
  return derived.params;
}

}  // namespace srx
