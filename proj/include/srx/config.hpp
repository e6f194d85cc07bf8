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
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "srx/extractors.hpp"
#include "srx/pipeline.hpp"
#include "srx/sources.hpp"

namespace srx {

/// Experiment configuration: plain-text key = value pairs under [sections].
/// The canonical serialized form sorts sections and keys, so parse ->
/// serialize -> parse is the identity.
struct ExperimentConfig {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
  std::string serialize() const;
  std::uint64_t hash() const;  // FNV-1a over the canonical form

  bool has(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::optional<std::int64_t> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool operator==(const ExperimentConfig&) const = default;
};

/// Extractor specs: "toeplitz:n=..,m=..,k=..", "search:n=..,d=..,m=..,k=..,
/// target=..,trials=..,seed=..", "permtable:n=..,d=..,seed=..",
/// "randtable:n=..,d=..,m=..,seed=..", "file:PATH".
std::shared_ptr<const StrongSeededExtractor> build_extractor(const std::string& spec);

/// SR-extractor specs: "ideal:n=..,rows=..,rowlen=..,m=..,k=..,target=..,
/// trials=..,seed=..", "fold:n=..,rows=..,rowlen=..,m=..,seed=..",
/// "file:PATH" (lookup-table file prefixed by an sr header).
std::shared_ptr<const SRExtractor> build_basicext(const std::string& spec);

/// Source specs: "uniform:n=..", "pointmass:HEX",
/// "flat:n=..,k=..,kind=random|affine|prefix|lowweight,seed=..", "file:PATH".
DiscreteSource build_source(const std::string& spec);

ParamSet params_from_config(const ExperimentConfig& cfg, ConstraintReport* report);

// Command entry points; return process exit codes (0 ok, 1 search failure,
// 2 strict constraint violation, 3 guard/budget, 4 I/O or parse).
int cmd_params(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_search(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
               std::ostream& err);
int cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
            std::ostream& err);
int cmd_eval(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
             std::ostream& err);

}  // namespace srx
