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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "srx/config.hpp"
#include "srx/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multi-source randomness extraction pipelines and their exact evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out", mode;
  std::uint64_t seed = 0;
  int workers = 1;
  bool seed_set = false;

  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads for enumeration");
  app.add_option("--mode", mode, "strict|relaxed (overrides config)");
  auto* seed_opt = app.add_option("--seed", seed, "rng seed (overrides config)");

  auto* params_cmd = app.add_subcommand("params", "derive parameters and print the checklist");
  auto* run_cmd = app.add_subcommand("run", "run a pipeline and write trace + metrics");
  auto* search_cmd = app.add_subcommand("search", "run extractor searches and write tables");
  auto* eval_cmd = app.add_subcommand("eval", "battery evaluation of an extractor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  seed_set = seed_opt->count() > 0;

  try {
    srx::ExperimentConfig cfg = srx::ExperimentConfig::parse_file(config_path);
    if (seed_set) cfg.set("eval", "seed", std::to_string(seed));
    if (!mode.empty()) cfg.set("params", "mode", mode);
    if (workers > 1) cfg.set("eval", "workers", std::to_string(workers));

    if (params_cmd->parsed()) return srx::cmd_params(cfg, std::cout, std::cerr);
    if (run_cmd->parsed()) return srx::cmd_run(cfg, out_dir, std::cout, std::cerr);
    if (search_cmd->parsed()) return srx::cmd_search(cfg, out_dir, std::cout, std::cerr);
    if (eval_cmd->parsed()) return srx::cmd_eval(cfg, out_dir, std::cout, std::cerr);
    return 4;
  } catch (const srx::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const srx::ConstraintError& e) {
    std::cerr << e.what() << "\n" << e.report();
    return 2;
  } catch (const srx::GuardError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const srx::SearchError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const srx::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
