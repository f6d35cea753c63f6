// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "elorank/bootstrap.hpp"
#include "elorank/corpus.hpp"
#include "elorank/llm_judge.hpp"
#include "elorank/pipeline.hpp"
#include "elorank/rating_core.hpp"

namespace elorank {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitEnvironment = 3, kExitInternal = 4 };

/// Everything a command can be configured with. Filled from defaults, then
/// the TOML file named by --config, then command-line flags.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";

  std::filesystem::path data;
  std::optional<CorpusFormat> format;  // guessed from the extension when unset
  ColumnMapping columns;
  std::string label_map;
  bool strict_labels = false;
  std::string latent_key = kLatentKey;

  // Empty paths resolve to fixed names under out_dir.
  std::filesystem::path schedule_path;
  std::filesystem::path matches_path;
  std::filesystem::path metrics_path;
  std::filesystem::path roc_path;
  std::filesystem::path cache_path;

  EloParams elo;
  TransformParams transform;
  std::vector<int> m{10};
  int concurrency = 1;

  std::string judge = "oracle";  // oracle | llm | cached-llm
  double tau = 0.0;
  LlmJudgeConfig llm;
  bool zero_shot = true;  // add the zero-shot baseline to evaluate with an LLM judge

  std::string threshold = "fixed";  // fixed | prevalence | youden
  double threshold_value = 0.5;
  double prevalence = 0.5;
  double calibration_fraction = 0.2;

  BootstrapConfig bootstrap;

  TwoClassConfig synthetic;
  std::vector<int> sweep_m{10};
  std::vector<double> sweep_tau{0.0};
  std::vector<double> sweep_k{32.0};
  std::vector<int> sweep_epochs{3};
  int sweep_seeds = 1;

  std::filesystem::path resolved(const std::filesystem::path& p, const char* default_name) const {
    return p.empty() ? out_dir / default_name : p;
  }
};

/// Applies one setting by its config-file key (e.g. "elo.k_factor").
/// Unknown keys and malformed values throw ValidationError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a TOML config file and applies every key in file order.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Runs one command line (without the program name). Diagnostics go to
/// `err`, summaries to `out`. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elorank
