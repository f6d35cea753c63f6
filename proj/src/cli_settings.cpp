// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <functional>
#include <map>

#include "elorank/cli.hpp"
#include "elorank/cli_settings.hpp"
#include "elorank/errors.hpp"

namespace elorank {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("setting '" + key + "': '" + raw + "' is not a valid number");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ValidationError("setting '" + key + "': '" + raw + "' is not a boolean");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const auto end = raw.find(',', start);
    const std::string piece = raw.substr(start, end == std::string::npos ? std::string::npos : end - start);
    out.push_back(parse_number<T>(key, piece));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename T, typename Field>
Setter number(Field field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = parse_number<T>(k, v); };
}

template <typename Field>
Setter text(Field field) {
  return [field](RunConfig& c, const std::string&, const std::string& v) { field(c) = v; };
}

template <typename Field>
Setter boolean(Field field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = parse_bool(k, v); };
}

template <typename T, typename Field>
Setter list(Field field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = parse_list<T>(k, v); };
}

template <typename Field>
Setter file_text(Field field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    std::ifstream in(v, std::ios::binary);
    if (!in) throw ValidationError("setting '" + k + "': cannot read " + v);
    std::ostringstream ss;
    ss << in.rdbuf();
    field(c) = ss.str();
  };
}

#define FIELD(expr) [](RunConfig & c) -> auto& { return expr; }

struct Entry {
  SettingSpec spec;
  Setter set;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"seed", "--seed", "Base random seed"}, number<std::uint64_t>(FIELD(c.seed))},
      {{"out_dir", "--out-dir", "Directory for outputs"}, text(FIELD(c.out_dir))},

      {{"corpus.path", "--data", "Corpus file (JSONL or CSV)"}, text(FIELD(c.data))},
      {{"corpus.format", "--format", "Corpus format: jsonl or csv"},
       [](RunConfig& c, const std::string&, const std::string& v) { c.format = corpus_format_from_string(v); }},
      {{"corpus.id_column", "--id-column", "Id column name"}, text(FIELD(c.columns.id_column))},
      {{"corpus.text_column", "--text-column", "Text column name"}, text(FIELD(c.columns.text_column))},
      {{"corpus.label_column", "--label-column", "Label column name"}, text(FIELD(c.columns.label_column))},
      {{"corpus.label_map", "--label-map", "Raw label mapping, e.g. 0=harmful,2=benign"}, text(FIELD(c.label_map))},
      {{"corpus.strict_labels", "--strict-labels", "Reject unknown labels instead of treating them as harmful", true},
       boolean(FIELD(c.strict_labels))},
      {{"corpus.latent_key", "--latent-key", "Meta key holding oracle latent scores"}, text(FIELD(c.latent_key))},

      {{"paths.schedule", "--schedule", "Schedule file"}, text(FIELD(c.schedule_path))},
      {{"paths.matches", "--matches", "Match log file"}, text(FIELD(c.matches_path))},
      {{"paths.metrics", "--metrics", "Metrics table CSV"}, text(FIELD(c.metrics_path))},
      {{"paths.roc", "--roc", "ROC points CSV"}, text(FIELD(c.roc_path))},
      {{"paths.cache", "--cache", "Judge cache file"}, text(FIELD(c.cache_path))},

      {{"elo.beta", "--beta", "Elo logistic scale"}, number<double>(FIELD(c.elo.beta))},
      {{"elo.k_factor", "--k", "Elo K-factor"}, number<double>(FIELD(c.elo.k_factor))},
      {{"elo.initial_rating", "--initial-rating", "Starting rating"}, number<double>(FIELD(c.elo.initial_rating))},
      {{"elo.epochs", "--epochs", "Replay passes over the match log"}, number<int>(FIELD(c.elo.epochs))},
      {{"transform.scale_c", "--scale-c", "Probability transform scale"}, number<double>(FIELD(c.transform.scale_c))},
      {{"transform.center", "--center", "Probability transform center"}, number<double>(FIELD(c.transform.center))},

      {{"tournament.m", "--m", "Comparisons per item (comma list for evaluate)"}, list<int>(FIELD(c.m))},
      {{"tournament.concurrency", "--concurrency", "Judge calls in flight"}, number<int>(FIELD(c.concurrency))},

      {{"judge.kind", "--judge", "Judge: oracle, llm or cached-llm"}, text(FIELD(c.judge))},
      {{"judge.tau", "--tau", "Oracle noise temperature"}, number<double>(FIELD(c.tau))},

      {{"llm.endpoint", "--endpoint", "Chat completions URL"}, text(FIELD(c.llm.endpoint_url))},
      {{"llm.model", "--model", "Model name"}, text(FIELD(c.llm.model_name))},
      {{"llm.api_key_env", "--api-key-env", "Environment variable holding the API key"},
       text(FIELD(c.llm.api_key_env_var))},
      {{"llm.temperature", "--temperature", "Sampling temperature"}, number<double>(FIELD(c.llm.temperature))},
      {{"llm.max_tokens", "--max-tokens", "Reply token limit"}, number<int>(FIELD(c.llm.max_tokens))},
      {{"llm.max_retries", "--max-retries", "Attempts per question"}, number<int>(FIELD(c.llm.max_retries))},
      {{"llm.timeout_ms", "--timeout-ms", "Request timeout"}, number<int>(FIELD(c.llm.timeout_ms))},
      {{"llm.requests_per_minute", "--rpm", "Request budget per minute"},
       number<int>(FIELD(c.llm.requests_per_minute))},
      {{"llm.backoff_initial_ms", "--backoff-initial-ms", "First retry delay"},
       number<int>(FIELD(c.llm.backoff_initial_ms))},
      {{"llm.backoff_max_ms", "--backoff-max-ms", "Retry delay cap"}, number<int>(FIELD(c.llm.backoff_max_ms))},
      {{"llm.debias", "--debias", "Ask both presentation orders", true}, boolean(FIELD(c.llm.debias_both_orders))},
      {{"llm.attribute", "--attribute", "Attribute the judge compares"}, text(FIELD(c.llm.attribute_description))},
      {{"llm.template_version", "--template-version", "Cache version tag for the templates"},
       text(FIELD(c.llm.template_version))},
      {{"llm.system_template", "--system-template", "System prompt template"}, text(FIELD(c.llm.system_template))},
      {{"llm.prompt_template", "--prompt-template", "Pairwise prompt template"}, text(FIELD(c.llm.prompt_template))},
      {{"llm.system_template_file", "--system-template-file", "Read the system prompt template from a file"},
       file_text(FIELD(c.llm.system_template))},
      {{"llm.prompt_template_file", "--prompt-template-file", "Read the pairwise prompt template from a file"},
       file_text(FIELD(c.llm.prompt_template))},
      {{"evaluate.zero_shot", "--zero-shot", "Add the zero-shot baseline when an LLM judge is used", true},
       boolean(FIELD(c.zero_shot))},

      {{"classify.strategy", "--threshold-strategy", "fixed, prevalence or youden"}, text(FIELD(c.threshold))},
      {{"classify.threshold", "--threshold", "Fixed probability threshold"}, number<double>(FIELD(c.threshold_value))},
      {{"classify.prevalence", "--prevalence", "Expected harmful fraction"}, number<double>(FIELD(c.prevalence))},
      {{"classify.calibration_fraction", "--calibration-fraction", "Share of items used for Youden calibration"},
       number<double>(FIELD(c.calibration_fraction))},

      {{"bootstrap.sample_size", "--sample-size", "Items per repetition"},
       number<std::size_t>(FIELD(c.bootstrap.sample_size))},
      {{"bootstrap.repetitions", "--repetitions", "Bootstrap repetitions"},
       number<std::size_t>(FIELD(c.bootstrap.repetitions))},
      {{"bootstrap.with_replacement", "--with-replacement", "Resample with replacement", true},
       boolean(FIELD(c.bootstrap.with_replacement))},
      {{"bootstrap.threads", "--threads", "Parallel repetitions"}, number<int>(FIELD(c.bootstrap.threads))},

      {{"simulate.n", "--n", "Synthetic corpus size"}, number<std::size_t>(FIELD(c.synthetic.n))},
      {{"simulate.separation", "--separation", "Distance between class centers"},
       number<double>(FIELD(c.synthetic.separation))},
      {{"simulate.spread", "--spread", "Within-class latent range"}, number<double>(FIELD(c.synthetic.spread))},
      {{"simulate.harmful_fraction", "--harmful-fraction", "Harmful share of the synthetic corpus"},
       number<double>(FIELD(c.synthetic.harmful_fraction))},
      {{"simulate.m", "--sweep-m", "Sweep values of m"}, list<int>(FIELD(c.sweep_m))},
      {{"simulate.tau", "--sweep-tau", "Sweep values of tau"}, list<double>(FIELD(c.sweep_tau))},
      {{"simulate.k", "--sweep-k", "Sweep values of K"}, list<double>(FIELD(c.sweep_k))},
      {{"simulate.epochs", "--sweep-epochs", "Sweep values of epochs"}, list<int>(FIELD(c.sweep_epochs))},
      {{"simulate.seeds", "--sweep-seeds", "Seeds per sweep cell"}, number<int>(FIELD(c.sweep_seeds))},
  };
  return entries;
}

#undef FIELD

}  // namespace

std::vector<SettingSpec> setting_specs() {
  std::vector<SettingSpec> out;
  for (const auto& e : registry()) out.push_back(e.spec);
  return out;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& e : registry()) {
    if (e.spec.key == key) {
      e.set(config, key, value);
      return;
    }
  }
  throw ValidationError("unknown setting '" + key + "'");
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ValidationError("config file not found: " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path.string());
  } catch (const CLI::Error& e) {
    throw ValidationError("config file " + path.string() + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "--" || item.name == "++") continue;  // section markers
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    try {
      apply_setting(config, item.fullname(), value);
    } catch (const std::exception& e) {
      throw ValidationError("config file " + path.string() + ": " + e.what());
    }
  }
}

}  // namespace elorank
