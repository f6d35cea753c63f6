// SPDX-License-Identifier: Apache-2.0
#include "elorank/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "elorank/cli_settings.hpp"
#include "elorank/csv.hpp"
#include "elorank/errors.hpp"
#include "elorank/hashing.hpp"
#include "elorank/judge_cache.hpp"
#include "elorank/log.hpp"
#include "elorank/match_log.hpp"
#include "elorank/oracle_judge.hpp"
#include "elorank/random.hpp"
#include "elorank/report.hpp"
#include "elorank/stats.hpp"

namespace elorank {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Sub-stream indices of the global seed.
constexpr std::uint64_t kJudgeStream = 3;
constexpr std::uint64_t kCalibrationStream = 4;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EnvironmentError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw EnvironmentError("failed writing " + path.string());
}

fs::path manifest_path(const fs::path& artifact) {
  fs::path p = artifact;
  p.replace_extension(".manifest.json");
  return p;
}

Dataset load_corpus(const RunConfig& c) {
  if (c.data.empty()) throw ValidationError("no corpus given (--data or corpus.path)");
  if (!fs::is_regular_file(c.data)) throw ValidationError("corpus file not found: " + c.data.string());
  ColumnMapping columns = c.columns;
  columns.labels = LabelMapping::parse(c.label_map, !c.strict_labels);
  return load_dataset(c.data, c.format.value_or(corpus_format_for(c.data)), columns);
}

int single_m(const RunConfig& c) {
  if (c.m.size() != 1) throw ValidationError("this command takes a single value of m");
  return c.m.front();
}

std::vector<std::string> calibration_ids(const Dataset& dataset, const RunConfig& c) {
  if (!(c.calibration_fraction > 0.0 && c.calibration_fraction <= 1.0)) {
    throw ValidationError("calibration_fraction must be in (0, 1]");
  }
  auto n = static_cast<std::size_t>(std::llround(c.calibration_fraction * static_cast<double>(dataset.size())));
  n = std::clamp<std::size_t>(n, 2, dataset.size());
  return sample(dataset, n, derive_seed(c.seed, kCalibrationStream), true).ids();
}

ThresholdStrategy make_strategy(const RunConfig& c, const Dataset& dataset) {
  ThresholdStrategy s;
  if (c.threshold == "fixed") {
    s = FixedThreshold{c.threshold_value};
  } else if (c.threshold == "prevalence") {
    s = PrevalenceQuantile{c.prevalence};
  } else if (c.threshold == "youden") {
    s = YoudenCalibration{calibration_ids(dataset, c)};
  } else {
    throw ValidationError("unknown threshold strategy '" + c.threshold + "' (fixed, prevalence, youden)");
  }
  validate_strategy(s);
  return s;
}

// Forwards to a judge shared across repetitions.
class SharedJudge final : public PairwiseJudge {
 public:
  explicit SharedJudge(std::shared_ptr<PairwiseJudge> inner) : inner_(std::move(inner)) {}
  JudgeVerdict compare(const ComparisonRequest& r) override { return inner_->compare(r); }
  std::string name() const override { return inner_->name(); }

 private:
  std::shared_ptr<PairwiseJudge> inner_;
};

// Owns the judge objects selected by the configuration.
struct JudgeSetup {
  std::map<std::string, double> latent;
  std::shared_ptr<JudgeCache> cache;
  std::shared_ptr<LlmJudge> llm;
  std::shared_ptr<PairwiseJudge> shared;  // llm or cached-llm
  double tau = 0.0;

  bool is_llm() const { return shared != nullptr; }

  std::unique_ptr<PairwiseJudge> make(std::uint64_t seed) const {
    if (shared) return std::make_unique<SharedJudge>(shared);
    return std::make_unique<OracleJudge>(OracleParams{latent, tau, seed});
  }
};

JudgeSetup make_judges(const RunConfig& c, const Dataset& dataset) {
  JudgeSetup s;
  if (c.judge == "oracle") {
    s.latent = latent_scores(dataset, c.latent_key);
    s.tau = c.tau;
    OracleJudge check(OracleParams{{}, c.tau, 0});
    return s;
  }
  if (c.judge != "llm" && c.judge != "cached-llm") {
    throw ValidationError("unknown judge '" + c.judge + "' (oracle, llm, cached-llm)");
  }
  c.llm.validate_pairwise();
  s.llm = std::make_shared<LlmJudge>(c.llm);
  s.shared = s.llm;
  if (c.judge == "cached-llm") {
    s.cache = std::make_shared<JudgeCache>(c.resolved(c.cache_path, "judge_cache.jsonl"));
    auto cached = std::make_shared<CachedJudge>(
        *s.llm, *s.cache, CacheKeyContext{c.llm.effective_template_version(), c.llm.model_name});
    // Keep the wrapped judge and cache alive with the decorator.
    s.shared = std::shared_ptr<PairwiseJudge>(cached, cached.get());
  }
  return s;
}

json read_manifest(const fs::path& path) {
  const auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest " + path.string() + ": " + e.what());
  }
}

template <typename T>
T manifest_field(const json& j, const char* key, const fs::path& path) {
  if (!j.contains(key)) throw ValidationError("manifest " + path.string() + " lacks '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("manifest " + path.string() + " has a malformed '" + key + "'");
  }
}

// --- commands --------------------------------------------------------------

int cmd_schedule(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_corpus(c);
  const int m = single_m(c);
  const Schedule schedule = build_schedule(dataset.ids(), m, c.seed);
  const std::string body = serialize_schedule(schedule);
  const fs::path path = c.resolved(c.schedule_path, "schedule.jsonl");
  write_file(path, body);

  json manifest;
  manifest["seed"] = c.seed;
  manifest["m"] = m;
  manifest["n"] = dataset.size();
  manifest["pairings"] = schedule.pairings.size();
  manifest["dataset_sha256"] = content_hash(dataset);
  manifest["schedule_sha256"] = sha256_hex(body);
  write_file(manifest_path(path), manifest.dump(2) + "\n");
  out << "wrote " << schedule.pairings.size() << " pairings for " << dataset.size() << " items (m=" << m << ") to "
      << path.string() << "\n";
  return kExitOk;
}

int cmd_judge(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset dataset = load_corpus(c);
  const fs::path schedule_file = c.resolved(c.schedule_path, "schedule.jsonl");
  const std::string body = read_file(schedule_file);
  const fs::path mpath = manifest_path(schedule_file);
  const json manifest = read_manifest(mpath);
  if (manifest_field<std::string>(manifest, "dataset_sha256", mpath) != content_hash(dataset)) {
    throw ValidationError("schedule " + schedule_file.string() + " was built for a different corpus");
  }
  if (manifest_field<std::string>(manifest, "schedule_sha256", mpath) != sha256_hex(body)) {
    throw ValidationError("schedule " + schedule_file.string() + " does not match its manifest");
  }
  std::istringstream in(body);
  Schedule schedule = parse_schedule(in, schedule_file.string());
  schedule.comparisons_per_item = manifest_field<int>(manifest, "m", mpath);
  schedule.seed = manifest_field<std::uint64_t>(manifest, "seed", mpath);
  schedule.item_count = dataset.size();

  const JudgeSetup judges = make_judges(c, dataset);
  auto judge = judges.make(derive_seed(c.seed, kJudgeStream));

  std::map<std::string, std::string> texts;
  for (const auto& e : dataset.entries()) texts.emplace(e.id, e.text);

  const fs::path log_path = c.resolved(c.matches_path, "matches.jsonl");
  if (log_path.has_parent_path()) fs::create_directories(log_path.parent_path());
  MatchLog log(log_path);
  std::mutex progress_mu;
  std::size_t last_decile = 0;
  TournamentOptions options;
  options.concurrency_limit = c.concurrency;
  options.log = &log;
  options.progress = [&](std::size_t done, std::size_t total) {
    std::lock_guard lock(progress_mu);
    const std::size_t decile = done * 10 / total;
    if (decile > last_decile || done == total) {
      last_decile = decile;
      err << "judged " << done << "/" << total << "\n";
    }
  };
  const auto result = run_tournament(schedule, *judge, texts, c.elo, options);

  std::size_t flagged = 0;
  for (const auto& v : result.audit) flagged += v.flagged ? 1 : 0;
  const double rate = schedule.pairings.empty() ? 0.0
                                                : static_cast<double>(flagged) / static_cast<double>(schedule.pairings.size());

  json summary;
  summary["seed"] = c.seed;
  summary["judge"] = judge->name();
  summary["pairings"] = schedule.pairings.size();
  summary["flagged"] = flagged;
  summary["flagged_rate"] = rate;
  summary["dataset_sha256"] = content_hash(dataset);
  summary["schedule_sha256"] = sha256_hex(body);
  write_file(manifest_path(log_path), summary.dump(2) + "\n");

  out << "judged " << schedule.pairings.size() - result.reused << " pairings, reused " << result.reused
      << "; flagged draws " << flagged << " (" << format_fixed(100.0 * rate, 1) << "%)\n";
  return kExitOk;
}

int cmd_score(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_corpus(c);
  const fs::path log_path = c.resolved(c.matches_path, "matches.jsonl");
  if (!fs::is_regular_file(log_path)) throw ValidationError("match log not found: " + log_path.string());
  const auto matches = read_match_outcomes(log_path);

  EloParams elo = c.elo;
  elo.shuffle_seed = c.seed;
  const auto ids = dataset.ids();
  const auto ratings = replay_matches(ids, matches, elo);

  ProbabilityMap probs;
  for (const auto& [id, r] : ratings) probs[id] = transform_to_probability(r, c.transform);
  const auto strategy = make_strategy(c, dataset);
  LabelMap labels;
  if (std::holds_alternative<YoudenCalibration>(strategy)) {
    const auto gold = dataset.gold();
    labels = assign_labels(probs, strategy, &gold);
  } else {
    labels = assign_labels(probs, strategy);
  }

  Sha256 inputs;
  inputs.update(content_hash(dataset));
  for (const auto& m : matches) {
    inputs.update("\n" + m.a_id + "\t" + m.b_id + "\t" + format_double(m.score_a));
  }

  std::vector<std::string> order = ids;
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return probs.at(a) != probs.at(b) ? probs.at(a) > probs.at(b) : a < b;
  });
  std::ostringstream csv;
  csv << provenance_line({c.seed, inputs.hex_digest()}) << '\n';
  csv << csv_line({"id", "rating", "probability", "label"}) << '\n';
  for (const auto& id : order) {
    csv << csv_line({id, format_double(ratings.at(id)), format_double(probs.at(id)), std::string(to_string(labels.at(id)))}) << '\n';
  }
  const fs::path path = c.out_dir / "scores.csv";
  write_file(path, csv.str());
  out << "scored " << ids.size() << " items from " << matches.size() << " matches (" << describe(strategy) << ") to "
      << path.string() << "\n";
  return kExitOk;
}

void write_evaluation(const RunConfig& c, const BootstrapResults& results, const Provenance& prov,
                      std::ostream& out) {
  std::ostringstream metrics, reps, roc;
  write_metrics_csv(metrics, results, prov);
  write_repetitions_csv(reps, results, prov);
  write_roc_csv(roc, results, prov);
  write_file(c.resolved(c.metrics_path, "metrics.csv"), metrics.str());
  write_file(c.out_dir / "repetitions.csv", reps.str());
  write_file(c.resolved(c.roc_path, "roc.csv"), roc.str());
  if (results.size() >= 2) {
    std::ostringstream omni;
    write_omnibus_csv(omni, omnibus(results), prov);
    write_file(c.out_dir / "omnibus.csv", omni.str());
  }

  std::istringstream metrics_in(metrics.str()), roc_in(roc.str());
  out << render_summary(read_metrics_csv(metrics_in, "metrics"), read_roc_csv(roc_in, "roc"));
}

int cmd_evaluate(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_corpus(c);
  if (!dataset.fully_labeled()) throw ValidationError("evaluate needs a fully labeled corpus");
  const double prev = prevalence(dataset);
  if (prev == 0.0 || prev == 1.0) throw ValidationError("evaluate needs both harmful and benign items");
  if (c.m.empty()) throw ValidationError("no value of m given");

  const JudgeSetup judges = make_judges(c, dataset);
  const ThresholdStrategy strategy = make_strategy(c, dataset);
  std::vector<NamedPipeline> pipelines;
  for (int m : c.m) {
    EloPipelineConfig pc;
    pc.m = m;
    pc.elo = c.elo;
    pc.transform = c.transform;
    pc.strategy = strategy;
    pc.concurrency_limit = c.concurrency;
    pipelines.push_back({"elo-m" + std::to_string(m),
                         make_elo_pipeline([&judges](std::uint64_t s) { return judges.make(s); }, pc)});
  }
  std::unique_ptr<ZeroShotClassifier> zero_shot;
  if (judges.is_llm() && c.zero_shot) {
    auto zc = c.llm.zero_shot_variant();
    zc.validate_single();
    zero_shot = std::make_unique<ZeroShotClassifier>(zc);
    pipelines.push_back({"zero-shot", make_zero_shot_pipeline(*zero_shot)});
  }

  BootstrapConfig bc = c.bootstrap;
  bc.seed = c.seed;
  const auto results = bootstrap_evaluate(dataset, pipelines, bc);
  for (const auto& [name, r] : results) {
    if (r.failed > 0) log_warning(name + ": " + std::to_string(r.failed) + " repetitions failed");
    if (r.redrawn > 0) log_info(name + ": " + std::to_string(r.redrawn) + " single-class draws were stratified");
  }
  write_evaluation(c, results, {c.seed, content_hash(dataset)}, out);
  return kExitOk;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  if (c.sweep_m.empty() || c.sweep_tau.empty() || c.sweep_k.empty() || c.sweep_epochs.empty()) {
    throw ValidationError("sweep lists must not be empty");
  }
  if (c.sweep_seeds < 1) throw ValidationError("simulate.seeds must be at least 1");

  std::vector<Dataset> corpora;
  for (int s = 0; s < c.sweep_seeds; ++s) {
    TwoClassConfig tc = c.synthetic;
    tc.seed = c.seed + static_cast<std::uint64_t>(s);
    corpora.push_back(two_class_corpus(tc));
  }
  write_file(c.out_dir / "synthetic_corpus.jsonl", serialize_jsonl(corpora.front()));

  Sha256 inputs;
  for (const auto& d : corpora) inputs.update(content_hash(d));
  std::ostringstream csv;
  csv << provenance_line({c.seed, inputs.hex_digest()}) << '\n';
  csv << csv_line({"m", "tau", "k", "epochs", "seeds", "accuracy_mean", "roc_auc_mean", "spearman_mean"}) << '\n';

  const auto strategy = make_strategy(c, corpora.front());
  std::size_t cells = 0;
  for (int m : c.sweep_m) {
    for (double tau : c.sweep_tau) {
      for (double k : c.sweep_k) {
        for (int epochs : c.sweep_epochs) {
          std::vector<double> acc, auc, rho;
          for (int s = 0; s < c.sweep_seeds; ++s) {
            const Dataset& corpus = corpora[static_cast<std::size_t>(s)];
            const auto latent = latent_scores(corpus);
            EloPipelineConfig pc;
            pc.m = m;
            pc.elo = c.elo;
            pc.elo.k_factor = k;
            pc.elo.epochs = epochs;
            pc.transform = c.transform;
            pc.strategy = strategy;
            pc.concurrency_limit = c.concurrency;
            auto pipeline = make_elo_pipeline(
                [&latent, tau](std::uint64_t seed) {
                  return std::make_unique<OracleJudge>(OracleParams{latent, tau, seed});
                },
                pc);
            BootstrapConfig bc;
            bc.sample_size = corpus.size();
            bc.repetitions = 1;
            bc.seed = c.seed + static_cast<std::uint64_t>(s);
            const auto r = bootstrap_evaluate(corpus, pipeline, bc);
            const auto& rep = r.repetitions.front();
            if (!rep.ok) throw ValidationError("simulation cell failed: " + rep.error);
            acc.push_back(rep.report.accuracy);
            auc.push_back(rep.report.roc_auc);
            std::vector<double> x, y;
            for (const auto& [id, score] : rep.scores) {
              x.push_back(score);
              y.push_back(latent.at(id));
            }
            rho.push_back(spearman_rho(x, y));
          }
          csv << csv_line({std::to_string(m), format_double(tau), format_double(k), std::to_string(epochs),
                           std::to_string(c.sweep_seeds), format_double(mean_of(acc)), format_double(mean_of(auc)),
                           format_double(mean_of(rho))})
              << '\n';
          ++cells;
        }
      }
    }
  }
  const fs::path path = c.out_dir / "simulate.csv";
  write_file(path, csv.str());
  out << "simulated " << cells << " cells x " << c.sweep_seeds << " seeds to " << path.string() << "\n";
  return kExitOk;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

int cmd_report(const RunConfig& c, std::ostream& out) {
  const fs::path metrics_file = c.resolved(c.metrics_path, "metrics.csv");
  const fs::path roc_file = c.resolved(c.roc_path, "roc.csv");
  const bool have_metrics = fs::is_regular_file(metrics_file);
  const bool have_roc = fs::is_regular_file(roc_file);
  if (!have_metrics && !have_roc) {
    throw ValidationError("nothing to report: neither " + metrics_file.string() + " nor " + roc_file.string() +
                          " exists");
  }
  std::vector<MetricsRow> metrics;
  std::vector<RocSeries> roc;
  std::string comment = "ROC curves";
  if (have_metrics) {
    std::istringstream in(read_file(metrics_file));
    metrics = read_metrics_csv(in, metrics_file.string());
  }
  if (have_roc) {
    const std::string text = read_file(roc_file);
    std::istringstream in(text);
    roc = read_roc_csv(in, roc_file.string());
    const std::string head = first_line(text);
    comment += "; source " + roc_file.filename().string() + " sha256=" + sha256_hex(text);
    if (head.rfind("# ", 0) == 0) comment += "; " + head.substr(2);
    const fs::path svg = c.out_dir / "roc.svg";
    write_file(svg, render_roc_svg(roc, comment));
  }
  out << render_summary(metrics, roc);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elo tournament scoring for harmful-content classification", "elorank"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_file;
  app.add_option("--config", config_file, "TOML config file")->check(CLI::ExistingFile);
  const auto specs = setting_specs();
  std::vector<std::string> raw(specs.size());
  std::vector<CLI::Option*> opts(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.is_flag) {
      const std::string name = s.flag.substr(2);
      opts[i] = app.add_flag(s.flag + "{true},--no-" + name + "{false}", raw[i], s.help);
    } else {
      opts[i] = app.add_option(s.flag, raw[i], s.help);
    }
  }

  auto* schedule = app.add_subcommand("schedule", "Build the comparison schedule");
  auto* judge = app.add_subcommand("judge", "Judge every scheduled pairing into the match log");
  auto* score = app.add_subcommand("score", "Replay the match log into ratings, probabilities and labels");
  auto* evaluate = app.add_subcommand("evaluate", "Bootstrap evaluation against gold labels");
  auto* simulate = app.add_subcommand("simulate", "Oracle parameter sweep on a synthetic corpus");
  auto* report = app.add_subcommand("report", "Summarize metrics and draw ROC curves");
  for (auto* sub : {schedule, judge, score, evaluate, simulate, report}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_file.empty()) apply_config_file(config, config_file);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (opts[i]->count() > 0) apply_setting(config, specs[i].key, raw[i]);
    }
    if (schedule->parsed()) return cmd_schedule(config, out);
    if (judge->parsed()) return cmd_judge(config, out, err);
    if (score->parsed()) return cmd_score(config, out);
    if (evaluate->parsed()) return cmd_evaluate(config, out);
    if (simulate->parsed()) return cmd_simulate(config, out);
    return cmd_report(config, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const EnvironmentError& e) {
    err << "environment error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const fs::filesystem_error& e) {
    err << "environment error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace elorank
