// SPDX-License-Identifier: Apache-2.0
#include "elorank/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "elorank/errors.hpp"
#include "elorank/match_log.hpp"
#include "elorank/random.hpp"

namespace elorank {

using json = nlohmann::json;

namespace {

using Edge = std::pair<int, int>;

/// Mutable graph state for one construction attempt.
class PairingGraph {
 public:
  explicit PairingGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0), degree_(n, 0) {}

  bool adjacent(int u, int v) const { return adj_[index(u, v)] != 0; }
  int degree(int u) const { return degree_[u]; }
  int size() const { return n_; }
  std::vector<Edge>& edges() { return edges_; }

  void add(int u, int v) {
    adj_[index(u, v)] = adj_[index(v, u)] = 1;
    ++degree_[u];
    ++degree_[v];
    edges_.emplace_back(u, v);
  }

  void remove_at(std::size_t i) {
    const auto [u, v] = edges_[i];
    adj_[index(u, v)] = adj_[index(v, u)] = 0;
    --degree_[u];
    --degree_[v];
    edges_[i] = edges_.back();
    edges_.pop_back();
  }

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }

  int n_;
  std::vector<char> adj_;
  std::vector<int> degree_;
  std::vector<Edge> edges_;
};

/// Greedy maximal matching over a random order, avoiding existing edges.
std::vector<Edge> random_matching(const PairingGraph& g, Rng& rng) {
  const int n = g.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Edge> best;
  for (int attempt = 0; attempt < 4; ++attempt) {
    rng.shuffle(std::span<int>(order));
    std::vector<char> matched(n, 0);
    std::vector<Edge> matching;
    for (int p = 0; p < n; ++p) {
      const int u = order[p];
      if (matched[u]) continue;
      for (int q = p + 1; q < n; ++q) {
        const int v = order[q];
        if (!matched[v] && !g.adjacent(u, v)) {
          matched[u] = matched[v] = 1;
          matching.emplace_back(u, v);
          break;
        }
      }
    }
    if (matching.size() > best.size()) best = std::move(matching);
    if (best.size() == static_cast<std::size_t>(n / 2)) break;
  }
  return best;
}

/// Finds an edge (x, y) with x not adjacent to u and y not adjacent to v, none
/// of them equal to u or v, and rewires it to (u, x), (v, y). u == v is
/// allowed and gives u two new edges.
bool switch_edge(PairingGraph& g, int u, int v, Rng& rng) {
  auto& edges = g.edges();
  if (edges.empty()) return false;
  const std::size_t start = rng.below(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::size_t i = (start + k) % edges.size();
    for (int flip = 0; flip < 2; ++flip) {
      int x = edges[i].first, y = edges[i].second;
      if (flip) std::swap(x, y);
      if (x == u || x == v || y == u || y == v) continue;
      if (g.adjacent(u, x) || g.adjacent(v, y)) continue;
      g.remove_at(i);
      g.add(u, x);
      g.add(v, y);
      return true;
    }
  }
  return false;
}

std::optional<std::vector<Edge>> try_build(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  PairingGraph g(n);
  if (m == n - 1) {
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) g.add(u, v);
    }
    rng.shuffle(std::span<Edge>(g.edges()));
    return g.edges();
  }

  for (int round = 0; round < m; ++round) {
    for (const auto& [u, v] : random_matching(g, rng)) g.add(u, v);
  }

  const long long max_steps = 10LL * n * m + 100;
  for (long long step = 0;; ++step) {
    if (step > max_steps) return std::nullopt;
    std::vector<int> deficient;
    for (int u = 0; u < n; ++u) {
      if (g.degree(u) < m) deficient.push_back(u);
    }
    if (deficient.empty()) break;
    rng.shuffle(std::span<int>(deficient));

    bool progress = false;
    for (std::size_t i = 0; i < deficient.size(); ++i) {
      const int u = deficient[i];
      for (std::size_t j = i + 1; j < deficient.size() && g.degree(u) < m; ++j) {
        const int v = deficient[j];
        if (g.degree(v) < m && !g.adjacent(u, v)) {
          g.add(u, v);
          progress = true;
        }
      }
    }
    if (progress) continue;

    // Every remaining deficient item is already adjacent to every other one.
    const int u = deficient[0];
    if (deficient.size() >= 2) {
      if (!switch_edge(g, u, deficient[1], rng)) return std::nullopt;
    } else if (m - g.degree(u) >= 2) {
      if (!switch_edge(g, u, u, rng)) return std::nullopt;
    } else {
      // Odd degree sum: exactly one item must end at m + 1.
      std::vector<int> candidates;
      for (int w = 0; w < n; ++w) {
        if (w != u && !g.adjacent(u, w) && g.degree(w) == m) candidates.push_back(w);
      }
      if (candidates.empty()) return std::nullopt;
      g.add(u, candidates[rng.below(candidates.size())]);
    }
  }
  return g.edges();
}

}  // namespace

Schedule build_schedule(const std::vector<std::string>& item_ids, int m, std::uint64_t seed) {
  const auto n = item_ids.size();
  if (n < 2) throw ValidationError("a schedule needs at least 2 items, got " + std::to_string(n));
  if (m < 1 || static_cast<std::size_t>(m) > n - 1) {
    throw ValidationError("comparisons per item must be in [1, N-1] = [1, " + std::to_string(n - 1) + "], got " +
                          std::to_string(m));
  }
  if (std::set<std::string>(item_ids.begin(), item_ids.end()).size() != n) {
    throw ValidationError("schedule item ids must be unique");
  }

  std::optional<std::vector<Edge>> edges;
  for (std::uint64_t attempt = 0; attempt < 100 && !edges; ++attempt) {
    edges = try_build(static_cast<int>(n), m, derive_seed(seed, attempt));
  }
  if (!edges) throw std::logic_error("could not construct a comparison schedule");

  Schedule s;
  s.comparisons_per_item = m;
  s.seed = seed;
  s.item_count = n;
  s.pairings.reserve(edges->size());
  Rng orient(derive_seed(seed, 0x6f7269656e74ULL));
  for (const auto& [u, v] : *edges) {
    if (orient.coin()) {
      s.pairings.push_back({item_ids[u], item_ids[v]});
    } else {
      s.pairings.push_back({item_ids[v], item_ids[u]});
    }
  }
  return s;
}

std::map<std::string, int> schedule_degrees(const Schedule& schedule) {
  std::map<std::string, int> degree;
  for (const auto& p : schedule.pairings) {
    ++degree[p.first_id];
    ++degree[p.second_id];
  }
  return degree;
}

void validate_schedule(const Schedule& schedule) {
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < schedule.pairings.size(); ++i) {
    const auto& p = schedule.pairings[i];
    if (p.first_id == p.second_id) {
      throw ValidationError("pairing " + std::to_string(i) + " compares '" + p.first_id + "' with itself");
    }
    auto key = std::minmax(p.first_id, p.second_id);
    if (!seen.emplace(key.first, key.second).second) {
      throw ValidationError("pairing " + std::to_string(i) + " repeats " + p.first_id + " vs " + p.second_id);
    }
  }
}

std::string serialize_schedule(const Schedule& schedule) {
  std::string out;
  for (std::size_t i = 0; i < schedule.pairings.size(); ++i) {
    const auto& p = schedule.pairings[i];
    out += json{{"pairing", i}, {"first_id", p.first_id}, {"second_id", p.second_id}}.dump();
    out.push_back('\n');
  }
  return out;
}

Schedule parse_schedule(std::istream& in, std::string_view source_name) {
  Schedule s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto rec = json::parse(line);
      const auto index = rec.at("pairing").get<std::size_t>();
      if (index != s.pairings.size()) throw ValidationError("pairing index out of sequence");
      s.pairings.push_back({rec.at("first_id").get<std::string>(), rec.at("second_id").get<std::string>()});
    } catch (const std::exception& e) {
      throw ValidationError(std::string(source_name) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_schedule(s);
  std::set<std::string> ids;
  for (const auto& p : s.pairings) {
    ids.insert(p.first_id);
    ids.insert(p.second_id);
  }
  s.item_count = ids.size();
  return s;
}

TournamentResult run_tournament(const Schedule& schedule, PairwiseJudge& judge,
                                const std::map<std::string, std::string>& corpus, const EloParams& params,
                                const TournamentOptions& options) {
  params.validate();
  if (options.concurrency_limit < 1) throw ValidationError("concurrency_limit must be at least 1");
  for (const auto& p : schedule.pairings) {
    for (const auto* id : {&p.first_id, &p.second_id}) {
      const auto it = corpus.find(*id);
      if (it == corpus.end()) throw ValidationError("no text for scheduled id '" + *id + "'");
      if (it->second.empty()) throw ValidationError("empty text for scheduled id '" + *id + "'");
    }
  }

  const std::size_t n = schedule.pairings.size();
  TournamentResult result;
  result.audit.resize(n);
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = schedule.pairings[i];
    if (options.log != nullptr) {
      if (auto rec = options.log->find(i)) {
        if (rec->first_id != p.first_id || rec->second_id != p.second_id) {
          throw ValidationError("match log " + options.log->path().string() + " disagrees with the schedule at pairing " +
                                std::to_string(i));
        }
        result.audit[i] = rec->verdict;
        ++result.reused;
        continue;
      }
    }
    pending.push_back(i);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  const std::string judge_name = judge.name();

  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const std::size_t i = pending[k];
      const auto& p = schedule.pairings[i];
      JudgeVerdict v;
      try {
        v = judge.compare({p.first_id, corpus.at(p.first_id), p.second_id, corpus.at(p.second_id)});
      } catch (const ConfigurationError&) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        abort.store(true);
        return;
      } catch (const ValidationError&) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        abort.store(true);
        return;
      } catch (const std::exception& e) {
        v = JudgeVerdict{Winner::Draw, std::string("[error] ") + e.what(), 1, 0, true};
      }
      if (options.log != nullptr) {
        options.log->append({i, p.first_id, p.second_id, score_for_first(v.winner), judge_name, v, utc_timestamp()});
      }
      result.audit[i] = std::move(v);
      if (options.progress) options.progress(done.fetch_add(1) + 1, pending.size());
    }
  };

  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(options.concurrency_limit), pending.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  result.matches.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = schedule.pairings[i];
    result.matches.push_back({p.first_id, p.second_id, score_for_first(result.audit[i].winner)});
  }
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& [id, text] : corpus) ids.push_back(id);
  result.ratings = replay_matches(ids, result.matches, params);
  return result;
}

}  // namespace elorank
