#include "rfa/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>

namespace rfa {

const char* winner_name(Winner w) {
  switch (w) {
    case Winner::p1: return "p1";
    case Winner::p2: return "p2";
    case Winner::draw: return "draw";
  }
  return "?";
}

Winner winner_from_name(std::string_view s) {
  if (s == "p1") return Winner::p1;
  if (s == "p2") return Winner::p2;
  if (s == "draw") return Winner::draw;
  fail(Errc::bad_file, "unknown winner '" + std::string(s) + "'");
}

void EvalConfig::validate() const {
  if (n_games < 1) fail(Errc::invalid_params, "n_games must be >= 1");
  if (opening_moves < 0) fail(Errc::invalid_params, "opening_moves must be >= 0");
}

namespace {

Winner winner_of(GameStatus st) {
  switch (st) {
    case GameStatus::p1_win: return Winner::p1;
    case GameStatus::p2_win: return Winner::p2;
    default: return Winner::draw;
  }
}

}  // namespace

MatchRecord play_match(const Game& game, const PolicyFn& p1, const PolicyFn& p2, Rng& rng) {
  const RewardFreeGame view(game);
  GameState state = game.initial_state();
  GameStatus st = game.status(state);
  while (st == GameStatus::ongoing) {
    const PolicyFn& mover = state.mover == Player::p1 ? p1 : p2;
    const ActionId a = mover(view, state, rng);
    StepResult r = game.apply(state, a);
    state = std::move(r.next);
    st = game.status(state);
  }
  return {winner_of(st), state.move_count, 0};
}

namespace {

// One swap-in game; nullopt when it ended before the swap point.
std::optional<MatchRecord> swap_in_once(const Game& game, const PolicyFn& victim,
                                        const PolicyFn& attacker, int opening_moves, Rng& rng) {
  const RewardFreeGame view(game);
  const PolicyFn random = uniform_random_policy();
  const int swap_ply = 2 * opening_moves;
  GameState state = game.initial_state();
  GameStatus st = game.status(state);
  while (st == GameStatus::ongoing) {
    const bool opening = state.move_count < swap_ply;
    const PolicyFn& mover =
        state.mover == Player::p1 ? victim : (opening ? random : attacker);
    const ActionId a = mover(view, state, rng);
    StepResult r = game.apply(state, a);
    state = std::move(r.next);
    st = game.status(state);
    if (st != GameStatus::ongoing && state.move_count <= swap_ply) return std::nullopt;
  }
  return MatchRecord{winner_of(st), state.move_count, swap_ply};
}

}  // namespace

SwapInResult evaluate_swap_in(const Game& game, const QTable& victim, const PolicyFn& attacker,
                              const EvalConfig& cfg, int jobs) {
  cfg.validate();
  const PolicyFn victim_policy = greedy_policy(victim);
  SwapInResult out;
  out.records.resize(static_cast<std::size_t>(cfg.n_games));
  std::atomic<int> retried{0};

  auto run_range = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt >= 10000)
          fail(Errc::opening_too_long,
               "game " + std::to_string(i) + " never survived the opening");
        Rng rng = make_rng(cfg.seed, "swap-in",
                           (attempt << 32) | static_cast<std::uint64_t>(i));
        auto rec = swap_in_once(game, victim_policy, attacker, cfg.opening_moves, rng);
        if (rec) {
          out.records[static_cast<std::size_t>(i)] = *rec;
          break;
        }
        retried.fetch_add(1, std::memory_order_relaxed);
      }
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    run_range(0, cfg.n_games);
  } else {
    std::vector<std::thread> workers;
    const int chunk = (cfg.n_games + jobs - 1) / jobs;
    std::exception_ptr first_error;
    std::mutex error_mu;
    for (int w = 0; w < jobs; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(cfg.n_games, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back([&, lo, hi] {
        try {
          run_range(lo, hi);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  out.openings_retried = retried.load();
  return out;
}

SwapInResult evaluate_swap_in(const Game& game, const QTable& victim, const QTable& attacker,
                              const EvalConfig& cfg, int jobs) {
  // The swapped-in attacker plays fully greedy; randomness belongs to the opening only.
  return evaluate_swap_in(game, victim, greedy_policy(attacker), cfg, jobs);
}

MetricsSummary summarize(std::span<const MatchRecord> records, Player attacker) {
  if (records.empty()) fail(Errc::empty_records, "nothing to summarize");
  MetricsSummary m;
  m.n = records.size();
  const Winner want = attacker == Player::p1 ? Winner::p1 : Winner::p2;
  double sum = 0.0;
  for (const auto& r : records) {
    m.win_rate += r.winner == want;
    m.draw_rate += r.winner == Winner::draw;
    sum += r.moves;
  }
  m.win_rate /= static_cast<double>(m.n);
  m.draw_rate /= static_cast<double>(m.n);
  m.mean_moves = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (const auto& r : records) {
      const double d = r.moves - m.mean_moves;
      ss += d * d;
    }
    m.std_moves = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

namespace {

struct Edge {
  std::int64_t next = -1;  // index into states; -1 when terminal
  int reward_perspective = 0;
  ActionId action;
};

}  // namespace

ValueMap value_iteration(const Game& game, Player perspective, double gamma, double tol,
                         std::size_t state_cap) {
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::invalid_params, "gamma must be in (0,1)");
  ValueMap vm;
  std::deque<std::size_t> frontier;

  const GameState root = game.initial_state();
  vm.states.push_back(root);
  vm.index.emplace(game.key(root), 0);
  frontier.push_back(0);

  // BFS enumeration; edges cached for the sweeps.
  std::vector<std::vector<Edge>> edges(1);
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    const GameState s = vm.states[i];  // copy: states vector reallocates below
    if (game.is_terminal(s)) continue;
    for (const ActionId a : game.legal_actions(s)) {
      StepResult r = game.apply(s, a);
      Edge e;
      e.action = a;
      e.reward_perspective = reward_for(perspective, r);
      if (!r.terminal) {
        const StateKey k = game.key(r.next);
        auto [it, inserted] = vm.index.emplace(k, vm.states.size());
        if (inserted) {
          if (vm.states.size() >= state_cap)
            fail(Errc::state_space_cap_exceeded,
                 "more than " + std::to_string(state_cap) + " reachable states");
          vm.states.push_back(std::move(r.next));
          edges.emplace_back();
          frontier.push_back(it->second);
        }
        e.next = static_cast<std::int64_t>(it->second);
      }
      edges[i].push_back(e);
    }
  }

  const std::size_t n = vm.states.size();
  std::vector<double> v(n, 0.0);
  std::vector<double> v_next(n, 0.0);
  std::vector<ActionId> pol(n);

  double change = 0.0;
  do {
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (edges[i].empty()) {  // terminal
        v_next[i] = 0.0;
        continue;
      }
      const bool maximize = vm.states[i].mover == perspective;
      double best = 0.0;
      ActionId best_a = edges[i].front().action;
      bool first = true;
      for (const Edge& e : edges[i]) {
        const double cont = e.next < 0 ? 0.0 : v[static_cast<std::size_t>(e.next)];
        const double q = gamma * (e.reward_perspective + cont);
        if (first || (maximize ? q > best : q < best)) {
          best = q;
          best_a = e.action;
          first = false;
        }
      }
      v_next[i] = best;
      pol[i] = best_a;
      change = std::max(change, std::abs(v_next[i] - v[i]));
    }
    v.swap(v_next);
  } while (change > tol);

  for (std::size_t i = 0; i < n; ++i) {
    const StateKey k = game.key(vm.states[i]);
    vm.values.emplace(k, v[i]);
    if (!edges[i].empty()) vm.policy.emplace(k, pol[i]);
  }
  return vm;
}

std::vector<TheoremOneRow> verify_theorem_one(const Game& game, Player perspective, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::invalid_params, "gamma must be in (0,1)");
  const ValueMap vm = value_iteration(game, perspective, gamma);
  const double log_gamma = std::log(gamma);

  std::vector<TheoremOneRow> rows;
  for (const GameState& s : vm.states) {
    const StateKey k = game.key(s);
    const double value = vm.values.at(k);
    if (!(value > 1e-9) || game.is_terminal(s)) continue;  // theorem premise: the player wins

    // Joint greedy playout: the perspective player maximizes, the opponent
    // minimizes, both from the same value map.
    GameState cur = s;
    int n = 0;
    bool won = false;
    while (true) {
      auto it = vm.policy.find(game.key(cur));
      if (it == vm.policy.end()) break;
      StepResult r = game.apply(cur, it->second);
      ++n;
      cur = std::move(r.next);
      if (r.terminal) {
        won = reward_for(perspective, r) > 0;
        break;
      }
    }

    TheoremOneRow row;
    row.key = k;
    row.steps_to_win = n;
    row.log_gamma_value = std::log(value) / log_gamma;
    row.pass = won && std::abs(row.log_gamma_value - n) <= 1e-9;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rfa
