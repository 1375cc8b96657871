#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rfa/agents.hpp"
#include "rfa/game.hpp"

namespace rfa {

enum class Winner : std::uint8_t { p1 = 1, p2 = 2, draw = 0 };

const char* winner_name(Winner w);
Winner winner_from_name(std::string_view s);

struct MatchRecord {
  Winner winner = Winner::draw;
  int moves = 0;
  int swap_ply = 0;  // total plies played before the attacker took over; 0 = no swap
};

struct EvalConfig {
  int opening_moves = 5;  // random opening moves per player before the swap
  int n_games = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

MatchRecord play_match(const Game& game, const PolicyFn& p1, const PolicyFn& p2, Rng& rng);

struct SwapInResult {
  std::vector<MatchRecord> records;
  int openings_retried = 0;  // games that ended before the swap and were redrawn
};

/// The swap-in protocol: the victim (p1, greedy) plays a uniform-random
/// opponent for opening_moves moves each, then the attacker takes the random
/// seat and the game is played out. Per-record rng streams are derived from
/// cfg.seed, so results do not depend on jobs.
SwapInResult evaluate_swap_in(const Game& game, const QTable& victim, const PolicyFn& attacker,
                              const EvalConfig& cfg, int jobs = 1);
SwapInResult evaluate_swap_in(const Game& game, const QTable& victim, const QTable& attacker,
                              const EvalConfig& cfg, int jobs = 1);

struct MetricsSummary {
  double win_rate = 0.0;  // attacker's
  double draw_rate = 0.0;
  double mean_moves = 0.0;
  double std_moves = 0.0;  // sample standard deviation (n-1); 0 when n == 1
  std::size_t n = 0;
};

MetricsSummary summarize(std::span<const MatchRecord> records, Player attacker);

/// Exhaustively enumerated minimax values from one player's perspective.
/// Terminal states carry value 0; a step into a terminal state backs up
/// gamma * (reward +- 1), so a win n moves away is worth exactly gamma^n.
struct ValueMap {
  std::vector<GameState> states;                   // discovery (BFS) order
  std::unordered_map<StateKey, std::size_t> index;
  std::unordered_map<StateKey, double> values;
  std::unordered_map<StateKey, ActionId> policy;   // argmax for the perspective
                                                   // player, argmin for the other
};

ValueMap value_iteration(const Game& game, Player perspective, double gamma, double tol = 1e-13,
                         std::size_t state_cap = 500000);

struct TheoremOneRow {
  StateKey key;
  int steps_to_win = 0;
  double log_gamma_value = 0.0;
  bool pass = false;
};

/// For every enumerated state the perspective player wins from (V > 0),
/// plays the joint greedy policy out and checks that the remaining move
/// count equals log_gamma V(s).
std::vector<TheoremOneRow> verify_theorem_one(const Game& game, Player perspective, double gamma);

}  // namespace rfa
