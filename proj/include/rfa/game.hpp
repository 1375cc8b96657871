#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "rfa/common.hpp"
#include "rfa/state_key.hpp"

namespace rfa {

enum class Player : std::uint8_t { p1 = 1, p2 = 2 };
enum class Cell : std::uint8_t { empty = 0, p1 = 1, p2 = 2 };

inline Player other(Player p) { return p == Player::p1 ? Player::p2 : Player::p1; }
inline Cell cell_of(Player p) { return p == Player::p1 ? Cell::p1 : Cell::p2; }

enum class RuleSet : std::uint8_t { breakthrough_variant = 1, connect_k = 2 };

const char* rule_set_name(RuleSet r);
RuleSet rule_set_from_name(std::string_view name);  // throws invalid-config

/// Board geometry and rule parameters. Row 0 is p1's home side; p1 pawns
/// advance toward row rows-1 and connect-k pieces stack upward from row 0.
struct GameConfig {
  RuleSet rules = RuleSet::connect_k;
  int rows = 4;
  int cols = 4;
  int k = 3;          // connect-k: line length needed to win
  int pawn_rows = 1;  // breakthrough-variant: home rows filled with pawns
  int max_moves = 0;  // forced-draw cap; 0 means the default 4*rows*cols

  void validate() const;  // throws invalid-config
  int effective_max_moves() const { return max_moves > 0 ? max_moves : 4 * rows * cols; }
};

GameConfig connect_k_config(int rows = 4, int cols = 4, int k = 3);
GameConfig breakthrough_config(int rows = 4, int cols = 4, int pawn_rows = 1);

/// Index into the rule set's dense action enumeration.
/// connect-k: the column. breakthrough-variant: from_cell * 3 + d with
/// d in {0,1,2} for a column step of {-1,0,+1} (forward row implied by mover).
struct ActionId {
  int index = 0;
  auto operator<=>(const ActionId&) const = default;
};

struct GameState {
  std::vector<Cell> board;  // row-major, rows*cols cells
  Player mover = Player::p1;
  int move_count = 0;
};

enum class GameStatus : std::uint8_t { ongoing = 0, p1_win, p2_win, draw };

struct StepResult {
  GameState next;
  bool terminal = false;
  int reward_p1 = 0;  // +1/-1 on a decisive terminal step, else 0
  int reward_p2 = 0;
};

inline int reward_for(Player p, const StepResult& r) {
  return p == Player::p1 ? r.reward_p1 : r.reward_p2;
}

/// Deterministic turn-based two-player game. States are immutable values;
/// every method is a pure function of (config, arguments), so a const Game
/// can be shared across threads freely. apply() is the only reward source
/// and counts how often it has been asked, which lets tests assert that
/// reward-free code paths never touched it.
class Game {
 public:
  explicit Game(GameConfig cfg);
  Game(const Game& g) : cfg_(g.cfg_) {}
  Game& operator=(const Game& g) {
    cfg_ = g.cfg_;
    return *this;
  }

  const GameConfig& config() const { return cfg_; }
  int action_space_size() const;

  GameState initial_state() const;
  GameStatus status(const GameState& s) const;
  bool is_terminal(const GameState& s) const { return status(s) != GameStatus::ongoing; }

  /// Sorted by index; empty exactly when the state is terminal.
  std::vector<ActionId> legal_actions(const GameState& s) const;
  bool is_legal(const GameState& s, ActionId a) const;

  /// Applies a legal action and materializes terminal rewards.
  StepResult apply(const GameState& s, ActionId a) const;

  /// Canonical byte encoding, version 1:
  ///   [version, rule id, rows, cols, mover, cells row-major...]
  /// one byte per field/cell, fixed order. Keys are the 128-bit digest of it.
  std::vector<std::uint8_t> encode(const GameState& s) const;
  StateKey key(const GameState& s) const;

  std::uint64_t reward_queries() const { return reward_queries_.load(std::memory_order_relaxed); }
  void reset_reward_queries() const { reward_queries_.store(0, std::memory_order_relaxed); }

 private:
  friend class RewardFreeGame;

  GameState transition(const GameState& s, ActionId a) const;
  bool mover_has_move(const GameState& s) const;

  GameConfig cfg_;
  mutable std::atomic<std::uint64_t> reward_queries_{0};
};

/// The surface the attacker is allowed to see: transitions and terminality,
/// never rewards or winners. There is no way to reach a StepResult through
/// this type, so the reward-free boundary holds by construction.
class RewardFreeGame {
 public:
  /*implicit*/ RewardFreeGame(const Game& game) : game_(&game) {}

  const GameConfig& config() const { return game_->config(); }
  int action_space_size() const { return game_->action_space_size(); }
  GameState initial_state() const { return game_->initial_state(); }
  bool is_terminal(const GameState& s) const { return game_->is_terminal(s); }
  std::vector<ActionId> legal_actions(const GameState& s) const {
    return game_->legal_actions(s);
  }
  StateKey key(const GameState& s) const { return game_->key(s); }

  struct Advance {
    GameState next;
    bool terminal = false;
  };
  Advance advance(const GameState& s, ActionId a) const;

 private:
  const Game* game_;
};

}  // namespace rfa
