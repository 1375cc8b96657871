#include "rfa/game.hpp"

#include <algorithm>
#include <string>

namespace rfa {

const char* rule_set_name(RuleSet r) {
  switch (r) {
    case RuleSet::breakthrough_variant: return "breakthrough-variant";
    case RuleSet::connect_k: return "connect-k";
  }
  return "?";
}

RuleSet rule_set_from_name(std::string_view name) {
  if (name == "breakthrough-variant") return RuleSet::breakthrough_variant;
  if (name == "connect-k") return RuleSet::connect_k;
  fail(Errc::invalid_config, "unknown rule set '" + std::string(name) + "'");
}

void GameConfig::validate() const {
  if (rows < 2 || cols < 2) fail(Errc::invalid_config, "rows and cols must be >= 2");
  if (rows > 255 || cols > 255) fail(Errc::invalid_config, "rows and cols must fit a byte");
  if (rules == RuleSet::connect_k) {
    if (k < 1 || k > std::max(rows, cols))
      fail(Errc::invalid_config, "k must be in [1, max(rows, cols)]");
  } else {
    // pawn_rows < rows/2 rounded up, so the two armies never start adjacent-or-overlapping
    if (pawn_rows < 1 || pawn_rows >= (rows + 1) / 2)
      fail(Errc::invalid_config, "pawn_rows must be in [1, ceil(rows/2) - 1]");
  }
  if (max_moves != 0 && max_moves < rows * cols)
    fail(Errc::invalid_config, "max_moves must be >= rows*cols");
}

GameConfig connect_k_config(int rows, int cols, int k) {
  GameConfig cfg;
  cfg.rules = RuleSet::connect_k;
  cfg.rows = rows;
  cfg.cols = cols;
  cfg.k = k;
  cfg.validate();
  return cfg;
}

GameConfig breakthrough_config(int rows, int cols, int pawn_rows) {
  GameConfig cfg;
  cfg.rules = RuleSet::breakthrough_variant;
  cfg.rows = rows;
  cfg.cols = cols;
  cfg.pawn_rows = pawn_rows;
  cfg.validate();
  return cfg;
}

Game::Game(GameConfig cfg) : cfg_(cfg) { cfg_.validate(); }

int Game::action_space_size() const {
  if (cfg_.rules == RuleSet::connect_k) return cfg_.cols;
  return cfg_.rows * cfg_.cols * 3;
}

GameState Game::initial_state() const {
  GameState s;
  s.board.assign(static_cast<std::size_t>(cfg_.rows) * cfg_.cols, Cell::empty);
  s.mover = Player::p1;
  s.move_count = 0;
  if (cfg_.rules == RuleSet::breakthrough_variant) {
    for (int r = 0; r < cfg_.pawn_rows; ++r)
      for (int c = 0; c < cfg_.cols; ++c) s.board[static_cast<std::size_t>(r) * cfg_.cols + c] = Cell::p1;
    for (int r = cfg_.rows - cfg_.pawn_rows; r < cfg_.rows; ++r)
      for (int c = 0; c < cfg_.cols; ++c) s.board[static_cast<std::size_t>(r) * cfg_.cols + c] = Cell::p2;
  }
  return s;
}

namespace {

inline Cell at(const GameState& s, int cols, int r, int c) {
  return s.board[static_cast<std::size_t>(r) * cols + c];
}

bool has_line(const GameState& s, int rows, int cols, int k, Cell who) {
  static const int dirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (at(s, cols, r, c) != who) continue;
      for (auto [dr, dc] : dirs) {
        int rr = r + (k - 1) * dr;
        int cc = c + (k - 1) * dc;
        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
        bool all = true;
        for (int i = 1; i < k; ++i) {
          if (at(s, cols, r + i * dr, c + i * dc) != who) {
            all = false;
            break;
          }
        }
        if (all) return true;
      }
    }
  }
  return false;
}

}  // namespace

bool Game::mover_has_move(const GameState& s) const {
  const int rows = cfg_.rows, cols = cfg_.cols;
  if (cfg_.rules == RuleSet::connect_k) {
    for (int c = 0; c < cols; ++c)
      if (at(s, cols, rows - 1, c) == Cell::empty) return true;
    return false;
  }
  const Cell own = cell_of(s.mover);
  const int fwd = s.mover == Player::p1 ? 1 : -1;
  for (int r = 0; r < rows; ++r) {
    const int rf = r + fwd;
    if (rf < 0 || rf >= rows) continue;
    for (int c = 0; c < cols; ++c) {
      if (at(s, cols, r, c) != own) continue;
      if (at(s, cols, rf, c) == Cell::empty) return true;
      for (int dc : {-1, 1}) {
        const int cf = c + dc;
        if (cf >= 0 && cf < cols && at(s, cols, rf, cf) != own) return true;
      }
    }
  }
  return false;
}

GameStatus Game::status(const GameState& s) const {
  const int rows = cfg_.rows, cols = cfg_.cols;
  if (cfg_.rules == RuleSet::connect_k) {
    if (has_line(s, rows, cols, cfg_.k, Cell::p1)) return GameStatus::p1_win;
    if (has_line(s, rows, cols, cfg_.k, Cell::p2)) return GameStatus::p2_win;
    if (s.move_count >= cfg_.effective_max_moves()) return GameStatus::draw;
    bool full = true;
    for (int c = 0; c < cols && full; ++c)
      if (at(s, cols, rows - 1, c) == Cell::empty) full = false;
    if (full) return GameStatus::draw;
    return GameStatus::ongoing;
  }

  int n1 = 0, n2 = 0;
  for (Cell cell : s.board) {
    n1 += cell == Cell::p1;
    n2 += cell == Cell::p2;
  }
  for (int c = 0; c < cols; ++c) {
    if (at(s, cols, rows - 1, c) == Cell::p1) return GameStatus::p1_win;
    if (at(s, cols, 0, c) == Cell::p2) return GameStatus::p2_win;
  }
  if (n1 == 0) return GameStatus::p2_win;
  if (n2 == 0) return GameStatus::p1_win;
  if (s.move_count >= cfg_.effective_max_moves()) return GameStatus::draw;
  if (!mover_has_move(s)) return s.mover == Player::p1 ? GameStatus::p2_win : GameStatus::p1_win;
  return GameStatus::ongoing;
}

std::vector<ActionId> Game::legal_actions(const GameState& s) const {
  std::vector<ActionId> out;
  if (status(s) != GameStatus::ongoing) return out;
  const int rows = cfg_.rows, cols = cfg_.cols;
  if (cfg_.rules == RuleSet::connect_k) {
    for (int c = 0; c < cols; ++c)
      if (at(s, cols, rows - 1, c) == Cell::empty) out.push_back({c});
    return out;
  }
  const Cell own = cell_of(s.mover);
  const int fwd = s.mover == Player::p1 ? 1 : -1;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (at(s, cols, r, c) != own) continue;
      const int rf = r + fwd;
      if (rf < 0 || rf >= rows) continue;
      const int cell_index = r * cols + c;
      for (int d = 0; d < 3; ++d) {
        const int cf = c + (d - 1);
        if (cf < 0 || cf >= cols) continue;
        const Cell target = at(s, cols, rf, cf);
        const bool ok = d == 1 ? target == Cell::empty : target != own;
        if (ok) out.push_back({cell_index * 3 + d});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Game::is_legal(const GameState& s, ActionId a) const {
  if (status(s) != GameStatus::ongoing) return false;
  const int rows = cfg_.rows, cols = cfg_.cols;
  if (cfg_.rules == RuleSet::connect_k) {
    return a.index >= 0 && a.index < cols && at(s, cols, rows - 1, a.index) == Cell::empty;
  }
  if (a.index < 0 || a.index >= rows * cols * 3) return false;
  const int cell_index = a.index / 3;
  const int d = a.index % 3;
  const int r = cell_index / cols;
  const int c = cell_index % cols;
  if (at(s, cols, r, c) != cell_of(s.mover)) return false;
  const int rf = r + (s.mover == Player::p1 ? 1 : -1);
  const int cf = c + (d - 1);
  if (rf < 0 || rf >= rows || cf < 0 || cf >= cols) return false;
  const Cell target = at(s, cols, rf, cf);
  return d == 1 ? target == Cell::empty : target != cell_of(s.mover);
}

GameState Game::transition(const GameState& s, ActionId a) const {
  GameState next = s;
  const int cols = cfg_.cols;
  if (cfg_.rules == RuleSet::connect_k) {
    int r = 0;
    while (at(next, cols, r, a.index) != Cell::empty) ++r;
    next.board[static_cast<std::size_t>(r) * cols + a.index] = cell_of(s.mover);
  } else {
    const int cell_index = a.index / 3;
    const int d = a.index % 3;
    const int r = cell_index / cols;
    const int c = cell_index % cols;
    const int rf = r + (s.mover == Player::p1 ? 1 : -1);
    const int cf = c + (d - 1);
    next.board[static_cast<std::size_t>(r) * cols + c] = Cell::empty;
    next.board[static_cast<std::size_t>(rf) * cols + cf] = cell_of(s.mover);
  }
  next.mover = other(s.mover);
  next.move_count = s.move_count + 1;
  return next;
}

StepResult Game::apply(const GameState& s, ActionId a) const {
  if (!is_legal(s, a))
    fail(Errc::illegal_action, "action " + std::to_string(a.index) + " is not legal here");
  reward_queries_.fetch_add(1, std::memory_order_relaxed);
  StepResult result;
  result.next = transition(s, a);
  const GameStatus st = status(result.next);
  result.terminal = st != GameStatus::ongoing;
  if (st == GameStatus::p1_win) {
    result.reward_p1 = 1;
    result.reward_p2 = -1;
  } else if (st == GameStatus::p2_win) {
    result.reward_p1 = -1;
    result.reward_p2 = 1;
  }
  return result;
}

std::vector<std::uint8_t> Game::encode(const GameState& s) const {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(5 + s.board.size());
  bytes.push_back(1);  // encoding version
  bytes.push_back(static_cast<std::uint8_t>(cfg_.rules));
  bytes.push_back(static_cast<std::uint8_t>(cfg_.rows));
  bytes.push_back(static_cast<std::uint8_t>(cfg_.cols));
  bytes.push_back(static_cast<std::uint8_t>(s.mover));
  for (Cell c : s.board) bytes.push_back(static_cast<std::uint8_t>(c));
  return bytes;
}

StateKey Game::key(const GameState& s) const {
  const auto bytes = encode(s);
  return digest128(bytes);
}

RewardFreeGame::Advance RewardFreeGame::advance(const GameState& s, ActionId a) const {
  if (!game_->is_legal(s, a))
    fail(Errc::illegal_action, "action " + std::to_string(a.index) + " is not legal here");
  Advance out;
  out.next = game_->transition(s, a);
  out.terminal = game_->status(out.next) != GameStatus::ongoing;
  return out;
}

}  // namespace rfa
