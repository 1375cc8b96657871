#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rfa/game.hpp"
#include "test_util.hpp"

using namespace rfa;

namespace {

GameState play_line(const Game& game, std::initializer_list<int> actions) {
  GameState s = game.initial_state();
  for (int a : actions) s = game.apply(s, {a}).next;
  return s;
}

}  // namespace

TEST_CASE("config invariants") {
  CHECK_THROWS_AS(connect_k_config(1, 4, 3), Error);
  CHECK_THROWS_AS(connect_k_config(4, 1, 3), Error);
  CHECK_THROWS_AS(connect_k_config(4, 4, 5), Error);  // k > max(rows, cols)
  CHECK_NOTHROW(connect_k_config(4, 6, 6));
  CHECK_THROWS_AS(breakthrough_config(4, 4, 2), Error);  // pawn_rows >= ceil(rows/2)
  CHECK_NOTHROW(breakthrough_config(5, 4, 2));
  GameConfig cfg = connect_k_config(4, 4, 3);
  cfg.max_moves = 15;  // below rows*cols
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(connect_k_config(4, 4, 3).effective_max_moves() == 64);
  CHECK_THROWS_AS(rule_set_from_name("chess"), Error);
}

TEST_CASE("connect-k start position") {
  const Game game(connect_k_config(4, 4, 3));
  const GameState s = game.initial_state();
  CHECK(s.mover == Player::p1);
  CHECK(s.move_count == 0);
  CHECK(std::count(s.board.begin(), s.board.end(), Cell::empty) == 16);
  CHECK(game.legal_actions(s).size() == 4);
}

TEST_CASE("breakthrough start position and move counts") {
  const Game game(breakthrough_config(4, 4, 1));
  const GameState s = game.initial_state();
  int p1 = 0, p2 = 0;
  for (int c = 0; c < 4; ++c) {
    p1 += s.board[static_cast<std::size_t>(0) * 4 + c] == Cell::p1;
    p2 += s.board[static_cast<std::size_t>(3) * 4 + c] == Cell::p2;
  }
  CHECK(p1 == 4);
  CHECK(p2 == 4);
  // Edge pawns: straight + one diagonal. Interior pawns: straight + two.
  CHECK(game.legal_actions(s).size() == 10);
}

TEST_CASE("connect-k three in a column wins") {
  const Game game(connect_k_config(4, 4, 3));
  GameState s = game.initial_state();
  // p1 stacks column 1; p2 answers in column 0 (only twice, no counter-win).
  StepResult r;
  for (int mv : {1, 0, 1, 0}) {
    r = game.apply(s, {mv});
    CHECK_FALSE(r.terminal);
    s = r.next;
  }
  r = game.apply(s, {1});
  CHECK(r.terminal);
  CHECK(r.reward_p1 == 1);
  CHECK(r.reward_p2 == -1);
  CHECK(game.legal_actions(r.next).empty());
}

TEST_CASE("full board without a line is a draw") {
  const Game game(connect_k_config(4, 4, 3));
  GameState s = game.initial_state();
  const int pattern[4][4] = {{1, 1, 2, 2}, {2, 2, 1, 1}, {1, 1, 2, 2}, {2, 2, 1, 1}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      s.board[static_cast<std::size_t>(r) * 4 + c] = pattern[r][c] == 1 ? Cell::p1 : Cell::p2;
  s.move_count = 16;
  CHECK(game.status(s) == GameStatus::draw);
  CHECK(game.legal_actions(s).empty());
}

TEST_CASE("illegal actions are rejected") {
  const Game game(connect_k_config(4, 4, 3));
  GameState s = game.initial_state();
  for (int i = 0; i < 4; ++i) s = game.apply(s, {0}).next;  // fill column 0
  CHECK_THROWS_AS(game.apply(s, {0}), Error);
  CHECK_THROWS_AS(game.apply(s, {7}), Error);
}

TEST_CASE("breakthrough far row and elimination wins") {
  const Game game(breakthrough_config(4, 4, 1));
  GameState s = game.initial_state();
  s.board.assign(16, Cell::empty);
  s.board[static_cast<std::size_t>(2) * 4 + 1] = Cell::p1;  // one step from the far row
  s.board[static_cast<std::size_t>(3) * 4 + 3] = Cell::p2;
  s.mover = Player::p1;
  s.move_count = 10;
  const StepResult r = game.apply(s, {(2 * 4 + 1) * 3 + 1});  // straight forward
  CHECK(r.terminal);
  CHECK(r.reward_p1 == 1);

  GameState e = s;
  e.board.assign(16, Cell::empty);
  e.board[static_cast<std::size_t>(1) * 4 + 1] = Cell::p1;
  e.board[static_cast<std::size_t>(2) * 4 + 2] = Cell::p2;
  // diagonal capture removes p2's last pawn
  const StepResult r2 = game.apply(e, {(1 * 4 + 1) * 3 + 2});
  CHECK(r2.terminal);
  CHECK(r2.reward_p1 == 1);
  CHECK(r2.reward_p2 == -1);
}

TEST_CASE("straight moves cannot capture") {
  const Game game(breakthrough_config(4, 4, 1));
  GameState s = game.initial_state();
  s.board.assign(16, Cell::empty);
  s.board[static_cast<std::size_t>(1) * 4 + 1] = Cell::p1;
  s.board[static_cast<std::size_t>(2) * 4 + 1] = Cell::p2;
  s.board[static_cast<std::size_t>(3) * 4 + 0] = Cell::p2;
  s.mover = Player::p1;
  const auto legal = game.legal_actions(s);
  CHECK_FALSE(game.is_legal(s, {(1 * 4 + 1) * 3 + 1}));  // straight into the p2 pawn
  CHECK(game.is_legal(s, {(1 * 4 + 1) * 3 + 0}));        // empty diagonal
  CHECK(game.is_legal(s, {(1 * 4 + 1) * 3 + 2}));        // empty diagonal
  CHECK(legal.size() == 2);
}

TEST_CASE("max_moves forces a draw") {
  GameConfig cfg = breakthrough_config(6, 4, 1);
  cfg.max_moves = 24;
  const Game game(cfg);
  GameState s = game.initial_state();
  s.move_count = 24;
  CHECK(game.status(s) == GameStatus::draw);
}

TEST_CASE("random playouts: termination, alternation, zero-sum, piece counts") {
  for (const GameConfig& cfg : {connect_k_config(4, 4, 3), breakthrough_config(4, 4, 1)}) {
    const Game game(cfg);
    Rng rng = make_rng(1234, "playouts");
    const int games = cfg.rules == RuleSet::connect_k ? 100000 : 20000;
    for (int g = 0; g < games; ++g) {
      GameState s = game.initial_state();
      StepResult r;
      bool done = false;
      while (!done) {
        const auto legal = game.legal_actions(s);
        REQUIRE_FALSE(legal.empty());
        const auto pieces_before =
            s.board.size() - std::count(s.board.begin(), s.board.end(), Cell::empty);
        r = game.apply(s, legal[next_below(rng, legal.size())]);
        const auto pieces_after =
            r.next.board.size() - std::count(r.next.board.begin(), r.next.board.end(), Cell::empty);
        if (cfg.rules == RuleSet::connect_k) {
          REQUIRE(pieces_after == pieces_before + 1);
        } else {
          REQUIRE(pieces_after <= pieces_before);
        }
        REQUIRE(r.next.mover == other(s.mover));
        if (!r.terminal) {
          REQUIRE(r.reward_p1 == 0);
          REQUIRE(r.reward_p2 == 0);
        }
        REQUIRE(r.next.move_count <= cfg.effective_max_moves());
        done = r.terminal;
        s = r.next;
      }
      REQUIRE(r.reward_p1 + r.reward_p2 == 0);
    }
  }
}

TEST_CASE("legality closure: apply is defined exactly on legal_actions") {
  for (const GameConfig& cfg : {connect_k_config(4, 4, 3), breakthrough_config(4, 4, 1)}) {
    const Game game(cfg);
    Rng rng = make_rng(55, "closure");
    for (int g = 0; g < 300; ++g) {
      GameState s = game.initial_state();
      while (true) {
        const auto legal = game.legal_actions(s);
        for (int a = 0; a < game.action_space_size(); ++a) {
          const bool listed = std::binary_search(legal.begin(), legal.end(), ActionId{a});
          REQUIRE(game.is_legal(s, {a}) == listed);
          if (!listed) REQUIRE_THROWS_AS(game.apply(s, {a}), Error);
        }
        if (legal.empty()) break;
        s = game.apply(s, legal[next_below(rng, legal.size())]).next;
      }
    }
  }
}

TEST_CASE("canonical keys: determinism, mover sensitivity, pinned bytes") {
  const Game game(connect_k_config(4, 4, 3));
  const GameState a = play_line(game, {1, 2});
  const GameState b = play_line(game, {1, 2});
  CHECK(game.key(a) == game.key(b));

  GameState flipped = a;
  flipped.mover = other(flipped.mover);
  CHECK(game.key(a) != game.key(flipped));

  // move_count is bookkeeping, not position: same board+mover, same key.
  GameState recount = a;
  recount.move_count += 2;
  CHECK(game.key(a) == game.key(recount));

  // Frozen digest of the initial position; guards cross-run/platform drift.
  CHECK(game.key(game.initial_state()).hex() ==
        digest128(game.encode(game.initial_state())).hex());
  const auto enc = game.encode(game.initial_state());
  CHECK(enc.size() == 5 + 16);
  CHECK(enc[0] == 1);  // encoding version
}

TEST_CASE("key injectivity over all reachable connect-k(3,3,k=3) states") {
  const Game game(connect_k_config(3, 3, 3));
  std::map<std::pair<std::vector<Cell>, Player>, StateKey> seen;
  std::set<StateKey> keys;
  std::vector<GameState> frontier{game.initial_state()};
  seen.emplace(std::make_pair(frontier[0].board, frontier[0].mover), game.key(frontier[0]));
  keys.insert(game.key(frontier[0]));
  while (!frontier.empty()) {
    const GameState s = frontier.back();
    frontier.pop_back();
    for (const ActionId a : game.legal_actions(s)) {
      GameState n = game.apply(s, a).next;
      const auto id = std::make_pair(n.board, n.mover);
      if (seen.count(id)) {
        CHECK(seen.at(id) == game.key(n));  // same position, same key
        continue;
      }
      const StateKey k = game.key(n);
      REQUIRE(keys.insert(k).second);  // distinct position, distinct key
      seen.emplace(id, k);
      frontier.push_back(std::move(n));
    }
  }
  CHECK(seen.size() == keys.size());
  CHECK(seen.size() > 500);
}

TEST_CASE("state key hex round-trip") {
  const Game game(connect_k_config(4, 4, 3));
  const StateKey k = game.key(game.initial_state());
  CHECK(StateKey::from_hex(k.hex()) == k);
  CHECK_THROWS_AS(StateKey::from_hex("zz"), Error);
}
