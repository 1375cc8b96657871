#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rfa/common.hpp"
#include "rfa/entropy.hpp"
#include "rfa/game.hpp"
#include "rfa/state_key.hpp"

namespace rfa {

/// Sparse action-value table; absent entries read as 0.
struct QTable {
  std::unordered_map<StateKey, std::unordered_map<int, double>> values;

  double get(const StateKey& s, int action) const;
  void set(const StateKey& s, int action, double v);

  /// Max over the entries actually recorded at s (offline bootstrap).
  std::optional<double> row_max(const StateKey& s) const;

  std::size_t entry_count() const;
  bool operator==(const QTable& other) const { return values == other.values; }
};

// Policy helpers over an explicit legal-action list. Ties break toward the
// lowest action index everywhere.
ActionId greedy_from(const QTable& q, const StateKey& key, std::span<const ActionId> legal);
std::vector<double> softmax_from(const QTable& q, const StateKey& key,
                                 std::span<const ActionId> legal);

ActionId greedy_action(const RewardFreeGame& game, const QTable& q, const GameState& s);
ActionId epsilon_greedy_action(const RewardFreeGame& game, const QTable& q, const GameState& s,
                               double epsilon, Rng& rng);
/// Probabilities proportional to exp(q) over legal actions, temperature 1,
/// max-subtracted before exponentiation.
std::vector<double> softmax_policy(const RewardFreeGame& game, const QTable& q,
                                   const GameState& s);
/// Max q over legal actions; 0 for terminal states.
double state_value(const RewardFreeGame& game, const QTable& q, const GameState& s);

/// A move chooser. Policies see only the reward-free surface of the game.
using PolicyFn = std::function<ActionId(const RewardFreeGame&, const GameState&, Rng&)>;

PolicyFn uniform_random_policy();
PolicyFn greedy_policy(const QTable& q);                        // q captured by reference
PolicyFn epsilon_greedy_policy(const QTable& q, double epsilon);

struct TrainConfig {
  double learning_rate = 0.1;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_episodes = 1;
  int episodes = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Linear schedule from epsilon_start to epsilon_end over
/// epsilon_decay_episodes; episode is 0-based.
double epsilon_at(const TrainConfig& cfg, int episode);

enum class RewardKind : std::uint8_t {
  game_reward,
  antagonistic_value,
  move_maximizer,
  victim_entropy,
  empirical_victim_entropy,
  random_reward,
};

/// What the learner is paid for a transition. The entropy adapters evaluate
/// the victim at the state it faces right after the learner's move; set
/// at_next_state to use the learner's next decision state instead.
struct RewardSpec {
  RewardKind kind = RewardKind::game_reward;
  const QTable* victim_q = nullptr;
  const ActionCountTable* victim_counts = nullptr;
  EntropyKind entropy = EntropyKind::shannon();
  double unobserved_penalty = -1.0;
  bool at_next_state = false;

  static RewardSpec game();
  static RewardSpec antagonistic_value(const QTable& victim);
  static RewardSpec move_max();
  static RewardSpec victim_entropy(const QTable& victim, EntropyKind kind);
  static RewardSpec empirical_victim_entropy(const ActionCountTable& counts, EntropyKind kind,
                                             double unobserved_penalty = -1.0);
  static RewardSpec random();
};

/// Reward for one learner transition s_t -> (opponent reply) -> s_next.
/// game_reward is the learner's terminal payoff for the transition (0 when
/// non-terminal); move_count is the number of game moves elapsed after the
/// learner's own move.
double antagonist_reward(const Game& game, const RewardSpec& spec, const GameState& s_t,
                         const GameState& s_victim_faces, const GameState& s_next, bool terminal,
                         int game_reward, int move_count, Rng& rng);

/// One tabular backup toward y = reward (+ gamma * state_value(q, s_next)
/// when non-terminal).
void q_update(QTable& q, const RewardFreeGame& game, const StateKey& s, ActionId a, double reward,
              const GameState& s_next, bool terminal, double lr, double gamma);

/// Offline form: bootstraps from the entries recorded at the next-state key
/// (0 when none), since batch learners have no game to enumerate actions with.
void q_update_offline(QTable& q, const StateKey& s, ActionId a, double reward,
                      const StateKey& s_next, bool terminal, double lr, double gamma);

/// Trains `trained` against a fixed opponent policy with epsilon-greedy
/// exploration. Deterministic given cfg.seed. eval_hook, when set, runs
/// every eval_every episodes on its own rng stream so it cannot perturb
/// training.
QTable train_q_agent(const Game& game, Player trained, const PolicyFn& opponent,
                     const RewardSpec& spec, const TrainConfig& cfg, int eval_every = 0,
                     const std::function<void(int episode, const QTable&)>& eval_hook = {});

}  // namespace rfa
