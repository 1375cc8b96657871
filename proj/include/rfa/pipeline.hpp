#pragma once

#include <cstdint>
#include <vector>

#include "rfa/agents.hpp"
#include "rfa/entropy.hpp"
#include "rfa/game.hpp"

namespace rfa {

/// One attacker transition. Rewards are deliberately absent: planning
/// recomputes them from the frozen count table, so the reward-free boundary
/// stays mechanically auditable. `faced` is the state the victim saw inside
/// this transition (the terminal state itself when the attacker's move ended
/// the game); it is the key planning rewards are looked up under.
struct Transition {
  StateKey s;
  ActionId a;
  StateKey faced;
  StateKey s_next;
  bool terminal = false;

  bool operator==(const Transition&) const = default;
};

struct TrajectoryDataset {
  std::vector<Transition> transitions;
  std::vector<std::size_t> trajectory_ends;  // cumulative end offsets partitioning the list

  std::size_t n_trajectories() const { return trajectory_ends.size(); }
  bool operator==(const TrajectoryDataset&) const = default;
};

struct PipelineConfig {
  int explore_episodes = 30000;
  std::size_t rollout_transitions = 100000;     // M-scale transition target
  std::uint64_t victim_action_target = 1000000; // K victim observations
  double renyi_order = 0.5;
  double unobserved_penalty = -1.0;
  int plan_epochs = 300;
  double plan_lr = 0.5;
  double plan_gamma = 0.5;
  double convergence_epsilon = 0.01;
  std::uint64_t seed = 0;

  // exploration-phase training knobs
  double explore_lr = 0.1;
  double explore_gamma = 0.5;
  double explore_epsilon_start = 1.0;
  double explore_epsilon_end = 0.05;

  // behavior epsilon for the rollout; keeps two frozen deterministic
  // players out of a single repeated line. 0 is allowed.
  double rollout_epsilon = 0.05;

  // How the frozen victim acts while being observed. Its policy is the
  // softmax of its q-values; greedy collapses every observed action
  // distribution to a point and with it the entropy signal. Evaluation
  // plays the victim greedy regardless.
  enum class VictimPolicy : std::uint8_t { softmax = 0, greedy = 1 };
  VictimPolicy victim_policy = VictimPolicy::softmax;

  void validate() const;
};

/// Trains the explorer. The per-step reward is the Rényi entropy of the
/// softmax of the live q-table at the decision state itself, recomputed each
/// step, so it is self-referential and nonstationary by design. Appends each
/// episode's final move count to episode_moves when given.
QTable explore_phase(const RewardFreeGame& game, const QTable& victim, const PipelineConfig& cfg,
                     Rng& rng, std::vector<int>* episode_moves = nullptr);

struct RolloutResult {
  TrajectoryDataset dataset;
  ActionCountTable counts;
};

/// Plays the frozen explorer against the frozen victim, storing whole
/// attacker trajectories until the transition target is met and recording
/// victim actions (keyed by the state the victim faces) until the
/// observation target is met.
RolloutResult rollout_phase(const RewardFreeGame& game, const QTable& explorer,
                            const QTable& victim, const PipelineConfig& cfg, Rng& rng);

/// Empirical victim entropy at key, or the unobserved penalty.
double planning_reward(const ActionCountTable& counts, const StateKey& key,
                       const PipelineConfig& cfg);

/// Batch planning: plan_epochs shuffled sweeps of offline backups over the
/// fixed dataset. Touches no game object at all.
QTable plan_phase(const TrajectoryDataset& dataset, const ActionCountTable& counts,
                  const PipelineConfig& cfg, Rng& rng);

/// The convergent victim-entropy estimator. Maintains the previous/current
/// entropy tables; on each victim action at state s the previous table takes
/// s's old entropy, the action is counted, and the current table is
/// recomputed. Keys enter as (previous = 0, current = epsilon) so the first
/// convergence check cannot pass spuriously. Loops whole episodes until the
/// table distance over all visited keys drops below epsilon.
EntropyTable learn_victim_entropy(const RewardFreeGame& game, const PolicyFn& victim,
                                  const PolicyFn& explorer, double epsilon, Rng& rng,
                                  const EntropyKind& kind, std::uint64_t max_episodes = 1000000);

struct SampleBoundParams {
  double horizon = 1;       // H
  double n_states = 1;      // S
  double n_actions = 1;     // A
  double epsilon = 0.1;
  double failure_prob = 0.1;  // p
  double renyi_alpha = 0.5;   // must be in (0,1) so beta stays finite
  double constant = 1.0;      // c

  void validate() const;
};

/// Trajectory-count bound c * (H^2 S A / eps)^(2(beta+1)) * (H/A) *
/// ln(S A H / (p eps)) with beta = alpha / (2 (1 - alpha)).
double sample_bound(const SampleBoundParams& params);

}  // namespace rfa
