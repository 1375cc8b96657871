#include "rfa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rfa {

void PipelineConfig::validate() const {
  if (explore_episodes < 1) fail(Errc::invalid_params, "explore_episodes must be >= 1");
  if (rollout_transitions < 1) fail(Errc::invalid_params, "rollout_transitions must be >= 1");
  if (victim_action_target < 1) fail(Errc::invalid_params, "victim_action_target must be >= 1");
  if (!(renyi_order > 0.0) || renyi_order == 1.0)
    fail(Errc::invalid_params, "renyi_order must be > 0 and != 1");
  if (plan_epochs < 1) fail(Errc::invalid_params, "plan_epochs must be >= 1");
  if (!(plan_lr > 0.0 && plan_lr <= 1.0)) fail(Errc::invalid_params, "plan_lr must be in (0,1]");
  if (!(plan_gamma > 0.0 && plan_gamma < 1.0))
    fail(Errc::invalid_params, "plan_gamma must be in (0,1)");
  if (!(convergence_epsilon > 0.0))
    fail(Errc::invalid_params, "convergence_epsilon must be > 0");
  if (!(explore_lr > 0.0 && explore_lr <= 1.0))
    fail(Errc::invalid_params, "explore_lr must be in (0,1]");
  if (!(explore_gamma > 0.0 && explore_gamma < 1.0))
    fail(Errc::invalid_params, "explore_gamma must be in (0,1)");
  if (!(rollout_epsilon >= 0.0 && rollout_epsilon <= 1.0))
    fail(Errc::invalid_params, "rollout_epsilon must be in [0,1]");
}

namespace {

// Attacker = p2 throughout; the victim owns the first move.
constexpr Player kVictim = Player::p1;
constexpr Player kAttacker = Player::p2;
static_assert(kVictim != kAttacker);

// One next_unit draw walking the softmax CDF; platform-stable.
ActionId sample_index(std::span<const ActionId> legal, std::span<const double> probs, Rng& rng) {
  const double u = next_unit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    acc += probs[i];
    if (u < acc) return legal[i];
  }
  return legal.back();
}

ActionId victim_move(const QTable& victim, const StateKey& key, std::span<const ActionId> legal,
                     const PipelineConfig& cfg, Rng& rng) {
  if (cfg.victim_policy == PipelineConfig::VictimPolicy::greedy)
    return greedy_from(victim, key, legal);
  return sample_index(legal, softmax_from(victim, key, legal), rng);
}

double explore_epsilon(const PipelineConfig& cfg, int episode) {
  const double t = cfg.explore_episodes <= 1
                       ? 1.0
                       : static_cast<double>(episode) / static_cast<double>(cfg.explore_episodes - 1);
  return cfg.explore_epsilon_start + t * (cfg.explore_epsilon_end - cfg.explore_epsilon_start);
}

}  // namespace

QTable explore_phase(const RewardFreeGame& game, const QTable& victim, const PipelineConfig& cfg,
                     Rng& rng, std::vector<int>* episode_moves) {
  cfg.validate();
  QTable q;
  for (int ep = 0; ep < cfg.explore_episodes; ++ep) {
    const double eps = explore_epsilon(cfg, ep);
    GameState state = game.initial_state();
    bool done = game.is_terminal(state);
    int final_moves = 0;
    while (!done) {
      if (state.mover == kVictim) {
        const auto legal = game.legal_actions(state);
        const ActionId va = victim_move(victim, game.key(state), legal, cfg, rng);
        auto adv = game.advance(state, va);
        final_moves = adv.next.move_count;
        state = std::move(adv.next);
        done = adv.terminal;
        continue;
      }
      const GameState s_t = state;
      // Self-reward from the live table, before this step's backup.
      const double reward = renyi_entropy(softmax_policy(game, q, s_t), cfg.renyi_order);
      const ActionId a = epsilon_greedy_action(game, q, s_t, eps, rng);
      auto step = game.advance(s_t, a);
      bool terminal = step.terminal;
      GameState s_next = std::move(step.next);
      final_moves = s_next.move_count;
      if (!terminal) {
        const auto legal = game.legal_actions(s_next);
        const ActionId va = victim_move(victim, game.key(s_next), legal, cfg, rng);
        auto reply = game.advance(s_next, va);
        terminal = reply.terminal;
        s_next = std::move(reply.next);
        final_moves = s_next.move_count;
      }
      q_update(q, game, game.key(s_t), a, reward, s_next, terminal, cfg.explore_lr,
               cfg.explore_gamma);
      state = std::move(s_next);
      done = terminal;
    }
    if (episode_moves != nullptr) episode_moves->push_back(final_moves);
  }
  return q;
}

RolloutResult rollout_phase(const RewardFreeGame& game, const QTable& explorer,
                            const QTable& victim, const PipelineConfig& cfg, Rng& rng) {
  cfg.validate();
  RolloutResult out;
  auto& dataset = out.dataset;
  auto& counts = out.counts;

  while (dataset.transitions.size() < cfg.rollout_transitions ||
         counts.total_observations < cfg.victim_action_target) {
    // Whole trajectories only: decide once per episode whether to store.
    const bool store_transitions = dataset.transitions.size() < cfg.rollout_transitions;
    GameState state = game.initial_state();
    bool done = game.is_terminal(state);
    while (!done) {
      if (state.mover == kVictim) {
        const auto legal = game.legal_actions(state);
        const StateKey key = game.key(state);
        const ActionId a = victim_move(victim, key, legal, cfg, rng);
        if (counts.total_observations < cfg.victim_action_target) {
          const auto slot = std::lower_bound(legal.begin(), legal.end(), a) - legal.begin();
          counts.record(key, static_cast<int>(slot), static_cast<int>(legal.size()));
        }
        auto adv = game.advance(state, a);
        state = std::move(adv.next);
        done = adv.terminal;
        continue;
      }
      const GameState s_t = state;
      const ActionId a = epsilon_greedy_action(game, explorer, s_t, cfg.rollout_epsilon, rng);
      auto step = game.advance(s_t, a);
      const StateKey faced_key = game.key(step.next);
      bool terminal = step.terminal;
      GameState s_next = std::move(step.next);
      if (!terminal) {
        const auto legal = game.legal_actions(s_next);
        const ActionId va = victim_move(victim, faced_key, legal, cfg, rng);
        if (counts.total_observations < cfg.victim_action_target) {
          const auto slot = std::lower_bound(legal.begin(), legal.end(), va) - legal.begin();
          counts.record(faced_key, static_cast<int>(slot), static_cast<int>(legal.size()));
        }
        auto reply = game.advance(s_next, va);
        terminal = reply.terminal;
        s_next = std::move(reply.next);
      }
      if (store_transitions) {
        dataset.transitions.push_back(
            {game.key(s_t), a, faced_key, game.key(s_next), terminal});
      }
      state = std::move(s_next);
      done = terminal;
    }
    if (store_transitions) dataset.trajectory_ends.push_back(dataset.transitions.size());
  }
  return out;
}

double planning_reward(const ActionCountTable& counts, const StateKey& key,
                       const PipelineConfig& cfg) {
  if (!counts.observed(key)) return cfg.unobserved_penalty;
  return counts.entropy_at(key, EntropyKind::renyi(cfg.renyi_order));
}

QTable plan_phase(const TrajectoryDataset& dataset, const ActionCountTable& counts,
                  const PipelineConfig& cfg, Rng& rng) {
  cfg.validate();
  if (dataset.transitions.empty()) fail(Errc::empty_dataset, "no transitions to plan from");

  QTable q;
  std::vector<std::size_t> order(dataset.transitions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < cfg.plan_epochs; ++epoch) {
    // Fisher-Yates with our own draws so the shuffle is platform-stable.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = next_below(rng, i);
      std::swap(order[i - 1], order[j]);
    }
    for (const std::size_t idx : order) {
      const Transition& t = dataset.transitions[idx];
      const double reward = planning_reward(counts, t.faced, cfg);
      q_update_offline(q, t.s, t.a, reward, t.s_next, t.terminal, cfg.plan_lr, cfg.plan_gamma);
    }
  }
  return q;
}

EntropyTable learn_victim_entropy(const RewardFreeGame& game, const PolicyFn& victim,
                                  const PolicyFn& explorer, double epsilon, Rng& rng,
                                  const EntropyKind& kind, std::uint64_t max_episodes) {
  if (!(epsilon > 0.0)) fail(Errc::invalid_params, "epsilon must be > 0");

  ActionCountTable counts;
  EntropyTable previous;  // H0
  EntropyTable current;   // H1

  for (std::uint64_t ep = 0; ep < max_episodes; ++ep) {
    GameState state = game.initial_state();
    bool done = game.is_terminal(state);
    while (!done) {
      if (state.mover == kVictim) {
        const StateKey key = game.key(state);
        const auto legal = game.legal_actions(state);
        // First visit enters as (0, epsilon); the copy below then parks
        // epsilon in the previous table until the entropy settles.
        previous.entropies.try_emplace(key, 0.0);
        auto [cur, inserted] = current.entropies.try_emplace(key, epsilon);
        previous.entropies[key] = cur->second;
        const ActionId a = victim(game, state, rng);
        const auto slot = std::lower_bound(legal.begin(), legal.end(), a) - legal.begin();
        counts.record(key, static_cast<int>(slot), static_cast<int>(legal.size()));
        cur->second = counts.entropy_at(key, kind);
        auto adv = game.advance(state, a);
        state = std::move(adv.next);
        done = adv.terminal;
      } else {
        const ActionId a = explorer(game, state, rng);
        auto adv = game.advance(state, a);
        state = std::move(adv.next);
        done = adv.terminal;
      }
    }
    if (!current.entropies.empty() &&
        entropy_table_distance(previous, current) < epsilon) {
      return current;
    }
  }
  fail(Errc::non_terminating_budget,
       "victim entropy did not converge within " + std::to_string(max_episodes) + " episodes");
}

void SampleBoundParams::validate() const {
  if (!(horizon > 0) || !(n_states > 0) || !(n_actions > 0))
    fail(Errc::invalid_params, "H, S, A must be positive");
  if (!(epsilon > 0)) fail(Errc::invalid_params, "epsilon must be positive");
  if (!(failure_prob > 0 && failure_prob < 1))
    fail(Errc::invalid_params, "failure probability must be in (0,1)");
  if (!(renyi_alpha > 0 && renyi_alpha < 1))
    fail(Errc::invalid_params, "alpha must be in (0,1)");
  if (!(constant > 0)) fail(Errc::invalid_params, "c must be positive");
}

double sample_bound(const SampleBoundParams& p) {
  p.validate();
  const double beta = p.renyi_alpha / (2.0 * (1.0 - p.renyi_alpha));
  const double base = p.horizon * p.horizon * p.n_states * p.n_actions / p.epsilon;
  const double log_term =
      std::log(p.n_states * p.n_actions * p.horizon / (p.failure_prob * p.epsilon));
  return p.constant * std::pow(base, 2.0 * (beta + 1.0)) * (p.horizon / p.n_actions) * log_term;
}

}  // namespace rfa
