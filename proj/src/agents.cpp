#include "rfa/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rfa {

double QTable::get(const StateKey& s, int action) const {
  auto row = values.find(s);
  if (row == values.end()) return 0.0;
  auto it = row->second.find(action);
  return it == row->second.end() ? 0.0 : it->second;
}

void QTable::set(const StateKey& s, int action, double v) { values[s][action] = v; }

std::optional<double> QTable::row_max(const StateKey& s) const {
  auto row = values.find(s);
  if (row == values.end() || row->second.empty()) return std::nullopt;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [a, v] : row->second) best = std::max(best, v);
  return best;
}

std::size_t QTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& [s, row] : values) n += row.size();
  return n;
}

ActionId greedy_from(const QTable& q, const StateKey& key, std::span<const ActionId> legal) {
  ActionId best = legal.front();
  double best_v = q.get(key, best.index);
  for (const ActionId a : legal.subspan(1)) {
    const double v = q.get(key, a.index);
    if (v > best_v) {
      best = a;
      best_v = v;
    }
  }
  return best;
}

std::vector<double> softmax_from(const QTable& q, const StateKey& key,
                                 std::span<const ActionId> legal) {
  std::vector<double> out(legal.size());
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < legal.size(); ++i) {
    out[i] = q.get(key, legal[i].index);
    hi = std::max(hi, out[i]);
  }
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - hi);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

namespace {

std::vector<ActionId> legal_or_throw(const RewardFreeGame& game, const GameState& s) {
  auto legal = game.legal_actions(s);
  if (legal.empty()) fail(Errc::terminal_state, "no actions at a terminal state");
  return legal;
}

}  // namespace

ActionId greedy_action(const RewardFreeGame& game, const QTable& q, const GameState& s) {
  const auto legal = legal_or_throw(game, s);
  return greedy_from(q, game.key(s), legal);
}

ActionId epsilon_greedy_action(const RewardFreeGame& game, const QTable& q, const GameState& s,
                               double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail(Errc::invalid_params, "epsilon outside [0,1]");
  const auto legal = legal_or_throw(game, s);
  // Draw order: one uniform real for the explore/exploit coin, then one
  // bounded draw for the random action. The greedy branch draws nothing more.
  if (next_unit(rng) < epsilon) return legal[next_below(rng, legal.size())];
  return greedy_from(q, game.key(s), legal);
}

std::vector<double> softmax_policy(const RewardFreeGame& game, const QTable& q,
                                   const GameState& s) {
  const auto legal = legal_or_throw(game, s);
  return softmax_from(q, game.key(s), legal);
}

double state_value(const RewardFreeGame& game, const QTable& q, const GameState& s) {
  const auto legal = game.legal_actions(s);
  if (legal.empty()) return 0.0;
  const StateKey key = game.key(s);
  double best = -std::numeric_limits<double>::infinity();
  for (const ActionId a : legal) best = std::max(best, q.get(key, a.index));
  return best;
}

PolicyFn uniform_random_policy() {
  return [](const RewardFreeGame& game, const GameState& s, Rng& rng) {
    const auto legal = legal_or_throw(game, s);
    return legal[next_below(rng, legal.size())];
  };
}

PolicyFn greedy_policy(const QTable& q) {
  return [&q](const RewardFreeGame& game, const GameState& s, Rng&) {
    return greedy_action(game, q, s);
  };
}

PolicyFn epsilon_greedy_policy(const QTable& q, double epsilon) {
  return [&q, epsilon](const RewardFreeGame& game, const GameState& s, Rng& rng) {
    return epsilon_greedy_action(game, q, s, epsilon, rng);
  };
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0))
    fail(Errc::invalid_params, "learning_rate must be in (0,1]");
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::invalid_params, "gamma must be in (0,1)");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) ||
      !(epsilon_end >= 0.0 && epsilon_end <= 1.0) || epsilon_end > epsilon_start)
    fail(Errc::invalid_params, "need 0 <= epsilon_end <= epsilon_start <= 1");
  if (epsilon_decay_episodes < 1) fail(Errc::invalid_params, "epsilon_decay_episodes must be >= 1");
  if (episodes < 1) fail(Errc::invalid_params, "episodes must be >= 1");
}

double epsilon_at(const TrainConfig& cfg, int episode) {
  const double t = std::min(1.0, static_cast<double>(episode) /
                                     static_cast<double>(cfg.epsilon_decay_episodes));
  return cfg.epsilon_start + t * (cfg.epsilon_end - cfg.epsilon_start);
}

RewardSpec RewardSpec::game() { return {}; }

RewardSpec RewardSpec::antagonistic_value(const QTable& victim) {
  RewardSpec s;
  s.kind = RewardKind::antagonistic_value;
  s.victim_q = &victim;
  return s;
}

RewardSpec RewardSpec::move_max() {
  RewardSpec s;
  s.kind = RewardKind::move_maximizer;
  return s;
}

RewardSpec RewardSpec::victim_entropy(const QTable& victim, EntropyKind kind) {
  RewardSpec s;
  s.kind = RewardKind::victim_entropy;
  s.victim_q = &victim;
  s.entropy = kind;
  return s;
}

RewardSpec RewardSpec::empirical_victim_entropy(const ActionCountTable& counts, EntropyKind kind,
                                                double unobserved_penalty) {
  RewardSpec s;
  s.kind = RewardKind::empirical_victim_entropy;
  s.victim_counts = &counts;
  s.entropy = kind;
  s.unobserved_penalty = unobserved_penalty;
  return s;
}

RewardSpec RewardSpec::random() {
  RewardSpec s;
  s.kind = RewardKind::random_reward;
  return s;
}

double antagonist_reward(const Game& game, const RewardSpec& spec, const GameState& s_t,
                         const GameState& s_victim_faces, const GameState& s_next, bool terminal,
                         int game_reward, int move_count, Rng& rng) {
  (void)s_t;
  (void)terminal;
  switch (spec.kind) {
    case RewardKind::game_reward:
      return static_cast<double>(game_reward);
    case RewardKind::antagonistic_value: {
      if (spec.victim_q == nullptr)
        fail(Errc::missing_victim_table, "antagonistic-value reward needs the victim's q-table");
      return -state_value(game, *spec.victim_q, s_next);
    }
    case RewardKind::move_maximizer:
      return static_cast<double>(move_count);
    case RewardKind::victim_entropy: {
      if (spec.victim_q == nullptr)
        fail(Errc::missing_victim_table, "victim-entropy reward needs the victim's q-table");
      const GameState& target = spec.at_next_state ? s_next : s_victim_faces;
      if (game.is_terminal(target)) return 0.0;
      return entropy_of(softmax_policy(game, *spec.victim_q, target), spec.entropy);
    }
    case RewardKind::empirical_victim_entropy: {
      if (spec.victim_counts == nullptr)
        fail(Errc::missing_victim_table, "empirical-victim-entropy reward needs a count table");
      const GameState& target = spec.at_next_state ? s_next : s_victim_faces;
      const StateKey key = game.key(target);
      if (!spec.victim_counts->observed(key)) return spec.unobserved_penalty;
      return spec.victim_counts->entropy_at(key, spec.entropy);
    }
    case RewardKind::random_reward:
      return static_cast<double>(next_below(rng, 3)) - 1.0;
  }
  fail(Errc::invalid_params, "unknown reward kind");
}

namespace {

void check_update_inputs(double reward, double lr, double gamma) {
  if (!(lr > 0.0 && lr <= 1.0)) fail(Errc::invalid_params, "lr must be in (0,1]");
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::invalid_params, "gamma must be in (0,1)");
  if (!std::isfinite(reward)) fail(Errc::nonfinite_input, "reward is not finite");
}

}  // namespace

void q_update(QTable& q, const RewardFreeGame& game, const StateKey& s, ActionId a, double reward,
              const GameState& s_next, bool terminal, double lr, double gamma) {
  check_update_inputs(reward, lr, gamma);
  const double target = terminal ? reward : reward + gamma * state_value(game, q, s_next);
  if (!std::isfinite(target)) fail(Errc::nonfinite_input, "backup target is not finite");
  const double old = q.get(s, a.index);
  q.set(s, a.index, old + lr * (target - old));
}

void q_update_offline(QTable& q, const StateKey& s, ActionId a, double reward,
                      const StateKey& s_next, bool terminal, double lr, double gamma) {
  check_update_inputs(reward, lr, gamma);
  const double target =
      terminal ? reward : reward + gamma * q.row_max(s_next).value_or(0.0);
  if (!std::isfinite(target)) fail(Errc::nonfinite_input, "backup target is not finite");
  const double old = q.get(s, a.index);
  q.set(s, a.index, old + lr * (target - old));
}

QTable train_q_agent(const Game& game, Player trained, const PolicyFn& opponent,
                     const RewardSpec& spec, const TrainConfig& cfg, int eval_every,
                     const std::function<void(int episode, const QTable&)>& eval_hook) {
  cfg.validate();
  QTable q;
  Rng rng = make_rng(cfg.seed, "train");
  const RewardFreeGame view(game);

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = epsilon_at(cfg, ep);
    GameState state = game.initial_state();
    bool done = game.is_terminal(state);
    while (!done) {
      if (state.mover != trained) {
        const ActionId oa = opponent(view, state, rng);
        StepResult r = game.apply(state, oa);
        state = std::move(r.next);
        done = r.terminal;
        continue;
      }
      const GameState s_t = state;
      const ActionId a = epsilon_greedy_action(view, q, s_t, eps, rng);
      StepResult r1 = game.apply(s_t, a);
      const GameState faced = std::move(r1.next);
      bool terminal = r1.terminal;
      int payoff = terminal ? reward_for(trained, r1) : 0;
      GameState s_next = faced;
      if (!terminal) {
        const ActionId oa = opponent(view, faced, rng);
        StepResult r2 = game.apply(faced, oa);
        s_next = std::move(r2.next);
        terminal = r2.terminal;
        if (terminal) payoff = reward_for(trained, r2);
      }
      const double reward =
          antagonist_reward(game, spec, s_t, faced, s_next, terminal, payoff, faced.move_count, rng);
      q_update(q, view, game.key(s_t), a, reward, s_next, terminal, cfg.learning_rate, cfg.gamma);
      state = std::move(s_next);
      done = terminal;
    }
    if (eval_hook && eval_every > 0 && (ep + 1) % eval_every == 0) eval_hook(ep + 1, q);
  }
  return q;
}

}  // namespace rfa
