// Python bindings for the rfa core: games, entropy math, tabular agents,
// the reward-free pipeline, and the evaluation protocol.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "rfa/agents.hpp"
#include "rfa/evaluation.hpp"
#include "rfa/io.hpp"
#include "rfa/pipeline.hpp"

namespace py = pybind11;
using namespace rfa;

namespace {

GameConfig make_config(const std::string& rules, int rows, int cols, int k, int pawn_rows,
                       int max_moves) {
  GameConfig cfg;
  cfg.rules = rule_set_from_name(rules);
  cfg.rows = rows;
  cfg.cols = cols;
  cfg.k = k;
  cfg.pawn_rows = pawn_rows;
  cfg.max_moves = max_moves;
  cfg.validate();
  return cfg;
}

EntropyKind kind_from(const std::string& name, double order) {
  if (name == "shannon") return EntropyKind::shannon();
  if (name == "renyi") return EntropyKind::renyi(order);
  fail(Errc::invalid_params, "entropy kind must be shannon or renyi");
}

py::dict summary_dict(const MetricsSummary& m, int retried) {
  py::dict d;
  d["win_rate"] = m.win_rate;
  d["draw_rate"] = m.draw_rate;
  d["mean_moves"] = m.mean_moves;
  d["std_moves"] = m.std_moves;
  d["games"] = m.n;
  d["openings_retried"] = retried;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "reward-free attack laboratory: turn-based games, entropy rewards, "
            "tabular agents, and the explore/rollout/plan pipeline";

  py::register_exception<Error>(m, "RfaError");

  py::enum_<Player>(m, "Player").value("p1", Player::p1).value("p2", Player::p2);

  py::class_<GameState>(m, "GameState")
      .def_property_readonly("mover", [](const GameState& s) { return s.mover; })
      .def_readonly("move_count", &GameState::move_count)
      .def_property_readonly("board", [](const GameState& s) {
        std::vector<int> cells;
        cells.reserve(s.board.size());
        for (Cell c : s.board) cells.push_back(static_cast<int>(c));
        return cells;
      });

  py::class_<Game>(m, "Game")
      .def(py::init([](const std::string& rules, int rows, int cols, int k, int pawn_rows,
                       int max_moves) {
             return Game(make_config(rules, rows, cols, k, pawn_rows, max_moves));
           }),
           py::arg("rules") = "connect-k", py::arg("rows") = 4, py::arg("cols") = 4,
           py::arg("k") = 3, py::arg("pawn_rows") = 1, py::arg("max_moves") = 0)
      .def("initial_state", &Game::initial_state)
      .def("action_space_size", &Game::action_space_size)
      .def("is_terminal", &Game::is_terminal)
      .def("legal_actions",
           [](const Game& g, const GameState& s) {
             std::vector<int> out;
             for (const ActionId a : g.legal_actions(s)) out.push_back(a.index);
             return out;
           })
      .def("apply",
           [](const Game& g, const GameState& s, int action) {
             const StepResult r = g.apply(s, ActionId{action});
             return py::make_tuple(r.next, r.terminal, r.reward_p1, r.reward_p2);
           },
           "Returns (next_state, terminal, reward_p1, reward_p2).")
      .def("status",
           [](const Game& g, const GameState& s) {
             switch (g.status(s)) {
               case GameStatus::ongoing: return "ongoing";
               case GameStatus::p1_win: return "p1";
               case GameStatus::p2_win: return "p2";
               case GameStatus::draw: return "draw";
             }
             return "?";
           })
      .def("key", [](const Game& g, const GameState& s) { return g.key(s).hex(); })
      .def("config_digest", [](const Game& g) { return io::config_digest(g.config()); })
      .def("reward_queries", &Game::reward_queries);

  py::class_<QTable>(m, "QTable")
      .def(py::init<>())
      .def("get", [](const QTable& q, const std::string& key_hex,
                     int action) { return q.get(StateKey::from_hex(key_hex), action); })
      .def("entry_count", &QTable::entry_count)
      .def("state_count", [](const QTable& q) { return q.values.size(); })
      .def("save",
           [](const QTable& q, const std::string& path, const Game& game) {
             io::save_qtable(path, q, io::config_digest(game.config()));
           })
      .def_static("load",
                  [](const std::string& path) { return io::load_qtable(path); })
      .def("__eq__", [](const QTable& a, const QTable& b) { return a == b; });

  m.def("shannon_entropy",
        [](const std::vector<double>& p) { return shannon_entropy(p); });
  m.def("renyi_entropy",
        [](const std::vector<double>& p, double order) { return renyi_entropy(p, order); },
        py::arg("p"), py::arg("order") = 0.5);
  m.def("empirical_distribution", [](const std::vector<std::uint64_t>& counts) {
    return empirical_distribution(counts);
  });

  m.def(
      "sample_bound",
      [](double H, double S, double A, double eps, double p, double alpha, double c) {
        SampleBoundParams params;
        params.horizon = H;
        params.n_states = S;
        params.n_actions = A;
        params.epsilon = eps;
        params.failure_prob = p;
        params.renyi_alpha = alpha;
        params.constant = c;
        return sample_bound(params);
      },
      py::arg("H"), py::arg("S"), py::arg("A"), py::arg("eps"), py::arg("p"),
      py::arg("alpha") = 0.5, py::arg("c") = 1.0,
      "Trajectory-count bound c (H^2 S A / eps)^(2(beta+1)) (H/A) ln(S A H / (p eps)).");

  m.def(
      "train_victim",
      [](const Game& game, int episodes, std::uint64_t seed, double lr, double gamma,
         double eps_start, double eps_end) {
        TrainConfig cfg;
        cfg.episodes = episodes;
        cfg.seed = seed;
        cfg.learning_rate = lr;
        cfg.gamma = gamma;
        cfg.epsilon_start = eps_start;
        cfg.epsilon_end = eps_end;
        cfg.epsilon_decay_episodes = std::max(1, episodes * 8 / 10);
        return train_q_agent(game, Player::p1, uniform_random_policy(), RewardSpec::game(), cfg);
      },
      py::arg("game"), py::arg("episodes"), py::arg("seed") = 0, py::arg("lr") = 0.1,
      py::arg("gamma") = 0.9, py::arg("eps_start") = 1.0, py::arg("eps_end") = 0.05,
      "Tabular q-learning for the p1 seat against a uniform-random opponent.");

  m.def(
      "train_attacker",
      [](const Game& game, const QTable& victim, const std::string& reward, int episodes,
         std::uint64_t seed, double lr, std::optional<double> gamma, const std::string& entropy,
         double order) {
        TrainConfig cfg;
        cfg.episodes = episodes;
        cfg.seed = seed;
        cfg.learning_rate = lr;
        const EntropyKind kind = kind_from(entropy, order);
        RewardSpec spec = RewardSpec::game();
        if (reward == "game") {
          spec = RewardSpec::game();
        } else if (reward == "antagonistic-value") {
          spec = RewardSpec::antagonistic_value(victim);
        } else if (reward == "move-max") {
          spec = RewardSpec::move_max();
        } else if (reward == "victim-entropy") {
          spec = RewardSpec::victim_entropy(victim, kind);
        } else if (reward == "random") {
          spec = RewardSpec::random();
        } else {
          fail(Errc::invalid_params, "unknown reward '" + reward + "'");
        }
        const bool entropy_reward = reward == "victim-entropy";
        cfg.gamma = gamma.value_or(entropy_reward ? 0.5 : 0.9);
        cfg.epsilon_decay_episodes = std::max(1, episodes * 8 / 10);
        return train_q_agent(game, Player::p2, greedy_policy(victim), spec, cfg);
      },
      py::arg("game"), py::arg("victim"), py::arg("reward"), py::arg("episodes"),
      py::arg("seed") = 0, py::arg("lr") = 0.1, py::arg("gamma") = py::none(),
      py::arg("entropy") = "renyi", py::arg("order") = 0.5,
      "Trains the p2 seat against the frozen greedy victim.");

  m.def(
      "run_pipeline",
      [](const Game& game, const QTable& victim, int explore_episodes, std::size_t transitions,
         std::uint64_t victim_actions, std::uint64_t seed, double order, int plan_epochs,
         double plan_lr, double plan_gamma, double rollout_epsilon,
         const std::string& victim_policy) {
        PipelineConfig cfg;
        cfg.explore_episodes = explore_episodes;
        cfg.rollout_transitions = transitions;
        cfg.victim_action_target = victim_actions;
        cfg.seed = seed;
        cfg.renyi_order = order;
        cfg.plan_epochs = plan_epochs;
        cfg.plan_lr = plan_lr;
        cfg.plan_gamma = plan_gamma;
        cfg.rollout_epsilon = rollout_epsilon;
        if (victim_policy == "greedy")
          cfg.victim_policy = PipelineConfig::VictimPolicy::greedy;
        else if (victim_policy != "softmax")
          fail(Errc::invalid_params, "victim_policy must be softmax or greedy");
        const RewardFreeGame view(game);
        Rng e = make_rng(cfg.seed, "explore");
        QTable explorer = explore_phase(view, victim, cfg, e);
        Rng r = make_rng(cfg.seed, "rollout");
        RolloutResult ro = rollout_phase(view, explorer, victim, cfg, r);
        Rng p = make_rng(cfg.seed, "plan");
        QTable attacker = plan_phase(ro.dataset, ro.counts, cfg, p);
        py::dict out;
        out["explorer"] = std::move(explorer);
        out["attacker"] = std::move(attacker);
        out["transitions"] = ro.dataset.transitions.size();
        out["trajectories"] = ro.dataset.n_trajectories();
        out["victim_actions"] = ro.counts.total_observations;
        out["observed_states"] = ro.counts.counts.size();
        return out;
      },
      py::arg("game"), py::arg("victim"), py::arg("explore_episodes") = 30000,
      py::arg("transitions") = 1000, py::arg("victim_actions") = 10000, py::arg("seed") = 0,
      py::arg("order") = 0.5, py::arg("plan_epochs") = 300, py::arg("plan_lr") = 0.5,
      py::arg("plan_gamma") = 0.5, py::arg("rollout_epsilon") = 0.05,
      py::arg("victim_policy") = "softmax",
      "Explore, rollout, and plan against a frozen victim; never touches rewards.");

  m.def(
      "evaluate_swap_in",
      [](const Game& game, const QTable& victim, const std::optional<QTable>& attacker,
         int opening_moves, int games, std::uint64_t seed, int jobs) {
        EvalConfig cfg;
        cfg.opening_moves = opening_moves;
        cfg.n_games = games;
        cfg.seed = seed;
        const SwapInResult result =
            attacker ? evaluate_swap_in(game, victim, *attacker, cfg, jobs)
                     : evaluate_swap_in(game, victim, uniform_random_policy(), cfg, jobs);
        return summary_dict(summarize(result.records, Player::p2), result.openings_retried);
      },
      py::arg("game"), py::arg("victim"), py::arg("attacker") = py::none(),
      py::arg("opening_moves") = 5, py::arg("games") = 100, py::arg("seed") = 0,
      py::arg("jobs") = 1,
      "Swap-in protocol; attacker=None plays the uniform-random baseline.");

  m.def(
      "verify_theorem_one",
      [](const Game& game, double gamma) {
        py::list rows;
        for (const auto& row : verify_theorem_one(game, Player::p1, gamma)) {
          py::dict d;
          d["state_key"] = row.key.hex();
          d["n"] = row.steps_to_win;
          d["log_gamma_value"] = row.log_gamma_value;
          d["pass"] = row.pass;
          rows.append(std::move(d));
        }
        return rows;
      },
      py::arg("game"), py::arg("gamma"),
      "Checks n = log_gamma V*(s) on every greedy-winning-path state.");

  m.def(
      "learn_victim_entropy",
      [](const Game& game, const QTable& victim, double epsilon, std::uint64_t seed,
         const std::string& entropy, double order, std::uint64_t max_episodes) {
        const RewardFreeGame view(game);
        // Observed victim: softmax over its q-values. Explorer: the fixed
        // greedy-over-zero policy, so its reachable set is exhaustible.
        const PolicyFn victim_policy = [&victim](const RewardFreeGame& g, const GameState& s,
                                                 Rng& rng) {
          const auto legal = g.legal_actions(s);
          const auto probs = softmax_from(victim, g.key(s), legal);
          const double u = next_unit(rng);
          double acc = 0.0;
          for (std::size_t i = 0; i < legal.size(); ++i) {
            acc += probs[i];
            if (u < acc) return legal[i];
          }
          return legal.back();
        };
        const QTable zero;
        Rng rng = make_rng(seed, "victim-entropy");
        const EntropyTable table = learn_victim_entropy(
            view, victim_policy, greedy_policy(zero), epsilon, rng, kind_from(entropy, order),
            max_episodes);
        py::dict out;
        for (const auto& [key, value] : table.entropies) out[py::str(key.hex())] = value;
        return out;
      },
      py::arg("game"), py::arg("victim"), py::arg("epsilon") = 0.01, py::arg("seed") = 0,
      py::arg("entropy") = "shannon", py::arg("order") = 0.5,
      py::arg("max_episodes") = 1000000,
      "Convergent per-state entropy estimate of the victim's softmax policy.");
}
