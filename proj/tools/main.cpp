// rfa: reward-free attack laboratory for small turn-based Markov games.
//
// Subcommands: train-victim, train-attacker, pipeline, evaluate,
// verify-theorem1, sample-bound, report. Exit codes: 0 success,
// 1 runtime/verification failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfa/agents.hpp"
#include "rfa/evaluation.hpp"
#include "rfa/game.hpp"
#include "rfa/io.hpp"
#include "rfa/pipeline.hpp"

namespace {

using namespace rfa;

struct GameArgs {
  std::string game = "connect-k";
  int rows = 0;
  int cols = 0;
  int k = 0;
  int pawn_rows = 0;
  int max_moves = 0;
};

void add_game_options(CLI::App* cmd, GameArgs& args) {
  cmd->add_option("--game", args.game,
                  "rule set: connect-k | breakthrough-variant, optionally with a size "
                  "suffix like connect-k-3x3")
      ->capture_default_str();
  cmd->add_option("--rows", args.rows, "board rows (default 4)");
  cmd->add_option("--cols", args.cols, "board cols (default 4)");
  cmd->add_option("--k", args.k, "connect-k line length (default 3)");
  cmd->add_option("--pawn-rows", args.pawn_rows, "breakthrough pawn rows (default 1)");
  cmd->add_option("--max-moves", args.max_moves, "forced-draw cap (default 4*rows*cols)");
}

GameConfig parse_game(const GameArgs& args) {
  std::string name = args.game;
  int rows = 4, cols = 4;
  // Optional -RxC suffix, e.g. connect-k-3x3.
  const auto dash = name.find_last_of('-');
  if (dash != std::string::npos && dash + 1 < name.size()) {
    const std::string suffix = name.substr(dash + 1);
    const auto x = suffix.find('x');
    if (x != std::string::npos && x > 0) {
      bool digits = true;
      for (std::size_t i = 0; i < suffix.size(); ++i)
        if (i != x && !std::isdigit(static_cast<unsigned char>(suffix[i]))) digits = false;
      if (digits) {
        rows = std::stoi(suffix.substr(0, x));
        cols = std::stoi(suffix.substr(x + 1));
        name = name.substr(0, dash);
      }
    }
  }
  GameConfig cfg;
  cfg.rules = rule_set_from_name(name);
  cfg.rows = args.rows > 0 ? args.rows : rows;
  cfg.cols = args.cols > 0 ? args.cols : cols;
  cfg.k = args.k > 0 ? args.k : 3;
  cfg.pawn_rows = args.pawn_rows > 0 ? args.pawn_rows : 1;
  cfg.max_moves = args.max_moves;
  cfg.validate();
  return cfg;
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Training-curve hooks, on rng streams separate from training. Victim
// curves play plain greedy matches against the random opponent; attacker
// curves run the swap-in protocol against the frozen victim, which is how
// antagonist progress is measured every evaluation cadence.
io::CurvePoint victim_curve_point(const Game& game, const QTable& q, int episode, int games,
                                  std::uint64_t seed) {
  std::vector<MatchRecord> records;
  records.reserve(static_cast<std::size_t>(games));
  const PolicyFn mine = greedy_policy(q);
  const PolicyFn rnd = uniform_random_policy();
  for (int g = 0; g < games; ++g) {
    Rng rng = make_rng(seed, "train-eval", (static_cast<std::uint64_t>(episode) << 20) + g);
    records.push_back(play_match(game, mine, rnd, rng));
  }
  const MetricsSummary m = summarize(records, Player::p1);
  return {episode, m.win_rate, m.mean_moves, m.draw_rate};
}

io::CurvePoint attacker_curve_point(const Game& game, const QTable& victim, const QTable& q,
                                    int episode, int games, int opening_moves,
                                    std::uint64_t seed) {
  EvalConfig cfg;
  cfg.opening_moves = opening_moves;
  cfg.n_games = games;
  cfg.seed = split_seed(seed, "train-eval", static_cast<std::uint64_t>(episode));
  const MetricsSummary m =
      summarize(evaluate_swap_in(game, victim, q, cfg).records, Player::p2);
  return {episode, m.win_rate, m.mean_moves, m.draw_rate};
}

int cmd_train(const GameArgs& game_args, bool victim_mode, const std::string& reward_name,
              const std::string& victim_table_path, const std::string& counts_path,
              const std::string& entropy_name, double order, TrainConfig cfg,
              const std::string& out_path, const std::string& curve_path, int eval_every,
              int eval_games, int curve_opening, double gamma_flag, bool at_next_state) {
  const GameConfig game_cfg = parse_game(game_args);
  const Game game(game_cfg);
  const std::string digest = io::config_digest(game_cfg);

  const EntropyKind kind =
      entropy_name == "shannon" ? EntropyKind::shannon() : EntropyKind::renyi(order);

  QTable victim_table;
  ActionCountTable counts;
  RewardSpec spec = RewardSpec::game();
  Player trained = Player::p1;

  if (!victim_mode) {
    trained = Player::p2;
    if (reward_name == "game") {
      spec = RewardSpec::game();
    } else if (reward_name == "antagonistic-value") {
      if (victim_table_path.empty()) fail(Errc::missing_victim_table, "--victim-table required");
      victim_table = io::load_qtable(victim_table_path, digest);
      spec = RewardSpec::antagonistic_value(victim_table);
    } else if (reward_name == "move-max") {
      spec = RewardSpec::move_max();
    } else if (reward_name == "victim-entropy") {
      if (victim_table_path.empty()) fail(Errc::missing_victim_table, "--victim-table required");
      victim_table = io::load_qtable(victim_table_path, digest);
      spec = RewardSpec::victim_entropy(victim_table, kind);
    } else if (reward_name == "empirical-victim-entropy") {
      if (counts_path.empty()) fail(Errc::missing_victim_table, "--counts required");
      counts = io::load_counts(counts_path, digest);
      spec = RewardSpec::empirical_victim_entropy(counts, kind);
    } else if (reward_name == "random") {
      spec = RewardSpec::random();
    } else {
      fail(Errc::invalid_params, "unknown reward '" + reward_name + "'");
    }
    spec.at_next_state = at_next_state;
    // Entropy rewards discount at 0.5 unless the caller pinned gamma.
    if (gamma_flag <= 0.0 &&
        (spec.kind == RewardKind::victim_entropy ||
         spec.kind == RewardKind::empirical_victim_entropy))
      cfg.gamma = 0.5;
  }
  if (gamma_flag > 0.0) cfg.gamma = gamma_flag;

  // The opponent: a random p2 when training the victim; the frozen victim
  // (greedy, p1) when training an attacker.
  PolicyFn opponent;
  if (victim_mode) {
    opponent = uniform_random_policy();
  } else {
    if (victim_table_path.empty()) fail(Errc::missing_victim_table, "--victim-table required");
    if (victim_table.values.empty()) victim_table = io::load_qtable(victim_table_path, digest);
    opponent = greedy_policy(victim_table);
  }

  std::vector<io::CurvePoint> curve;
  auto hook = [&](int episode, const QTable& q) {
    curve.push_back(victim_mode ? victim_curve_point(game, q, episode, eval_games, cfg.seed)
                                : attacker_curve_point(game, victim_table, q, episode, eval_games,
                                                       curve_opening, cfg.seed));
  };
  const QTable q =
      train_q_agent(game, trained, opponent, spec, cfg, curve_path.empty() ? 0 : eval_every,
                    curve_path.empty() ? std::function<void(int, const QTable&)>{} : hook);

  io::save_qtable(out_path, q, digest);
  if (!curve_path.empty()) io::write_curve_csv(curve_path, curve, digest);
  std::cout << "wrote " << out_path << " (" << q.entry_count() << " entries, game " << digest
            << ")\n";
  return 0;
}

int cmd_pipeline(const GameArgs& game_args, const std::string& phase,
                 const std::string& victim_table_path, PipelineConfig cfg,
                 const std::string& out_dir, int explore_episodes_flag) {
  const GameConfig game_cfg = parse_game(game_args);
  const Game game(game_cfg);
  const RewardFreeGame view(game);
  const std::string digest = io::config_digest(game_cfg);
  if (explore_episodes_flag > 0) cfg.explore_episodes = explore_episodes_flag;
  cfg.validate();

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  const auto explorer_path = dir / "explorer.qtable";
  const auto dataset_path = dir / "rollout.dataset";
  const auto counts_path = dir / "rollout.counts";
  const auto attacker_path = dir / "attacker.qtable";

  if (victim_table_path.empty()) fail(Errc::missing_victim_table, "--victim-table required");
  const QTable victim = io::load_qtable(victim_table_path, digest);

  io::Manifest manifest;
  manifest.config_digest = digest;
  manifest.seed = cfg.seed;
  manifest.timestamp = now_iso8601();

  if (phase == "explore" || phase == "all") {
    Rng rng = make_rng(cfg.seed, "explore");
    const QTable explorer = explore_phase(view, victim, cfg, rng);
    io::save_qtable(explorer_path, explorer, digest);
    manifest.outputs.emplace_back("explorer", explorer_path.string());
    std::cout << "explore: wrote " << explorer_path << "\n";
  }
  if (phase == "rollout" || phase == "all") {
    if (!std::filesystem::exists(explorer_path))
      fail(Errc::bad_file, "missing explorer table " + explorer_path.string() +
                               " (run --phase explore first)");
    const QTable explorer = io::load_qtable(explorer_path, digest);
    Rng rng = make_rng(cfg.seed, "rollout");
    const RolloutResult rollout = rollout_phase(view, explorer, victim, cfg, rng);
    io::save_dataset(dataset_path, rollout.dataset, digest);
    io::save_counts(counts_path, rollout.counts, digest);
    manifest.outputs.emplace_back("dataset", dataset_path.string());
    manifest.outputs.emplace_back("counts", counts_path.string());
    std::cout << "rollout: " << rollout.dataset.transitions.size() << " transitions, "
              << rollout.counts.total_observations << " victim actions\n";
  }
  if (phase == "plan" || phase == "all") {
    if (!std::filesystem::exists(dataset_path))
      fail(Errc::bad_file, "missing dataset " + dataset_path.string() +
                               " (run --phase rollout first)");
    if (!std::filesystem::exists(counts_path))
      fail(Errc::bad_file, "missing count table " + counts_path.string() +
                               " (run --phase rollout first)");
    const TrajectoryDataset dataset = io::load_dataset(dataset_path, digest);
    const ActionCountTable counts = io::load_counts(counts_path, digest);
    Rng rng = make_rng(cfg.seed, "plan");
    const QTable attacker = plan_phase(dataset, counts, cfg, rng);
    io::save_qtable(attacker_path, attacker, digest);
    manifest.outputs.emplace_back("attacker", attacker_path.string());
    std::cout << "plan: wrote " << attacker_path << "\n";
  }
  io::write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

int cmd_evaluate(const GameArgs& game_args, const std::string& victim_path,
                 const std::string& attacker_path, bool attacker_random, EvalConfig cfg,
                 const std::string& out_path, const std::string& svg_path, int jobs) {
  cfg.validate();
  const GameConfig game_cfg = parse_game(game_args);
  const Game game(game_cfg);
  const std::string digest = io::config_digest(game_cfg);

  const QTable victim = io::load_qtable(victim_path, digest);
  QTable attacker_table;
  PolicyFn attacker;
  if (attacker_random) {
    attacker = uniform_random_policy();
  } else {
    attacker_table = io::load_qtable(attacker_path, digest);
    attacker = greedy_policy(attacker_table);
  }

  const SwapInResult result = evaluate_swap_in(game, victim, attacker, cfg, jobs);
  const MetricsSummary m = summarize(result.records, Player::p2);
  if (!out_path.empty()) io::write_records_csv(out_path, result.records, digest, cfg.seed);
  if (!svg_path.empty()) io::write_summary_svg(svg_path, m, "swap-in evaluation");

  std::printf("games=%zu win_rate=%.4f draw_rate=%.4f moves=%.3f +/- %.3f retried_openings=%d\n",
              m.n, m.win_rate, m.draw_rate, m.mean_moves, m.std_moves, result.openings_retried);
  return 0;
}

int cmd_verify_theorem1(const GameArgs& game_args, double gamma, const std::string& out_path) {
  const GameConfig game_cfg = parse_game(game_args);
  const Game game(game_cfg);
  const std::string digest = io::config_digest(game_cfg);

  const auto rows = verify_theorem_one(game, Player::p1, gamma);
  if (!out_path.empty()) io::write_theorem_csv(out_path, rows, digest);

  std::size_t failed = 0;
  for (const auto& row : rows)
    if (!row.pass) ++failed;
  std::printf("checked=%zu failed=%zu gamma=%s\n", rows.size(), failed,
              io::format_double(gamma).c_str());
  if (failed > 0) {
    for (const auto& row : rows)
      if (!row.pass)
        std::printf("FAIL %s n=%d log_gamma_value=%s\n", row.key.hex().c_str(),
                    row.steps_to_win, io::format_double(row.log_gamma_value).c_str());
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& svg_path) {
  const auto records = io::read_records_csv(in_path);
  const MetricsSummary m = summarize(records, Player::p2);
  if (!svg_path.empty()) io::write_summary_svg(svg_path, m, "evaluation summary");
  std::printf("games=%zu win_rate=%.4f draw_rate=%.4f moves=%.3f +/- %.3f\n", m.n, m.win_rate,
              m.draw_rate, m.mean_moves, m.std_moves);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reward-free attack laboratory for turn-based Markov games"};
  app.require_subcommand(1);

  // train-victim / train-attacker
  GameArgs train_game;
  TrainConfig train_cfg;
  std::string reward_name = "game";
  std::string victim_table_path, counts_path, out_path, curve_path;
  std::string entropy_name = "renyi";
  double order = 0.5;
  double gamma_flag = 0.0;
  int eval_every = 500, eval_games = 100, curve_opening = 1;
  bool at_next_state = false;

  auto configure_train = [&](CLI::App* cmd, bool victim_mode) {
    add_game_options(cmd, train_game);
    cmd->add_option("--episodes", train_cfg.episodes, "training episodes")->required();
    cmd->add_option("--seed", train_cfg.seed, "rng seed")->capture_default_str();
    cmd->add_option("--lr", train_cfg.learning_rate, "tabular learning rate")
        ->capture_default_str();
    cmd->add_option("--gamma", gamma_flag, "discount factor (default 0.9; 0.5 for entropy rewards)");
    cmd->add_option("--eps-start", train_cfg.epsilon_start, "initial epsilon")
        ->capture_default_str();
    cmd->add_option("--eps-end", train_cfg.epsilon_end, "final epsilon")->capture_default_str();
    cmd->add_option("--eps-decay", train_cfg.epsilon_decay_episodes,
                    "episodes over which epsilon decays (default: 80% of --episodes)");
    cmd->add_option("--out", out_path, "output q-table path")->required();
    cmd->add_option("--curve", curve_path, "training-curve CSV path");
    cmd->add_option("--eval-every", eval_every, "curve cadence in episodes")
        ->capture_default_str();
    cmd->add_option("--eval-games", eval_games, "games per curve point")->capture_default_str();
    if (!victim_mode) {
      cmd->add_option("--reward", reward_name,
                      "game | antagonistic-value | move-max | victim-entropy | "
                      "empirical-victim-entropy | random")
          ->capture_default_str();
      cmd->add_option("--victim-table", victim_table_path, "frozen victim q-table");
      cmd->add_option("--counts", counts_path, "victim action-count table "
                                               "(empirical-victim-entropy)");
      cmd->add_option("--entropy", entropy_name, "shannon | renyi")->capture_default_str();
      cmd->add_option("--order", order, "renyi order")->capture_default_str();
      cmd->add_flag("--entropy-at-next", at_next_state,
                    "evaluate victim entropy at the attacker's next decision state");
      cmd->add_option("--curve-opening", curve_opening,
                      "random opening moves per player for curve evaluations")
          ->capture_default_str();
    }
  };

  CLI::App* train_victim = app.add_subcommand("train-victim", "train a victim vs a random opponent");
  configure_train(train_victim, true);
  CLI::App* train_attacker =
      app.add_subcommand("train-attacker", "train an attacker vs a frozen victim");
  configure_train(train_attacker, false);

  // pipeline
  GameArgs pipe_game;
  PipelineConfig pipe_cfg;
  std::string phase = "all";
  std::string pipe_victim, pipe_out_dir = "pipeline-out";
  int explore_episodes_flag = 0;
  CLI::App* pipeline = app.add_subcommand("pipeline", "reward-free explore/rollout/plan pipeline");
  add_game_options(pipeline, pipe_game);
  pipeline->add_option("--phase", phase, "explore | rollout | plan | all")->capture_default_str();
  pipeline->add_option("--victim-table", pipe_victim, "frozen victim q-table")->required();
  pipeline->add_option("--out-dir", pipe_out_dir, "artifact directory")->capture_default_str();
  pipeline->add_option("--seed", pipe_cfg.seed, "rng seed")->capture_default_str();
  pipeline->add_option("--explore-episodes", explore_episodes_flag,
                       "exploration episodes (default 30000)");
  pipeline->add_option("--transitions", pipe_cfg.rollout_transitions,
                       "attacker transitions to collect")->capture_default_str();
  pipeline->add_option("--victim-actions", pipe_cfg.victim_action_target,
                       "victim actions to observe")->capture_default_str();
  pipeline->add_option("--order", pipe_cfg.renyi_order, "renyi order")->capture_default_str();
  pipeline->add_option("--plan-epochs", pipe_cfg.plan_epochs, "planning sweeps")
      ->capture_default_str();
  pipeline->add_option("--plan-lr", pipe_cfg.plan_lr, "planning learning rate")
      ->capture_default_str();
  pipeline->add_option("--plan-gamma", pipe_cfg.plan_gamma, "planning discount")
      ->capture_default_str();
  pipeline->add_option("--rollout-epsilon", pipe_cfg.rollout_epsilon,
                       "behavior epsilon during rollout")->capture_default_str();
  pipeline->add_option("--unobserved-penalty", pipe_cfg.unobserved_penalty,
                       "planning reward for unobserved states")->capture_default_str();
  std::string victim_policy_name = "softmax";
  pipeline->add_option("--victim-policy", victim_policy_name,
                       "how the observed victim acts: softmax | greedy")
      ->capture_default_str();

  // evaluate
  GameArgs eval_game;
  EvalConfig eval_cfg;
  std::string eval_victim, eval_attacker, eval_out = "records.csv", eval_svg;
  bool attacker_random = false;
  int jobs = 1;
  CLI::App* evaluate = app.add_subcommand("evaluate", "swap-in evaluation protocol");
  add_game_options(evaluate, eval_game);
  evaluate->add_option("--victim", eval_victim, "victim q-table")->required();
  evaluate->add_option("--attacker", eval_attacker, "attacker q-table");
  evaluate->add_flag("--attacker-random", attacker_random,
                     "use a uniform-random attacker (baseline)");
  evaluate->add_option("--opening-moves", eval_cfg.opening_moves,
                       "random opening moves per player")->capture_default_str();
  evaluate->add_option("--games", eval_cfg.n_games, "number of games")->capture_default_str();
  evaluate->add_option("--seed", eval_cfg.seed, "rng seed")->capture_default_str();
  evaluate->add_option("--out", eval_out, "records CSV path")->capture_default_str();
  evaluate->add_option("--svg", eval_svg, "summary SVG path");
  evaluate->add_option("--jobs", jobs, "worker threads")->capture_default_str();

  // verify-theorem1
  GameArgs verify_game;
  double verify_gamma = 0.9;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify-theorem1",
                                        "check n = log_gamma V* on every winning-path state");
  add_game_options(verify, verify_game);
  verify->add_option("--gamma", verify_gamma, "discount factor in (0,1)")->required();
  verify->add_option("--out", verify_out, "report CSV path");

  // sample-bound
  SampleBoundParams bound;
  CLI::App* sample = app.add_subcommand("sample-bound",
                                        "reward-free exploration trajectory-count bound");
  sample->add_option("--H", bound.horizon, "planning horizon")->required();
  sample->add_option("--S", bound.n_states, "state count")->required();
  sample->add_option("--A", bound.n_actions, "action count")->required();
  sample->add_option("--eps", bound.epsilon, "target accuracy")->required();
  sample->add_option("--p", bound.failure_prob, "failure probability")->required();
  sample->add_option("--alpha", bound.renyi_alpha, "renyi order in (0,1)")->required();
  sample->add_option("--c", bound.constant, "absolute constant")->capture_default_str();

  // report
  std::string report_in, report_svg;
  CLI::App* report = app.add_subcommand("report", "summarize a records CSV");
  report->add_option("--in", report_in, "records CSV path")->required();
  report->add_option("--svg", report_svg, "summary SVG path");

  // Every subcommand accepts a plain key=value file; flags override it. The
  // file is expanded into trailing flags here, so only keys that were not
  // given on the command line take effect.
  std::string config_help = "key=value configuration file; explicit flags override it";
  for (CLI::App* cmd : app.get_subcommands({})) {
    static std::string sink;  // value consumed during expansion below
    cmd->add_option("--config", sink, config_help);
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "usage error: cannot open config file " << config_path << "\n";
        return 2;
      }
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
          std::cerr << "usage error: bad config line '" << line << "'\n";
          return 2;
        }
        const std::string flag = "--" + line.substr(0, eq);
        bool present = false;
        for (const std::string& a : args)
          if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (!present) {
          args.push_back(flag);
          args.push_back(line.substr(eq + 1));
        }
      }
    }
    std::vector<const char*> cargs{argv[0]};
    for (const std::string& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_victim->parsed() || train_attacker->parsed()) {
      const bool victim_mode = train_victim->parsed();
      CLI::App* cmd = victim_mode ? train_victim : train_attacker;
      if (cmd->count("--eps-decay") == 0)
        train_cfg.epsilon_decay_episodes = std::max(1, train_cfg.episodes * 8 / 10);
      train_cfg.validate();
      return cmd_train(train_game, victim_mode, reward_name, victim_table_path, counts_path,
                       entropy_name, order, train_cfg, out_path, curve_path, eval_every,
                       eval_games, curve_opening, gamma_flag, at_next_state);
    }
    if (pipeline->parsed()) {
      if (victim_policy_name == "greedy") {
        pipe_cfg.victim_policy = PipelineConfig::VictimPolicy::greedy;
      } else if (victim_policy_name != "softmax") {
        std::cerr << "pipeline: --victim-policy must be softmax or greedy\n";
        return 2;
      }
      return cmd_pipeline(pipe_game, phase, pipe_victim, pipe_cfg, pipe_out_dir,
                          explore_episodes_flag);
    }
    if (evaluate->parsed()) {
      if (!attacker_random && eval_attacker.empty()) {
        std::cerr << "evaluate: need --attacker or --attacker-random\n";
        return 2;
      }
      return cmd_evaluate(eval_game, eval_victim, eval_attacker, attacker_random, eval_cfg,
                          eval_out, eval_svg, jobs);
    }
    if (verify->parsed()) {
      if (!(verify_gamma > 0.0 && verify_gamma < 1.0)) {
        std::cerr << "verify-theorem1: gamma must be in (0,1)\n";
        return 2;
      }
      return cmd_verify_theorem1(verify_game, verify_gamma, verify_out);
    }
    if (sample->parsed()) {
      bound.validate();
      std::printf("%s\n", io::format_double(sample_bound(bound)).c_str());
      return 0;
    }
    if (report->parsed()) return cmd_report(report_in, report_svg);
  } catch (const Error& e) {
    // Precondition breaches are usage errors; everything else is runtime.
    switch (e.code()) {
      case Errc::invalid_params:
      case Errc::invalid_config:
      case Errc::invalid_order:
      case Errc::missing_victim_table:
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
      default:
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
