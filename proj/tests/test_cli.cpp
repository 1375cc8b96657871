#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_util.hpp"

// End-to-end tests against the built binary; RFA_CLI_PATH is injected by CMake.

namespace {

namespace fs = std::filesystem;
using rfa::testing::slurp;

int run(const std::string& args) {
  const std::string cmd = std::string(RFA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(rfa::testing::fresh_dir(name)) {}
  std::string operator/(const std::string& file) const { return (path / file).string(); }
};

}  // namespace

TEST_CASE("cli: sample-bound value and usage errors") {
  CHECK(run("sample-bound --H 2 --S 4 --A 2 --eps 0.1 --p 0.1 --alpha 0.5 --c 1") == 0);
  CHECK(run("sample-bound --H 2 --S 4 --A 2 --eps 0.1 --p 0.1 --alpha 1.0 --c 1") == 2);
  CHECK(run("sample-bound --H 2") == 2);          // missing required flags
  CHECK(run("no-such-subcommand") == 2);
  CHECK(run("") == 2);                            // a subcommand is required
}

TEST_CASE("cli: train, evaluate, verify, pipeline round trip") {
  TempDir dir("cli-e2e");
  const std::string game = "--game connect-k-4x4";
  const std::string victim = dir / "victim.qtable";

  CHECK(run("train-victim " + game + " --episodes 4000 --seed 7 --out " + victim + " --curve " +
            (dir / "curve.csv") + " --eval-every 2000 --eval-games 40") == 0);
  CHECK(fs::exists(victim));
  CHECK(slurp(dir / "curve.csv").rfind("# rfa-curve v1 game=", 0) == 0);

  // attacker needs a reward-appropriate input
  CHECK(run("train-attacker " + game + " --reward antagonistic-value --episodes 100 --seed 1 "
            "--out " + (dir / "x.qtable")) == 2);  // missing --victim-table

  CHECK(run("train-attacker " + game + " --reward victim-entropy --victim-table " + victim +
            " --episodes 2000 --seed 21 --out " + (dir / "attacker.qtable")) == 0);

  // pipeline: phases chain through artifacts; plan without rollout fails
  CHECK(run("pipeline " + game + " --phase plan --victim-table " + victim + " --out-dir " +
            (dir / "pipe-empty")) == 1);
  CHECK(run("pipeline " + game + " --phase all --victim-table " + victim +
            " --explore-episodes 500 --transitions 400 --victim-actions 2000 --seed 11 "
            "--out-dir " + (dir / "pipe")) == 0);
  CHECK(fs::exists(dir / "pipe/explorer.qtable"));
  CHECK(fs::exists(dir / "pipe/rollout.dataset"));
  CHECK(fs::exists(dir / "pipe/rollout.counts"));
  CHECK(fs::exists(dir / "pipe/attacker.qtable"));
  CHECK(fs::exists(dir / "pipe/manifest.txt"));

  // digest mismatch: artifacts from one game are rejected under another
  CHECK(run("evaluate --game connect-k-3x3 --victim " + victim + " --attacker " +
            (dir / "pipe/attacker.qtable") + " --games 5 --out " + (dir / "bad.csv")) == 1);

  // evaluation: records + svg, usage validation
  CHECK(run("evaluate " + game + " --victim " + victim + " --attacker " +
            (dir / "pipe/attacker.qtable") + " --opening-moves 0 --games 50 --seed 3 --out " +
            (dir / "records.csv") + " --svg " + (dir / "plot.svg")) == 0);
  CHECK(run("evaluate " + game + " --victim " + victim + " --attacker-random --games 0 --out " +
            (dir / "zero.csv")) == 2);
  CHECK(run("evaluate " + game + " --victim " + victim + " --games 5") == 2);  // no attacker
  const std::string svg = slurp(dir / "plot.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);

  CHECK(run("report --in " + (dir / "records.csv")) == 0);
  CHECK(run("report --in " + (dir / "plot.svg")) == 1);  // not a records file

  // verify-theorem1: pass on the solved game, reject gamma out of range
  CHECK(run("verify-theorem1 --game connect-k-3x3 --gamma 0.9 --out " + (dir / "t1.csv")) == 0);
  CHECK(slurp(dir / "t1.csv").find("state_key,n,log_gamma_value,pass") != std::string::npos);
  CHECK(run("verify-theorem1 --game connect-k-3x3 --gamma 1.0") == 2);
  CHECK(run("verify-theorem1 --game connect-k-3x3 --gamma 0") == 2);
}

TEST_CASE("cli: identical args and seed give byte-identical artifacts") {
  TempDir dir("cli-repro");
  const std::string game = "--game connect-k-4x4";
  for (const char* tag : {"a", "b"}) {
    const std::string victim = dir / (std::string("victim-") + tag + ".qtable");
    REQUIRE(run("train-victim " + game + " --episodes 3000 --seed 5 --out " + victim) == 0);
    REQUIRE(run("pipeline " + game + " --phase all --victim-table " + victim +
                " --explore-episodes 300 --transitions 200 --victim-actions 1000 --seed 9 "
                "--out-dir " + (dir / (std::string("pipe-") + tag))) == 0);
    REQUIRE(run("evaluate " + game + " --victim " + victim + " --attacker " +
                (dir / (std::string("pipe-") + tag + "/attacker.qtable")) +
                " --opening-moves 0 --games 40 --seed 13 --out " +
                (dir / (std::string("records-") + tag + ".csv"))) == 0);
  }
  CHECK(slurp(dir / "victim-a.qtable") == slurp(dir / "victim-b.qtable"));
  CHECK(slurp(dir / "pipe-a/explorer.qtable") == slurp(dir / "pipe-b/explorer.qtable"));
  CHECK(slurp(dir / "pipe-a/rollout.dataset") == slurp(dir / "pipe-b/rollout.dataset"));
  CHECK(slurp(dir / "pipe-a/rollout.counts") == slurp(dir / "pipe-b/rollout.counts"));
  CHECK(slurp(dir / "pipe-a/attacker.qtable") == slurp(dir / "pipe-b/attacker.qtable"));
  CHECK(slurp(dir / "records-a.csv") == slurp(dir / "records-b.csv"));
}

TEST_CASE("cli: key=value config file with flag overrides") {
  TempDir dir("cli-config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "episodes=1000\nseed=5\n";
  }
  const std::string victim = dir / "victim.qtable";
  CHECK(run("train-victim --game connect-k-4x4 --config " + (dir / "run.cfg") + " --out " +
            victim) == 0);
  // flags override the file: same file, different seed, different bytes
  const std::string victim2 = dir / "victim2.qtable";
  CHECK(run("train-victim --game connect-k-4x4 --config " + (dir / "run.cfg") +
            " --seed 6 --out " + victim2) == 0);
  CHECK(slurp(victim) != slurp(victim2));
}
