#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rfa/agents.hpp"
#include "rfa/entropy.hpp"
#include "rfa/evaluation.hpp"
#include "rfa/game.hpp"
#include "rfa/pipeline.hpp"

namespace rfa::io {

/// Shortest round-trip decimal form of v ("%.17g" tightened when fewer
/// digits already round-trip). Locale-independent.
std::string format_double(double v);
double parse_double(const std::string& s);

std::uint64_t fnv1a64(std::string_view data);

/// Canonical key=value serialization of a game config; digests of it tag
/// every artifact so mismatched tables are rejected at load time.
std::string config_text(const GameConfig& cfg);
std::string config_digest(const GameConfig& cfg);

// Every artifact starts with "# rfa-<kind> v1 game=<digest>". Loaders verify
// the kind and version always, and the digest when `expect` is non-empty.

void save_qtable(const std::filesystem::path& path, const QTable& q, const std::string& digest);
QTable load_qtable(const std::filesystem::path& path, const std::string& expect = {});

void save_counts(const std::filesystem::path& path, const ActionCountTable& counts,
                 const std::string& digest);
ActionCountTable load_counts(const std::filesystem::path& path, const std::string& expect = {});

void save_entropy_table(const std::filesystem::path& path, const EntropyTable& table,
                        const std::string& digest);
EntropyTable load_entropy_table(const std::filesystem::path& path,
                                const std::string& expect = {});

void save_dataset(const std::filesystem::path& path, const TrajectoryDataset& dataset,
                  const std::string& digest);
TrajectoryDataset load_dataset(const std::filesystem::path& path,
                               const std::string& expect = {});

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<MatchRecord>& records, const std::string& digest,
                       std::uint64_t seed);
std::vector<MatchRecord> read_records_csv(const std::filesystem::path& path);

void write_theorem_csv(const std::filesystem::path& path,
                       const std::vector<TheoremOneRow>& rows, const std::string& digest);

struct CurvePoint {
  int episode = 0;
  double win_rate = 0.0;
  double mean_moves = 0.0;
  double draw_rate = 0.0;
};
void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& points,
                     const std::string& digest);

struct Manifest {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> outputs;  // phase -> path
  std::string timestamp;
};
void write_manifest(const std::filesystem::path& path, const Manifest& m);

/// Minimal bar chart of an evaluation summary (win/draw/loss shares plus a
/// move-count caption). Output is a self-contained SVG document.
void write_summary_svg(const std::filesystem::path& path, const MetricsSummary& summary,
                       const std::string& title);

}  // namespace rfa::io
