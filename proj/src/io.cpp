#include "rfa/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

namespace rfa::io {

namespace {

constexpr int kFormatVersion = 1;

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::bad_file, "cannot open " + path.string() + " for writing");
  out << body;
  if (!out) fail(Errc::bad_file, "short write to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::bad_file, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string header_line(const std::string& kind, const std::string& digest) {
  return "# rfa-" + kind + " v" + std::to_string(kFormatVersion) + " game=" + digest + "\n";
}

std::vector<std::string> split_lines(const std::string& body) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t nl = body.find('\n', pos);
    if (nl == std::string::npos) nl = body.size();
    lines.emplace_back(body.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

// Validates the header and returns the remaining lines.
std::vector<std::string> load_lines(const std::filesystem::path& path, const std::string& kind,
                                    const std::string& expect_digest) {
  auto lines = split_lines(read_file(path));
  if (lines.empty()) fail(Errc::bad_file, path.string() + " is empty");
  const std::string prefix = "# rfa-" + kind + " v" + std::to_string(kFormatVersion) + " game=";
  if (lines.front().rfind(prefix, 0) != 0)
    fail(Errc::bad_file, path.string() + " is not an rfa-" + kind + " v" +
                             std::to_string(kFormatVersion) + " file");
  const std::string digest = lines.front().substr(prefix.size());
  if (!expect_digest.empty() && digest != expect_digest)
    fail(Errc::digest_mismatch, path.string() + " was produced for game config " + digest +
                                    ", expected " + expect_digest);
  lines.erase(lines.begin());
  return lines;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(Errc::bad_file, "bad number '" + s + "'");
  return v;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_text(const GameConfig& cfg) {
  std::string out;
  out += "rules=" + std::string(rule_set_name(cfg.rules)) + "\n";
  out += "rows=" + std::to_string(cfg.rows) + "\n";
  out += "cols=" + std::to_string(cfg.cols) + "\n";
  if (cfg.rules == RuleSet::connect_k) out += "k=" + std::to_string(cfg.k) + "\n";
  if (cfg.rules == RuleSet::breakthrough_variant)
    out += "pawn_rows=" + std::to_string(cfg.pawn_rows) + "\n";
  out += "max_moves=" + std::to_string(cfg.effective_max_moves()) + "\n";
  return out;
}

std::string config_digest(const GameConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(config_text(cfg)));
  return buf;
}

void save_qtable(const std::filesystem::path& path, const QTable& q, const std::string& digest) {
  std::vector<std::pair<StateKey, const std::unordered_map<int, double>*>> rows;
  rows.reserve(q.values.size());
  for (const auto& [key, row] : q.values) rows.emplace_back(key, &row);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::string body = header_line("qtable", digest);
  for (const auto& [key, row] : rows) {
    std::vector<std::pair<int, double>> entries(row->begin(), row->end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [action, value] : entries)
      body += key.hex() + " " + std::to_string(action) + " " + format_double(value) + "\n";
  }
  write_file(path, body);
}

QTable load_qtable(const std::filesystem::path& path, const std::string& expect) {
  QTable q;
  for (const auto& line : load_lines(path, "qtable", expect)) {
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 3) fail(Errc::bad_file, "bad qtable line '" + line + "'");
    q.set(StateKey::from_hex(tok[0]), std::stoi(tok[1]), parse_double(tok[2]));
  }
  return q;
}

void save_counts(const std::filesystem::path& path, const ActionCountTable& counts,
                 const std::string& digest) {
  std::vector<std::pair<StateKey, const std::vector<std::uint64_t>*>> rows;
  rows.reserve(counts.counts.size());
  for (const auto& [key, vec] : counts.counts) rows.emplace_back(key, &vec);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::string body = header_line("counts", digest);
  for (const auto& [key, vec] : rows) {
    body += key.hex();
    for (auto c : *vec) body += " " + std::to_string(c);
    body += "\n";
  }
  write_file(path, body);
}

ActionCountTable load_counts(const std::filesystem::path& path, const std::string& expect) {
  ActionCountTable counts;
  for (const auto& line : load_lines(path, "counts", expect)) {
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (tok.size() < 2) fail(Errc::bad_file, "bad counts line '" + line + "'");
    std::vector<std::uint64_t> vec;
    vec.reserve(tok.size() - 1);
    for (std::size_t i = 1; i < tok.size(); ++i) vec.push_back(std::stoull(tok[i]));
    const StateKey key = StateKey::from_hex(tok[0]);
    for (auto c : vec) counts.total_observations += c;
    counts.counts.emplace(key, std::move(vec));
  }
  return counts;
}

void save_entropy_table(const std::filesystem::path& path, const EntropyTable& table,
                        const std::string& digest) {
  std::vector<std::pair<StateKey, double>> rows(table.entropies.begin(), table.entropies.end());
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string body = header_line("entropy", digest);
  for (const auto& [key, value] : rows) body += key.hex() + " " + format_double(value) + "\n";
  write_file(path, body);
}

EntropyTable load_entropy_table(const std::filesystem::path& path, const std::string& expect) {
  EntropyTable table;
  for (const auto& line : load_lines(path, "entropy", expect)) {
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 2) fail(Errc::bad_file, "bad entropy line '" + line + "'");
    table.entropies.emplace(StateKey::from_hex(tok[0]), parse_double(tok[1]));
  }
  return table;
}

void save_dataset(const std::filesystem::path& path, const TrajectoryDataset& dataset,
                  const std::string& digest) {
  std::string body = header_line("dataset", digest);
  std::size_t next_end = 0;
  for (std::size_t i = 0; i < dataset.transitions.size(); ++i) {
    const Transition& t = dataset.transitions[i];
    while (next_end < dataset.trajectory_ends.size() && dataset.trajectory_ends[next_end] <= i)
      ++next_end;
    const bool last_of_trajectory = next_end < dataset.trajectory_ends.size() &&
                                    dataset.trajectory_ends[next_end] == i + 1;
    body += t.s.hex() + " " + std::to_string(t.a.index) + " " + t.faced.hex() + " " +
            t.s_next.hex() + " " + (t.terminal ? "1" : "0") + " " +
            (last_of_trajectory ? "1" : "0") + "\n";
  }
  write_file(path, body);
}

TrajectoryDataset load_dataset(const std::filesystem::path& path, const std::string& expect) {
  TrajectoryDataset dataset;
  for (const auto& line : load_lines(path, "dataset", expect)) {
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 6) fail(Errc::bad_file, "bad dataset line '" + line + "'");
    Transition t;
    t.s = StateKey::from_hex(tok[0]);
    t.a = ActionId{std::stoi(tok[1])};
    t.faced = StateKey::from_hex(tok[2]);
    t.s_next = StateKey::from_hex(tok[3]);
    t.terminal = tok[4] == "1";
    dataset.transitions.push_back(t);
    if (tok[5] == "1") dataset.trajectory_ends.push_back(dataset.transitions.size());
  }
  return dataset;
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<MatchRecord>& records, const std::string& digest,
                       std::uint64_t seed) {
  std::string body = header_line("records", digest);
  body += "game,seed,swap_ply,winner,moves\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const MatchRecord& r = records[i];
    body += std::to_string(i) + "," + std::to_string(seed) + "," + std::to_string(r.swap_ply) +
            "," + winner_name(r.winner) + "," + std::to_string(r.moves) + "\n";
  }
  write_file(path, body);
}

std::vector<MatchRecord> read_records_csv(const std::filesystem::path& path) {
  std::vector<MatchRecord> records;
  auto lines = load_lines(path, "records", {});
  if (lines.empty() || lines.front() != "game,seed,swap_ply,winner,moves")
    fail(Errc::bad_file, path.string() + " lacks the records header row");
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.empty()) continue;
    std::vector<std::string> tok;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        tok.push_back(line.substr(pos));
        break;
      }
      tok.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (tok.size() != 5) fail(Errc::bad_file, "bad records line '" + line + "'");
    MatchRecord r;
    r.swap_ply = std::stoi(tok[2]);
    r.winner = winner_from_name(tok[3]);
    r.moves = std::stoi(tok[4]);
    records.push_back(r);
  }
  return records;
}

void write_theorem_csv(const std::filesystem::path& path,
                       const std::vector<TheoremOneRow>& rows, const std::string& digest) {
  std::string body = header_line("theorem1", digest);
  body += "state_key,n,log_gamma_value,pass\n";
  for (const auto& row : rows) {
    body += row.key.hex() + "," + std::to_string(row.steps_to_win) + "," +
            format_double(row.log_gamma_value) + "," + (row.pass ? "1" : "0") + "\n";
  }
  write_file(path, body);
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& points,
                     const std::string& digest) {
  std::string body = header_line("curve", digest);
  body += "episode,win_rate,mean_moves,draw_rate\n";
  for (const auto& p : points) {
    body += std::to_string(p.episode) + "," + format_double(p.win_rate) + "," +
            format_double(p.mean_moves) + "," + format_double(p.draw_rate) + "\n";
  }
  write_file(path, body);
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::string body = header_line("manifest", m.config_digest);
  body += "seed=" + std::to_string(m.seed) + "\n";
  body += "timestamp=" + m.timestamp + "\n";
  for (const auto& [phase, out] : m.outputs) body += phase + "=" + out + "\n";
  write_file(path, body);
}

void write_summary_svg(const std::filesystem::path& path, const MetricsSummary& summary,
                       const std::string& title) {
  const double bars[3] = {summary.win_rate, summary.draw_rate,
                          1.0 - summary.win_rate - summary.draw_rate};
  const char* labels[3] = {"attacker wins", "draws", "victim wins"};
  const char* colors[3] = {"#d9534f", "#999999", "#5bc0de"};

  const int width = 420, height = 300, base_y = 240, bar_w = 90, gap = 40, left = 50;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">" +
         title + "</text>\n";
  for (int i = 0; i < 3; ++i) {
    const int h = static_cast<int>(bars[i] * 180.0 + 0.5);
    const int x = left + i * (bar_w + gap);
    svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(base_y - h) +
           "\" width=\"" + std::to_string(bar_w) + "\" height=\"" + std::to_string(h) +
           "\" fill=\"" + colors[i] + "\"/>\n";
    char pct[16];
    std::snprintf(pct, sizeof(pct), "%.1f%%", bars[i] * 100.0);
    svg += "<text x=\"" + std::to_string(x + bar_w / 2) + "\" y=\"" +
           std::to_string(base_y - h - 6) +
           "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" + pct +
           "</text>\n";
    svg += "<text x=\"" + std::to_string(x + bar_w / 2) + "\" y=\"" + std::to_string(base_y + 16) +
           "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" + labels[i] +
           "</text>\n";
  }
  char caption[96];
  std::snprintf(caption, sizeof(caption), "moves: %.2f +/- %.2f over %zu games",
                summary.mean_moves, summary.std_moves, summary.n);
  svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(base_y + 44) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" + caption +
         "</text>\n";
  svg += "</svg>\n";
  write_file(path, svg);
}

}  // namespace rfa::io
