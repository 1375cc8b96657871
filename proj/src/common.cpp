#include "rfa/common.hpp"

namespace rfa {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_config: return "invalid-config";
    case Errc::illegal_action: return "illegal-action";
    case Errc::invalid_distribution: return "invalid-distribution";
    case Errc::invalid_order: return "invalid-order";
    case Errc::empty_counts: return "empty-counts";
    case Errc::slot_out_of_range: return "slot-out-of-range";
    case Errc::action_arity_mismatch: return "action-arity-mismatch";
    case Errc::unknown_state: return "unknown-state";
    case Errc::key_set_mismatch: return "key-set-mismatch";
    case Errc::terminal_state: return "terminal-state";
    case Errc::missing_victim_table: return "missing-victim-table";
    case Errc::nonfinite_input: return "nonfinite-input";
    case Errc::invalid_params: return "invalid-params";
    case Errc::empty_dataset: return "empty-dataset";
    case Errc::non_terminating_budget: return "non-terminating-budget";
    case Errc::state_space_cap_exceeded: return "state-space-cap-exceeded";
    case Errc::opening_too_long: return "opening-too-long";
    case Errc::empty_records: return "empty-records";
    case Errc::bad_file: return "bad-file";
    case Errc::digest_mismatch: return "digest-mismatch";
  }
  return "unknown-error";
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
  // FNV-1a over the tag, then two splitmix rounds folding in base and index.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return splitmix64(splitmix64(h ^ base) ^ index);
}

}  // namespace rfa
