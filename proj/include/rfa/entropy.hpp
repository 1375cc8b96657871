#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rfa/common.hpp"
#include "rfa/state_key.hpp"

namespace rfa {

/// Which entropy to compute, in nats. Rényi order 1 is excluded; the
/// alpha -> 1 limit is Shannon and callers say so explicitly.
struct EntropyKind {
  enum class Family : std::uint8_t { shannon = 0, renyi = 1 };
  Family family = Family::shannon;
  double order = 0.0;

  static EntropyKind shannon() { return {Family::shannon, 0.0}; }
  static EntropyKind renyi(double order);  // throws invalid-order unless order > 0 and != 1
};

/// Throws invalid-distribution unless p is a probability vector:
/// nonempty, entries >= 0, sum within 1e-9 of 1.
void check_distribution(std::span<const double> p);

/// -sum p_i ln p_i with 0 ln 0 := 0. Result in [0, ln n].
double shannon_entropy(std::span<const double> p);

/// (1 / (1 - order)) * ln sum p_i^order; order 0.5 gives 2 ln sum sqrt(p_i).
double renyi_entropy(std::span<const double> p, double order);

double entropy_of(std::span<const double> p, const EntropyKind& kind);

/// counts / total. Throws empty-counts when every entry is zero.
std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts);

/// Per-state victim action counts; the empirical policy and its entropy are
/// derived views. Single writer during a collection phase; freely shared
/// read-only afterwards. Stores raw counts so the entropy can be recomputed
/// under any EntropyKind.
struct ActionCountTable {
  std::unordered_map<StateKey, std::vector<std::uint64_t>> counts;
  std::uint64_t total_observations = 0;

  /// Creates a zero vector of length n_actions on first visit, then
  /// increments action_slot. Slots index the state's legal-action list.
  void record(const StateKey& key, int action_slot, int n_actions);

  /// True when the key is present with at least one observation.
  bool observed(const StateKey& key) const;

  /// Entropy of the empirical action distribution at key.
  /// Throws unknown-state when the key is absent or all-zero.
  double entropy_at(const StateKey& key, const EntropyKind& kind) const;

  /// Entry-wise count addition, for merging per-worker tables.
  void merge(const ActionCountTable& other);
};

/// Per-state entropy snapshots (the previous/current tables of the
/// convergence loop, and the learned estimate it returns).
struct EntropyTable {
  std::unordered_map<StateKey, double> entropies;
};

/// Sum of absolute per-key differences. Throws key-set-mismatch unless the
/// two tables hold exactly the same keys.
double entropy_table_distance(const EntropyTable& h0, const EntropyTable& h1);

}  // namespace rfa
