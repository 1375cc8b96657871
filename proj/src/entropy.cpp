#include "rfa/entropy.hpp"

#include <cmath>
#include <string>

namespace rfa {

EntropyKind EntropyKind::renyi(double order) {
  if (!(order > 0.0) || order == 1.0)
    fail(Errc::invalid_order, "renyi order must be > 0 and != 1 (use shannon for the limit)");
  return {Family::renyi, order};
}

void check_distribution(std::span<const double> p) {
  if (p.empty()) fail(Errc::invalid_distribution, "empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) fail(Errc::invalid_distribution, "negative or NaN probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(Errc::invalid_distribution, "probabilities sum to " + std::to_string(sum));
}

double shannon_entropy(std::span<const double> p) {
  check_distribution(p);
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h < 0.0 ? 0.0 : h;
}

double renyi_entropy(std::span<const double> p, double order) {
  check_distribution(p);
  if (!(order > 0.0) || order == 1.0)
    fail(Errc::invalid_order, "renyi order must be > 0 and != 1");
  double sum = 0.0;
  for (double v : p)
    if (v > 0.0) sum += std::pow(v, order);
  const double h = std::log(sum) / (1.0 - order);
  return h < 0.0 ? 0.0 : h;
}

double entropy_of(std::span<const double> p, const EntropyKind& kind) {
  return kind.family == EntropyKind::Family::shannon ? shannon_entropy(p)
                                                     : renyi_entropy(p, kind.order);
}

std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) fail(Errc::empty_counts, "no observations to normalize");
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return p;
}

void ActionCountTable::record(const StateKey& key, int action_slot, int n_actions) {
  if (n_actions <= 0) fail(Errc::invalid_params, "n_actions must be positive");
  if (action_slot < 0 || action_slot >= n_actions)
    fail(Errc::slot_out_of_range,
         "slot " + std::to_string(action_slot) + " of " + std::to_string(n_actions));
  auto [it, inserted] = counts.try_emplace(key, static_cast<std::size_t>(n_actions), 0);
  if (!inserted && it->second.size() != static_cast<std::size_t>(n_actions))
    fail(Errc::action_arity_mismatch,
         "state has " + std::to_string(it->second.size()) + " actions, caller says " +
             std::to_string(n_actions));
  ++it->second[static_cast<std::size_t>(action_slot)];
  ++total_observations;
}

bool ActionCountTable::observed(const StateKey& key) const {
  auto it = counts.find(key);
  if (it == counts.end()) return false;
  for (auto c : it->second)
    if (c > 0) return true;
  return false;
}

double ActionCountTable::entropy_at(const StateKey& key, const EntropyKind& kind) const {
  auto it = counts.find(key);
  if (it == counts.end() || !observed(key))
    fail(Errc::unknown_state, "state " + key.hex() + " never observed");
  return entropy_of(empirical_distribution(it->second), kind);
}

void ActionCountTable::merge(const ActionCountTable& other) {
  for (const auto& [key, vec] : other.counts) {
    auto [it, inserted] = counts.try_emplace(key, vec.size(), 0);
    if (it->second.size() != vec.size())
      fail(Errc::action_arity_mismatch, "merge arity mismatch at " + key.hex());
    for (std::size_t i = 0; i < vec.size(); ++i) it->second[i] += vec[i];
  }
  total_observations += other.total_observations;
}

double entropy_table_distance(const EntropyTable& h0, const EntropyTable& h1) {
  if (h0.entropies.size() != h1.entropies.size())
    fail(Errc::key_set_mismatch, "tables hold different key counts");
  double d = 0.0;
  for (const auto& [key, v0] : h0.entropies) {
    auto it = h1.entropies.find(key);
    if (it == h1.entropies.end()) fail(Errc::key_set_mismatch, "key " + key.hex() + " missing");
    d += std::abs(v0 - it->second);
  }
  return d;
}

}  // namespace rfa
