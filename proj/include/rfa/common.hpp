#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rfa {

enum class Errc {
  invalid_config,
  illegal_action,
  invalid_distribution,
  invalid_order,
  empty_counts,
  slot_out_of_range,
  action_arity_mismatch,
  unknown_state,
  key_set_mismatch,
  terminal_state,
  missing_victim_table,
  nonfinite_input,
  invalid_params,
  empty_dataset,
  non_terminating_budget,
  state_space_cap_exceeded,
  opening_too_long,
  empty_records,
  bad_file,
  digest_mismatch,
};

const char* errc_name(Errc c);

/// Library-wide exception; `code()` identifies the contract that was broken.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits. One engine draw, no
// distribution objects, so streams are identical on every platform.
inline double next_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n) via fixed-point multiply. Exactly one engine draw.
inline std::uint64_t next_below(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

/// Derives an independent stream seed from (base seed, phase tag, worker index).
std::uint64_t split_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t base, std::string_view tag, std::uint64_t index = 0) {
  return Rng(split_seed(base, tag, index));
}

}  // namespace rfa
