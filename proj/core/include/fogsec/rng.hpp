#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include <gmpxx.h>

namespace fogsec {

/// Deterministic random stream. Every piece of protocol randomness is drawn
/// from one of these so that a scenario seed reproduces a run bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform value in [0, bound) by rejection sampling.
  mpz_class below(const mpz_class& bound);

  /// Uniform value in [1, bound).
  mpz_class below_nonzero(const mpz_class& bound);

  void fill(std::span<std::uint8_t> out);

  /// Independent child stream; the label decouples it from draw order.
  Rng fork(std::string_view label) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
};

}  // namespace fogsec
