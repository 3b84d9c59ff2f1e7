#include "fogsec/rng.hpp"

#include <vector>

namespace fogsec {

mpz_class Rng::below(const mpz_class& bound) {
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t bytes = (bits + 7) / 8;
  std::vector<std::uint8_t> buf(bytes);
  const unsigned top_bits = bits % 8;
  while (true) {
    fill(buf);
    // mask surplus top bits so the rejection rate stays below 1/2
    if (top_bits != 0) buf[0] &= static_cast<std::uint8_t>((1u << top_bits) - 1);
    mpz_class v;
    mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    if (v < bound) return v;
  }
}

mpz_class Rng::below_nonzero(const mpz_class& bound) {
  while (true) {
    mpz_class v = below(bound);
    if (v != 0) return v;
  }
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t w = next_u64();
    for (int j = 0; j < 8 && i < out.size(); ++j, ++i) {
      out[i] = static_cast<std::uint8_t>(w >> (8 * j));
    }
  }
}

Rng Rng::fork(std::string_view label) const {
  // FNV-1a over the label, mixed with the parent seed via splitmix64
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : label) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ULL;
  }
  std::uint64_t z = seed_ ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return Rng(z);
}

}  // namespace fogsec
