#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fogsec/lsss.hpp"
#include "fogsec/pairing.hpp"

namespace testutil {

inline std::shared_ptr<const fogsec::Pairing> group(fogsec::Backend b,
                                                    const char* seed = "test") {
  return fogsec::Pairing::setup(b, seed);
}

inline std::vector<fogsec::Backend> both_backends() {
  return {fogsec::Backend::mock, fogsec::Backend::curve};
}

inline fogsec::Bytes random_bytes(fogsec::Rng& rng, std::size_t n) {
  fogsec::Bytes out(n);
  rng.fill(out);
  return out;
}

/// Random monotone policy with exactly `leaves` leaves over the attribute
/// pool {A, B, C, ...} of size `pool`.
inline fogsec::lsss::Policy random_policy(fogsec::Rng& rng, std::size_t leaves,
                                          std::size_t pool) {
  using fogsec::lsss::Policy;
  if (leaves == 1) {
    std::string attr(1, static_cast<char>('A' + rng.next_u64() % pool));
    return Policy::leaf(attr);
  }
  std::size_t left = 1 + rng.next_u64() % (leaves - 1);
  Policy l = random_policy(rng, left, pool);
  Policy r = random_policy(rng, leaves - left, pool);
  return rng.next_u64() % 2 == 0 ? Policy::and_of(std::move(l), std::move(r))
                                 : Policy::or_of(std::move(l), std::move(r));
}

inline std::vector<std::set<std::string>> all_subsets(std::size_t pool) {
  std::vector<std::set<std::string>> out;
  for (std::size_t mask = 0; mask < (1u << pool); ++mask) {
    std::set<std::string> s;
    for (std::size_t i = 0; i < pool; ++i) {
      if (mask & (1u << i)) s.insert(std::string(1, static_cast<char>('A' + i)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace testutil
