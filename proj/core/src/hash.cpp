#include "fogsec/hash.hpp"

#include <openssl/sha.h>

namespace fogsec {

std::array<std::uint8_t, 32> sha256(BytesView data) {
  std::array<std::uint8_t, 32> digest;
  SHA256(data.data(), data.size(), digest.data());
  return digest;
}

}  // namespace fogsec
