#pragma once

#include <array>

#include "fogsec/bytes.hpp"

namespace fogsec {

/// SHA-256; the 32-byte digest is the intermediary behind both group hashes.
std::array<std::uint8_t, 32> sha256(BytesView data);

}  // namespace fogsec
