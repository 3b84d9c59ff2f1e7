#pragma once

#include <stdexcept>
#include <string>

namespace fogsec {

/// Malformed or truncated wire bytes.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Elements or keys from different group instantiations were mixed.
struct MismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A protocol precondition failed (bad partial key, wrong ciphertext level, ...).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The presented attribute set does not satisfy the access structure.
struct PolicyUnsatisfied : ProtocolError {
  using ProtocolError::ProtocolError;
};

}  // namespace fogsec
