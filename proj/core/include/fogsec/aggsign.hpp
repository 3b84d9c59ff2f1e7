#pragma once

#include <span>
#include <vector>

#include "fogsec/pairing.hpp"

namespace fogsec::aggsign {

/// BLS and aggregate-BLS signing for device→fog data frames.
///
/// sigma_j = H1(D_j)^sk, aggregate = prod sigma_j, verified with
///   prod ê(pk, H1(D_j)) == ê(sigma_agg, g).
///
/// The serialized signature width defaults to the 96 bytes the overhead
/// tables account with (a compressed point fits in 65, the rest is padding);
/// switch to 128 to line up with the generic element encoding instead.

struct Params {
  std::size_t signature_size = 96;
};

struct KeyPair {
  Scalar sk;
  G1 pk;  // g^sk
};

struct Signature {
  G1 sigma;
};

enum class FrameMode { bls, aggregate };

KeyPair keygen(Ctx& ctx, Rng& rng);

/// 1 T_E + 1 T_H; rejects empty packets.
Signature sign(Ctx& ctx, BytesView packet, const Scalar& sk);

/// Group product of the inputs; a single signature comes back unchanged.
Signature aggregate(Ctx& ctx, std::span<const Signature> sigs);

/// Pairing-product check: (n+1) T_P + n T_H (+ n-1 GT multiplications).
bool verify_aggregate(Ctx& ctx, std::span<const Bytes> packets,
                      const Signature& agg, const G1& pk);

/// Per-packet check ê(pk, H1(D)) == ê(sigma, g): 2 T_P + 1 T_H.
bool verify_single(Ctx& ctx, BytesView packet, const Signature& sig,
                   const G1& pk);

/// Wire bytes of a frame under the tables' accounting:
/// aggregate n*|m| + sig, bls n*|m| + n*sig.
std::size_t frame_wire_size(std::size_t n, std::size_t msg_size, FrameMode mode,
                            const Params& params = {});

struct SignedFrame {
  std::vector<Bytes> packets;
  std::vector<Signature> sigs;  // aggregate mode: exactly one
  FrameMode mode = FrameMode::aggregate;
};

/// Canonical payload bytes (what byte ledgers record): packets concatenated,
/// then each signature at the configured width. Matches frame_wire_size when
/// all packets share one size.
Bytes frame_payload(const Pairing& p, const SignedFrame& frame,
                    const Params& params = {});

/// Self-describing container for files:
/// [u32 n][n x (u32 len | payload)][signature bytes].
Bytes encode_frame(const Pairing& p, const SignedFrame& frame,
                   const Params& params = {});
SignedFrame decode_frame(const Pairing& p, BytesView in,
                         const Params& params = {});

}  // namespace fogsec::aggsign
