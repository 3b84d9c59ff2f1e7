#pragma once

#include <optional>

#include "fogsec/pairing.hpp"

namespace fogsec::clpre {

/// Certificateless proxy re-encryption for sharing one sensed value with many
/// receivers through a re-encrypting fog proxy.
///
/// Key derivation: g_i = H1(id), partial key P_i = g_i^mk, user secret k_i,
/// private S_i = P_i^{k_i}, public (g^{k_i}, mpk^{k_i}); a sender additionally
/// holds a delegation secret d and publishes g^d. The scalar sk_S appearing in
/// the re-encryption key is d*k_S — the one reading under which
/// c'' = c2 * ê(c4, c1) collapses to m * ê(H2(y), c0).

struct PkgState {
  Scalar mk;  // never serialized
  G1 mpk;     // g^mk
};

struct PublicKey {
  G1 u;                 // g^k
  G1 X;                 // mpk^k
  std::optional<G1> gd;  // g^d, senders only
};

struct UserKeys {
  Bytes id;
  G1 g_i;      // H1(id)
  G1 partial;  // P_i = g_i^mk
  Scalar k;
  G1 S;  // g_i^{mk*k}
  PublicKey pub;
  std::optional<Scalar> d;  // delegation secret, senders only
};

struct Ciphertext {
  G1 c0;  // g^{d r}
  G1 c1;  // g^r
  GT c2;  // m * ê(g_S^r, g^{d k_S})
};

/// C_R(y): y wrapped for the receiver as (g^{r'}, y * ê(g_R^{r'}, X_R)).
struct WrappedKey {
  G1 u1;
  GT u2;
};

struct ReEncKey {
  G1 c4;  // g_S^{-d k_S} * H2(y)^d
  WrappedKey wrapped;
};

struct ReEncCiphertext {
  G1 c0;
  GT c2pp;  // c'' = c2 * ê(c4, c1)
  WrappedKey wrapped;
};

PkgState pkg_setup(Ctx& ctx, Rng& rng);

/// P_i = H1(id)^mk.
G1 extract_partial_key(Ctx& ctx, const PkgState& pkg, BytesView id);

/// Checks ê(partial, g) == ê(H1(id), mpk) before deriving anything.
UserKeys user_keygen(Ctx& ctx, Rng& rng, const G1& partial, BytesView id,
                     const G1& mpk, bool is_sender);

/// 4 T_E + 1 T_M + 1 T_P.
Ciphertext encrypt(Ctx& ctx, Rng& rng, const GT& m, const UserKeys& sender);

/// Fresh y per call; receiver identified by (g_R, X_R).
ReEncKey rekeygen(Ctx& ctx, Rng& rng, const UserKeys& sender,
                  const G1& receiver_gi, const G1& receiver_X);

/// Proxy step, public inputs only: 1 T_M + 1 T_P; c0 passes through untouched.
ReEncCiphertext reencrypt(Ctx& ctx, const Ciphertext& ct, const ReEncKey& rk);

/// y = u2 / ê(S_R, u1), then m = c'' / ê(H2(y), c0).
GT decrypt(Ctx& ctx, const ReEncCiphertext& rct, const UserKeys& receiver);

// canonical wire encodings (sizes driving the byte ledgers)
Bytes serialize(const Pairing& p, const Ciphertext& ct);          // 384
Bytes serialize(const Pairing& p, const ReEncKey& rk);            // 384
Bytes serialize(const Pairing& p, const ReEncCiphertext& rct);    // 512
Ciphertext parse_ciphertext(const Pairing& p, BytesView in);
ReEncKey parse_rekey(const Pairing& p, BytesView in);
ReEncCiphertext parse_reenc(const Pairing& p, BytesView in);

/// Upload message <c', rk_{S,R}> as sent to the fog node (768 bytes).
Bytes upload_message(const Pairing& p, const Ciphertext& ct, const ReEncKey& rk);

/// KEM-style bridge for bulk payloads: symmetric key = SHA-256 of the
/// canonical encoding of the GT message.
std::array<std::uint8_t, 32> payload_key(const Pairing& p, const GT& m);

}  // namespace fogsec::clpre
