#pragma once

#include <variant>
#include <vector>

#include "fogsec/pairing.hpp"

namespace fogsec::homopre {

/// Multiplicatively homomorphic encryption with a unidirectional, single-hop
/// proxy re-encryption (key switch).
///
/// Keys: sk, pk = (pk1, pk2) = (ê(g,g)^sk, g^sk). Second-level (owner)
/// ciphertexts are (pk2^y, m Z^y); the pairing-based switch
/// c1' = ê(c1, rk) with rk = pk2_target^{1/sk_source} turns them into
/// first-level ciphertexts (pk1_target^y, m Z^y). Only multiplication is
/// supported homomorphically.

enum class Level { second, first };

struct KeyPair {
  Scalar sk;
  GT pk1;  // ê(g,g)^sk
  G1 pk2;  // g^sk
};

struct PublicKey {
  GT pk1;
  G1 pk2;
};

struct Ciphertext {
  Level level = Level::second;
  std::variant<G1, GT> c1;  // G1 at second level, GT at first
  GT c2;                    // m * Z^y
  /// Transient fingerprint of the encrypting key; 0 after parsing or a key
  /// switch (unknown). Not part of the wire form.
  std::uint64_t key_tag = 0;
};

/// Fingerprint used for operand/key consistency checks.
std::uint64_t key_fingerprint(const Pairing& p, const PublicKey& pk);

struct ReKey {
  G1 rk;  // pk2_target^{1/sk_source}
};

/// 2 T_E + 1 T_P: each node derives ê(g,g) itself before exponentiating.
KeyPair keygen(Ctx& ctx, Rng& rng);

inline PublicKey public_part(const KeyPair& kp) { return {kp.pk1, kp.pk2}; }

/// 2 T_E + 1 T_M at either level.
Ciphertext encrypt(Ctx& ctx, Rng& rng, const GT& m, const PublicKey& pk,
                   Level level);

/// Rerandomized product: decrypts to m * m'. Operands must share level and
/// key. 2 T_E + 4 T_M.
Ciphertext eval_mul(Ctx& ctx, Rng& rng, const Ciphertext& a,
                    const Ciphertext& b, const PublicKey& pk);

/// Multiply by a plaintext constant (one T_M on c2).
Ciphertext eval_mul_const(Ctx& ctx, const Ciphertext& a, const GT& factor);

/// rk = target_pk2^{1/source_sk}; needs no secret from the target.
ReKey rekeygen(Ctx& ctx, const Scalar& source_sk, const G1& target_pk2);

/// Public well-formedness check ê(rk, pk2_source) == ê(pk2_target, g).
bool rekey_well_formed(const Pairing& p, const ReKey& rk, const G1& source_pk2,
                       const G1& target_pk2);

/// Second-level → first-level switch; c2 unchanged; 1 T_P.
Ciphertext reencrypt(Ctx& ctx, const Ciphertext& ct, const ReKey& rk);

/// first: m = c2 / c1^{1/sk}; second: m = c2 / ê(c1, g)^{1/sk}.
GT decrypt(Ctx& ctx, const Ciphertext& ct, const Scalar& sk);

// -- evaluation programs (the query's f1, serialized) -------------------------

struct EvalOp {
  enum class Kind { mul_ct, mul_const };
  Kind kind = Kind::mul_ct;
  std::size_t ct_index = 0;  // mul_ct
  GT factor;                 // mul_const
};

struct EvalProgram {
  std::vector<EvalOp> ops;
};

/// Runs the program over an accumulator initialized to inputs[0].
Ciphertext run_program(Ctx& ctx, Rng& rng, const EvalProgram& prog,
                       std::span<const Ciphertext> inputs, const PublicKey& pk);

Bytes serialize(const Pairing& p, const Ciphertext& ct);  // 256 bytes
Ciphertext parse_ciphertext(const Pairing& p, BytesView in, Level level);
Bytes serialize(const Pairing& p, const EvalProgram& prog);
EvalProgram parse_program(const Pairing& p, BytesView in);

}  // namespace fogsec::homopre
