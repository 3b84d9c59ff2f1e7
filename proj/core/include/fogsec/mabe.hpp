#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fogsec/lsss.hpp"
#include "fogsec/pairing.hpp"

namespace fogsec::mabe {

/// Multi-authority CP-ABE with an offline/online encryption split and
/// outsourced (partial) decryption.
///
/// Per attribute k an authority holds (a_k, b_k) and publishes
/// (ê(g,g)^{a_k}, g^{b_k}); a user with identity id gets
/// K_{k,id} = g^{a_k} * H1(id)^{b_k}. Ciphertext rows blind shares
/// lambda_x of m_s and omega_x of 0; the offline phase commits to
/// provisional shares and the online phase ships the scalar corrections.

struct AttrPub {
  GT egg_a;  // ê(g,g)^{a_k}
  G1 g_b;    // g^{b_k}
};

struct AuthorityKeys {
  std::map<std::string, std::pair<Scalar, Scalar>> secrets;  // a_k, b_k
  std::map<std::string, AttrPub> pub;
};

/// Published attribute→key table. Attribute names are namespaced globally:
/// a second authority claiming an enrolled attribute is rejected.
class AuthorityDirectory {
 public:
  void enroll(const AuthorityKeys& auth);
  const AttrPub& lookup(const std::string& attr) const;
  bool knows(const std::string& attr) const { return table_.count(attr) != 0; }

 private:
  std::map<std::string, AttrPub> table_;
};

struct UserKey {
  Bytes id;
  std::map<std::string, G1> K;  // K_{k,id}
};

struct IctSlot {
  GT ict1;  // ê(g,g)^{lambda'_x} * ê(g,g)^{a_k t_x}
  G1 ict2;  // g^{t_x}
  G1 ict3;  // g^{b_k t_x} * g^{omega'_x}
};

struct IsSlot {
  Scalar t;
  Scalar lambda_p;
  Scalar omega_p;
  std::string attr;
};

struct Intermediate {
  std::vector<IctSlot> ict;
  std::vector<IsSlot> is;
};

struct Ciphertext {
  std::string policy_text;
  lsss::AccessStructure structure;
  GT c0;  // d * ê(g,g)^{m_s}
  struct Row {
    IctSlot ict;
    Scalar corr1;  // lambda_x - lambda'_x
    Scalar corr2;  // omega_x - omega'_x
    std::string attr;
  };
  std::vector<Row> rows;
};

struct TransformedKey {
  Bytes id;
  std::map<std::string, G1> K_inv;  // K^{1/r}
  G1 h_id_inv;                      // H1(id)^{1/r}
};

struct PartialCiphertext {
  GT ct1;  // carries the implicit 1/r
  GT ct2;
  GT c0;
};

AuthorityKeys authority_setup(Ctx& ctx, Rng& rng,
                              const std::set<std::string>& attrs);

UserKey keygen_user(Ctx& ctx, const AuthorityKeys& auth, BytesView id,
                    const std::set<std::string>& attrs);

/// Offline phase, one slot per attribute instance: 6 T_E + 2 T_M per slot.
Intermediate intermediate_encrypt(Ctx& ctx, Rng& rng,
                                  const std::vector<std::string>& attrs,
                                  const AuthorityDirectory& dir);

/// Online phase: shares m_s and 0 over the policy matrix and emits the
/// per-row corrections (two T_S per row).
Ciphertext full_encrypt(Ctx& ctx, Rng& rng, const GT& d,
                        const Intermediate& inter, const lsss::Policy& policy);

/// All key components raised to 1/r; r stays with the user.
std::pair<TransformedKey, Scalar> transform_key(Ctx& ctx, Rng& rng,
                                                const UserKey& uk);

/// Fog-side decryption against the transformed key. Throws PolicyUnsatisfied
/// when the key's attributes do not span the policy. Invariant:
/// CT1^r * CT2 = ê(g,g)^{m_s}.
PartialCiphertext partial_decrypt(Ctx& ctx, const Ciphertext& ct,
                                  const TransformedKey& tk);

/// d = C0 / (CT1^r * CT2): one exponentiation, one multiplication, one
/// division.
GT full_decrypt(Ctx& ctx, const PartialCiphertext& pct, const Scalar& r);

// wire encodings
Bytes serialize(const Pairing& p, const Ciphertext& ct);
Ciphertext parse_ciphertext(const Pairing& p, BytesView in);
/// Device→fog 3-tuple <d, ICT, IS>; d travels in the clear to the fog.
Bytes offline_message(const Pairing& p, const GT& d, const Intermediate& inter);
std::pair<GT, Intermediate> parse_offline_message(const Pairing& p, BytesView in);
Bytes serialize(const Pairing& p, const TransformedKey& tk);
TransformedKey parse_transformed_key(const Pairing& p, BytesView in);
Bytes serialize(const Pairing& p, const PartialCiphertext& pct);  // 384
PartialCiphertext parse_partial(const Pairing& p, BytesView in);

}  // namespace fogsec::mabe
