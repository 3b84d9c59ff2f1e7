#include "fogsec/clpre.hpp"

#include "fogsec/errors.hpp"
#include "fogsec/hash.hpp"

namespace fogsec::clpre {

PkgState pkg_setup(Ctx& ctx, Rng& rng) {
  Scalar mk = ctx.group().random_nonzero_scalar(rng);
  G1 mpk = ctx.g1_exp(ctx.g(), mk);
  return {mk, mpk};
}

G1 extract_partial_key(Ctx& ctx, const PkgState& pkg, BytesView id) {
  if (id.empty()) throw ProtocolError("empty identity");
  G1 g_i = ctx.hash_to_g1(id);
  return ctx.g1_exp(g_i, pkg.mk);
}

UserKeys user_keygen(Ctx& ctx, Rng& rng, const G1& partial, BytesView id,
                     const G1& mpk, bool is_sender) {
  G1 g_i = ctx.hash_to_g1(id);
  // ê(P_i, g) == ê(g_i, mpk) iff P_i = g_i^mk
  if (ctx.pair(partial, ctx.g()) != ctx.pair(g_i, mpk))
    throw ProtocolError("partial key fails the consistency check");

  UserKeys keys;
  keys.id.assign(id.begin(), id.end());
  keys.g_i = g_i;
  keys.partial = partial;
  keys.k = ctx.group().random_nonzero_scalar(rng);
  keys.S = ctx.g1_exp(partial, keys.k);
  keys.pub.u = ctx.g1_exp(ctx.g(), keys.k);
  keys.pub.X = ctx.g1_exp(mpk, keys.k);
  if (is_sender) {
    keys.d = ctx.group().random_nonzero_scalar(rng);
    keys.pub.gd = ctx.g1_exp(ctx.g(), *keys.d);
  }
  return keys;
}

Ciphertext encrypt(Ctx& ctx, Rng& rng, const GT& m, const UserKeys& sender) {
  if (!sender.d) throw ProtocolError("encryption requires the delegation secret");
  const Pairing& p = ctx.group();
  Scalar r = p.random_nonzero_scalar(rng);
  Scalar dr = p.sc_mul(*sender.d, r);
  Scalar dk = p.sc_mul(*sender.d, sender.k);

  Ciphertext ct;
  ct.c0 = ctx.g1_exp(ctx.g(), dr);
  ct.c1 = ctx.g1_exp(ctx.g(), r);
  // c2 = m * ê(g_S^r, g^{d k_S})
  G1 gsr = ctx.g1_exp(sender.g_i, r);
  G1 gdk = ctx.g1_exp(ctx.g(), dk);
  ct.c2 = ctx.gt_mul(m, ctx.pair(gsr, gdk));
  return ct;
}

ReEncKey rekeygen(Ctx& ctx, Rng& rng, const UserKeys& sender,
                  const G1& receiver_gi, const G1& receiver_X) {
  if (!sender.d) throw ProtocolError("re-keying requires the delegation secret");
  const Pairing& p = ctx.group();
  GT y = p.random_gt(rng);

  // c4 = g_S^{-d k_S} * H2(y)^d
  Scalar neg_dk = p.sc_neg(p.sc_mul(*sender.d, sender.k));
  G1 lhs = ctx.g1_exp(sender.g_i, neg_dk);
  G1 h2y = ctx.hash_gt_to_g1(y);
  G1 rhs = ctx.g1_exp(h2y, *sender.d);

  ReEncKey rk;
  rk.c4 = ctx.g1_mul(lhs, rhs);

  // C_R(y) = (g^{r'}, y * ê(g_R^{r'}, X_R))
  Scalar rp = p.random_nonzero_scalar(rng);
  rk.wrapped.u1 = ctx.g1_exp(ctx.g(), rp);
  G1 grp = ctx.g1_exp(receiver_gi, rp);
  rk.wrapped.u2 = ctx.gt_mul(y, ctx.pair(grp, receiver_X));
  return rk;
}

ReEncCiphertext reencrypt(Ctx& ctx, const Ciphertext& ct, const ReEncKey& rk) {
  ReEncCiphertext out;
  out.c0 = ct.c0;
  out.c2pp = ctx.gt_mul(ct.c2, ctx.pair(rk.c4, ct.c1));
  out.wrapped = rk.wrapped;
  return out;
}

GT decrypt(Ctx& ctx, const ReEncCiphertext& rct, const UserKeys& receiver) {
  GT y = ctx.gt_div(rct.wrapped.u2, ctx.pair(receiver.S, rct.wrapped.u1));
  G1 h2y = ctx.hash_gt_to_g1(y);
  return ctx.gt_div(rct.c2pp, ctx.pair(h2y, rct.c0));
}

Bytes serialize(const Pairing& p, const Ciphertext& ct) {
  Bytes out;
  append(out, p.serialize(ct.c0));
  append(out, p.serialize(ct.c1));
  append(out, p.serialize(ct.c2));
  return out;
}

Bytes serialize(const Pairing& p, const ReEncKey& rk) {
  Bytes out;
  append(out, p.serialize(rk.c4));
  append(out, p.serialize(rk.wrapped.u1));
  append(out, p.serialize(rk.wrapped.u2));
  return out;
}

Bytes serialize(const Pairing& p, const ReEncCiphertext& rct) {
  Bytes out;
  append(out, p.serialize(rct.c0));
  append(out, p.serialize(rct.c2pp));
  append(out, p.serialize(rct.wrapped.u1));
  append(out, p.serialize(rct.wrapped.u2));
  return out;
}

static constexpr std::size_t kE = Pairing::kElementBytes;

Ciphertext parse_ciphertext(const Pairing& p, BytesView in) {
  if (in.size() != 3 * kE) throw DecodeError("ciphertext must be 384 bytes");
  Ciphertext ct;
  ct.c0 = p.parse_g1(in.subspan(0, kE));
  ct.c1 = p.parse_g1(in.subspan(kE, kE));
  ct.c2 = p.parse_gt(in.subspan(2 * kE, kE));
  return ct;
}

ReEncKey parse_rekey(const Pairing& p, BytesView in) {
  if (in.size() != 3 * kE) throw DecodeError("re-encryption key must be 384 bytes");
  ReEncKey rk;
  rk.c4 = p.parse_g1(in.subspan(0, kE));
  rk.wrapped.u1 = p.parse_g1(in.subspan(kE, kE));
  rk.wrapped.u2 = p.parse_gt(in.subspan(2 * kE, kE));
  return rk;
}

ReEncCiphertext parse_reenc(const Pairing& p, BytesView in) {
  if (in.size() != 4 * kE) throw DecodeError("delivery tuple must be 512 bytes");
  ReEncCiphertext rct;
  rct.c0 = p.parse_g1(in.subspan(0, kE));
  rct.c2pp = p.parse_gt(in.subspan(kE, kE));
  rct.wrapped.u1 = p.parse_g1(in.subspan(2 * kE, kE));
  rct.wrapped.u2 = p.parse_gt(in.subspan(3 * kE, kE));
  return rct;
}

Bytes upload_message(const Pairing& p, const Ciphertext& ct, const ReEncKey& rk) {
  Bytes out = serialize(p, ct);
  append(out, serialize(p, rk));
  return out;
}

std::array<std::uint8_t, 32> payload_key(const Pairing& p, const GT& m) {
  return sha256(p.serialize(m));
}

}  // namespace fogsec::clpre
