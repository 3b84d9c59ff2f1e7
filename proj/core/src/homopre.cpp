#include "fogsec/homopre.hpp"

#include "fogsec/errors.hpp"
#include "fogsec/hash.hpp"

namespace fogsec::homopre {

std::uint64_t key_fingerprint(const Pairing& p, const PublicKey& pk) {
  auto d = sha256(p.serialize(pk.pk2));
  std::uint64_t t = 0;
  for (int i = 0; i < 8; ++i) t = (t << 8) | d[i];
  return t == 0 ? 1 : t;
}

KeyPair keygen(Ctx& ctx, Rng& rng) {
  Scalar sk = ctx.group().random_nonzero_scalar(rng);
  GT z = ctx.pair(ctx.g(), ctx.g());
  return {sk, ctx.gt_exp(z, sk), ctx.g1_exp(ctx.g(), sk)};
}

Ciphertext encrypt(Ctx& ctx, Rng& rng, const GT& m, const PublicKey& pk,
                   Level level) {
  Scalar y = ctx.group().random_nonzero_scalar(rng);
  Ciphertext ct;
  ct.level = level;
  ct.key_tag = key_fingerprint(ctx.group(), pk);
  if (level == Level::second) {
    ct.c1 = ctx.g1_exp(pk.pk2, y);
  } else {
    ct.c1 = ctx.gt_exp(pk.pk1, y);
  }
  ct.c2 = ctx.gt_mul(m, ctx.gt_exp(ctx.z(), y));
  return ct;
}

Ciphertext eval_mul(Ctx& ctx, Rng& rng, const Ciphertext& a,
                    const Ciphertext& b, const PublicKey& pk) {
  if (a.level != b.level)
    throw MismatchError("homomorphic operands at different levels");
  const std::uint64_t fp = key_fingerprint(ctx.group(), pk);
  for (const auto* ct : {&a, &b}) {
    if (ct->key_tag != 0 && ct->key_tag != fp)
      throw MismatchError("operand encrypted under a different key");
  }
  Scalar fresh = ctx.group().random_nonzero_scalar(rng);
  Ciphertext out;
  out.level = a.level;
  out.key_tag = fp;
  if (a.level == Level::second) {
    // c1'' = c1 * c1' * pk2^a
    out.c1 = ctx.g1_mul(ctx.g1_mul(std::get<G1>(a.c1), std::get<G1>(b.c1)),
                        ctx.g1_exp(pk.pk2, fresh));
  } else {
    out.c1 = ctx.gt_mul(ctx.gt_mul(std::get<GT>(a.c1), std::get<GT>(b.c1)),
                        ctx.gt_exp(pk.pk1, fresh));
  }
  // c2'' = c2 * c2' * Z^a
  out.c2 = ctx.gt_mul(ctx.gt_mul(a.c2, b.c2), ctx.gt_exp(ctx.z(), fresh));
  return out;
}

Ciphertext eval_mul_const(Ctx& ctx, const Ciphertext& a, const GT& factor) {
  Ciphertext out = a;
  out.c2 = ctx.gt_mul(a.c2, factor);
  return out;
}

ReKey rekeygen(Ctx& ctx, const Scalar& source_sk, const G1& target_pk2) {
  Scalar inv = ctx.sc_inv(source_sk);
  return {ctx.g1_exp(target_pk2, inv)};
}

bool rekey_well_formed(const Pairing& p, const ReKey& rk, const G1& source_pk2,
                       const G1& target_pk2) {
  return p.pair(rk.rk, source_pk2) == p.pair(target_pk2, p.generator());
}

Ciphertext reencrypt(Ctx& ctx, const Ciphertext& ct, const ReKey& rk) {
  if (ct.level != Level::second)
    throw ProtocolError("only second-level ciphertexts can be re-encrypted");
  Ciphertext out;
  out.level = Level::first;
  // ê(pk2_src^y, pk2_tgt^{1/sk_src}) = ê(g,g)^{sk_tgt y} = pk1_tgt^y
  out.c1 = ctx.pair(std::get<G1>(ct.c1), rk.rk);
  out.c2 = ct.c2;
  return out;
}

GT decrypt(Ctx& ctx, const Ciphertext& ct, const Scalar& sk) {
  Scalar inv = ctx.sc_inv(sk);
  GT blind;
  if (ct.level == Level::first) {
    blind = ctx.gt_exp(std::get<GT>(ct.c1), inv);
  } else {
    blind = ctx.gt_exp(ctx.pair(std::get<G1>(ct.c1), ctx.g()), inv);
  }
  return ctx.gt_div(ct.c2, blind);
}

Ciphertext run_program(Ctx& ctx, Rng& rng, const EvalProgram& prog,
                       std::span<const Ciphertext> inputs, const PublicKey& pk) {
  if (inputs.empty()) throw ProtocolError("evaluation needs at least one input");
  Ciphertext acc = inputs[0];
  for (const auto& op : prog.ops) {
    switch (op.kind) {
      case EvalOp::Kind::mul_ct:
        if (op.ct_index >= inputs.size())
          throw ProtocolError("evaluation program references a missing input");
        acc = eval_mul(ctx, rng, acc, inputs[op.ct_index], pk);
        break;
      case EvalOp::Kind::mul_const:
        acc = eval_mul_const(ctx, acc, op.factor);
        break;
    }
  }
  return acc;
}

static constexpr std::size_t kE = Pairing::kElementBytes;

Bytes serialize(const Pairing& p, const Ciphertext& ct) {
  Bytes out;
  if (ct.level == Level::second) {
    append(out, p.serialize(std::get<G1>(ct.c1)));
  } else {
    append(out, p.serialize(std::get<GT>(ct.c1)));
  }
  append(out, p.serialize(ct.c2));
  return out;
}

Ciphertext parse_ciphertext(const Pairing& p, BytesView in, Level level) {
  if (in.size() != 2 * kE) throw DecodeError("ciphertext must be 256 bytes");
  Ciphertext ct;
  ct.level = level;
  if (level == Level::second) {
    ct.c1 = p.parse_g1(in.subspan(0, kE));
  } else {
    ct.c1 = p.parse_gt(in.subspan(0, kE));
  }
  ct.c2 = p.parse_gt(in.subspan(kE, kE));
  return ct;
}

Bytes serialize(const Pairing& p, const EvalProgram& prog) {
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(prog.ops.size()));
  for (const auto& op : prog.ops) {
    if (op.kind == EvalOp::Kind::mul_ct) {
      out.push_back(0x01);
      append_u32_be(out, static_cast<std::uint32_t>(op.ct_index));
    } else {
      out.push_back(0x02);
      append(out, p.serialize(op.factor));
    }
  }
  return out;
}

EvalProgram parse_program(const Pairing& p, BytesView in) {
  EvalProgram prog;
  std::size_t off = 0;
  std::uint32_t n = read_u32_be(in, off);
  off += 4;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (off >= in.size()) throw DecodeError("truncated evaluation program");
    std::uint8_t kind = in[off++];
    EvalOp op;
    if (kind == 0x01) {
      op.kind = EvalOp::Kind::mul_ct;
      op.ct_index = read_u32_be(in, off);
      off += 4;
    } else if (kind == 0x02) {
      op.kind = EvalOp::Kind::mul_const;
      if (off + kE > in.size()) throw DecodeError("truncated constant factor");
      op.factor = p.parse_gt(in.subspan(off, kE));
      off += kE;
    } else {
      throw DecodeError("unknown evaluation opcode");
    }
    prog.ops.push_back(op);
  }
  if (off != in.size()) throw DecodeError("trailing bytes in program");
  return prog;
}

}  // namespace fogsec::homopre
