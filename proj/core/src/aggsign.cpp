#include "fogsec/aggsign.hpp"

#include "fogsec/errors.hpp"

namespace fogsec::aggsign {

KeyPair keygen(Ctx& ctx, Rng& rng) {
  Scalar sk = ctx.group().random_nonzero_scalar(rng);
  G1 pk = ctx.g1_exp(ctx.g(), sk);
  return {sk, pk};
}

Signature sign(Ctx& ctx, BytesView packet, const Scalar& sk) {
  if (packet.empty()) throw ProtocolError("cannot sign an empty packet");
  G1 h = ctx.hash_to_g1(packet);
  return {ctx.g1_exp(h, sk)};
}

Signature aggregate(Ctx& ctx, std::span<const Signature> sigs) {
  if (sigs.empty()) throw ProtocolError("nothing to aggregate");
  Signature out = sigs[0];
  for (std::size_t i = 1; i < sigs.size(); ++i) {
    out.sigma = ctx.g1_mul(out.sigma, sigs[i].sigma);
  }
  return out;
}

bool verify_aggregate(Ctx& ctx, std::span<const Bytes> packets,
                      const Signature& agg, const G1& pk) {
  if (packets.empty()) throw ProtocolError("empty frame");
  GT lhs{};
  bool first = true;
  for (const auto& d : packets) {
    GT term = ctx.pair(pk, ctx.hash_to_g1(d));
    lhs = first ? term : ctx.gt_mul(lhs, term);
    first = false;
  }
  GT rhs = ctx.pair(agg.sigma, ctx.g());
  return lhs == rhs;
}

bool verify_single(Ctx& ctx, BytesView packet, const Signature& sig,
                   const G1& pk) {
  GT lhs = ctx.pair(pk, ctx.hash_to_g1(packet));
  GT rhs = ctx.pair(sig.sigma, ctx.g());
  return lhs == rhs;
}

std::size_t frame_wire_size(std::size_t n, std::size_t msg_size, FrameMode mode,
                            const Params& params) {
  if (n == 0) throw ProtocolError("frame must carry at least one packet");
  std::size_t sigs = mode == FrameMode::aggregate ? 1 : n;
  return n * msg_size + sigs * params.signature_size;
}

Bytes frame_payload(const Pairing& p, const SignedFrame& frame,
                    const Params& params) {
  Bytes out;
  for (const auto& pkt : frame.packets) append(out, pkt);
  for (const auto& s : frame.sigs)
    append(out, p.serialize_compressed(s.sigma, params.signature_size));
  return out;
}

Bytes encode_frame(const Pairing& p, const SignedFrame& frame,
                   const Params& params) {
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(frame.packets.size()));
  for (const auto& pkt : frame.packets) {
    append_u32_be(out, static_cast<std::uint32_t>(pkt.size()));
    append(out, pkt);
  }
  for (const auto& s : frame.sigs)
    append(out, p.serialize_compressed(s.sigma, params.signature_size));
  return out;
}

SignedFrame decode_frame(const Pairing& p, BytesView in, const Params& params) {
  SignedFrame frame;
  std::size_t off = 0;
  std::uint32_t n = read_u32_be(in, off);
  off += 4;
  if (n == 0) throw DecodeError("frame must carry at least one packet");
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t len = read_u32_be(in, off);
    off += 4;
    if (off + len > in.size()) throw DecodeError("truncated packet");
    frame.packets.emplace_back(in.begin() + off, in.begin() + off + len);
    off += len;
  }
  std::size_t rest = in.size() - off;
  const std::size_t w = params.signature_size;
  if (rest == w) {
    frame.mode = FrameMode::aggregate;
  } else if (rest == static_cast<std::size_t>(n) * w) {
    frame.mode = FrameMode::bls;
  } else {
    throw DecodeError("signature section has unexpected length");
  }
  while (off < in.size()) {
    frame.sigs.push_back({p.parse_compressed(in.subspan(off, w))});
    off += w;
  }
  return frame;
}

}  // namespace fogsec::aggsign
