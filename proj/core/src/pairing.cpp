#include "fogsec/pairing.hpp"

#include <cassert>
#include <cstring>

#include "fogsec/errors.hpp"
#include "fogsec/hash.hpp"
#include "typea.hpp"

namespace fogsec {

OpCounter& OpCounter::operator+=(const OpCounter& o) {
  pairings += o.pairings;
  exponentiations += o.exponentiations;
  multiplications += o.multiplications;
  hashes += o.hashes;
  divisions += o.divisions;
  subtractions += o.subtractions;
  return *this;
}

OpCounter OpCounter::operator-(const OpCounter& o) const {
  assert(pairings >= o.pairings && exponentiations >= o.exponentiations &&
         multiplications >= o.multiplications && hashes >= o.hashes &&
         divisions >= o.divisions && subtractions >= o.subtractions);
  return OpCounter{pairings - o.pairings,
                   exponentiations - o.exponentiations,
                   multiplications - o.multiplications,
                   hashes - o.hashes,
                   divisions - o.divisions,
                   subtractions - o.subtractions};
}

std::uint64_t OpCounter::total() const {
  return pairings + exponentiations + multiplications + hashes + divisions +
         subtractions;
}

bool G1::operator==(const G1& o) const {
  return tag_ == o.tag_ && inf_ == o.inf_ && x_ == o.x_ && y_ == o.y_;
}

bool GT::operator==(const GT& o) const {
  return tag_ == o.tag_ && a_ == o.a_ && b_ == o.b_;
}

namespace {

// fixed-width big-endian encodings
void write_be(Bytes& out, const mpz_class& v, std::size_t width) {
  std::size_t start = out.size();
  out.resize(out.size() + width, 0);
  std::size_t count = 0;
  mpz_export(out.data() + start, &count, 1, 1, 1, 0, v.get_mpz_t());
  if (count > width) throw DecodeError("value too wide for field");
  if (count > 0 && count < width) {
    std::memmove(out.data() + start + (width - count), out.data() + start,
                 count);
    std::memset(out.data() + start, 0, width - count);
  }
}

mpz_class read_be(BytesView in) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), in.size(), 1, 1, 1, 0, in.data());
  return v;
}

bool all_zero(BytesView in) {
  for (auto b : in)
    if (b != 0) return false;
  return true;
}

// digest half-block for hash-to-group: SHA256([half] || [ctr] || data)
std::array<std::uint8_t, 32> digest_block(std::uint8_t half, std::uint8_t ctr,
                                          BytesView data) {
  Bytes buf;
  buf.reserve(data.size() + 2);
  buf.push_back(half);
  buf.push_back(ctr);
  append(buf, data);
  return sha256(buf);
}

}  // namespace

std::shared_ptr<const Pairing> Pairing::setup(Backend backend,
                                              std::string_view seed,
                                              const SetupOptions& opts) {
  return setup(backend, BytesView(reinterpret_cast<const std::uint8_t*>(seed.data()),
                                  seed.size()),
               opts);
}

std::shared_ptr<const Pairing> Pairing::setup(Backend backend, BytesView seed,
                                              const SetupOptions& opts) {
  auto p = std::shared_ptr<Pairing>(new Pairing());
  p->backend_ = backend;

  // params fingerprint: SHA256(domain || backend || seed)[0..8)
  {
    Bytes tag_in = to_bytes("fogsec.params.v1");
    tag_in.push_back(backend == Backend::curve ? 1 : 2);
    append(tag_in, seed);
    auto d = sha256(tag_in);
    std::uint64_t t = 0;
    for (int i = 0; i < 8; ++i) t = (t << 8) | d[i];
    p->tag_ = t;
  }

  switch (backend) {
    case Backend::curve: {
      p->q_ = mpz_class(typea::kQ);
      p->r_ = typea::order_r();
      p->cofactor_ = typea::cofactor_h();
      p->base_field_bits_ = 512;
      // generator derived from the seed via hash-to-point
      Bytes gen_in = to_bytes("fogsec.generator:");
      append(gen_in, seed);
      G1 g = p->hash_to_g1(gen_in);
      if (p->g1_is_identity(g)) throw ProtocolError("degenerate generator seed");
      p->g_ = g;
      p->z_ = p->pair(g, g);
      if (p->gt_is_identity(p->z_))
        throw ProtocolError("degenerate pairing parameters");
      break;
    }
    case Backend::mock: {
      if (seed.empty())
        throw ProtocolError("mock backend requires a non-empty seed");
      if (!mpz_probab_prime_p(opts.mock_order.get_mpz_t(), 30))
        throw ProtocolError("mock group order must be prime");
      p->r_ = opts.mock_order;
      p->base_field_bits_ =
          static_cast<unsigned>(mpz_sizeinbase(p->r_.get_mpz_t(), 2));
      G1 g;
      g.x_ = 1;
      g.y_ = 0;
      g.inf_ = false;
      g.tag_ = p->tag_;
      p->g_ = g;
      GT z;
      z.a_ = 1;  // log of pair(g, g) = 1*1
      z.b_ = 0;
      z.tag_ = p->tag_;
      p->z_ = z;
      break;
    }
    default:
      throw ProtocolError("unsupported backend id");
  }
  return p;
}

void Pairing::check(const G1& a) const {
  if (a.tag_ != tag_) throw MismatchError("G1 element from different params");
}

void Pairing::check(const GT& a) const {
  if (a.tag_ != tag_) throw MismatchError("GT element from different params");
}

// -- G1 ---------------------------------------------------------------------

G1 Pairing::g1_identity() const {
  G1 e;
  e.tag_ = tag_;
  e.inf_ = true;
  e.x_ = 0;
  e.y_ = 0;
  if (backend_ == Backend::mock) e.inf_ = false;
  return e;
}

bool Pairing::g1_is_identity(const G1& a) const {
  check(a);
  if (backend_ == Backend::curve) return a.inf_;
  return a.x_ == 0;
}

G1 Pairing::g1_mul(const G1& a, const G1& b) const {
  check(a);
  check(b);
  G1 out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    typea::Point r = typea::add({a.x_, a.y_, a.inf_}, {b.x_, b.y_, b.inf_});
    out.x_ = r.x;
    out.y_ = r.y;
    out.inf_ = r.inf;
  } else {
    out.inf_ = false;
    out.x_ = a.x_ + b.x_;
    if (out.x_ >= r_) out.x_ -= r_;
    out.y_ = 0;
  }
  return out;
}

G1 Pairing::g1_exp(const G1& base, const Scalar& e) const {
  check(base);
  G1 out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    typea::Point r = typea::mul({base.x_, base.y_, base.inf_}, e.v_);
    out.x_ = r.x;
    out.y_ = r.y;
    out.inf_ = r.inf;
  } else {
    out.inf_ = false;
    out.x_ = base.x_ * e.v_;
    mpz_mod(out.x_.get_mpz_t(), out.x_.get_mpz_t(), r_.get_mpz_t());
    out.y_ = 0;
  }
  return out;
}

// -- GT ---------------------------------------------------------------------

GT Pairing::gt_identity() const {
  GT e;
  e.tag_ = tag_;
  if (backend_ == Backend::curve) {
    e.a_ = 1;
    e.b_ = 0;
  } else {
    e.a_ = 0;
    e.b_ = 0;
  }
  return e;
}

bool Pairing::gt_is_identity(const GT& a) const {
  check(a);
  if (backend_ == Backend::curve) return a.a_ == 1 && a.b_ == 0;
  return a.a_ == 0;
}

GT Pairing::gt_mul(const GT& a, const GT& b) const {
  check(a);
  check(b);
  GT out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    typea::Fq2 r = typea::Fq2::mul({a.a_, a.b_}, {b.a_, b.b_});
    out.a_ = r.a;
    out.b_ = r.b;
  } else {
    out.a_ = a.a_ + b.a_;
    if (out.a_ >= r_) out.a_ -= r_;
    out.b_ = 0;
  }
  return out;
}

GT Pairing::gt_div(const GT& a, const GT& b) const {
  check(a);
  check(b);
  GT out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    typea::Fq2 r =
        typea::Fq2::mul({a.a_, a.b_}, typea::Fq2::inv({b.a_, b.b_}));
    out.a_ = r.a;
    out.b_ = r.b;
  } else {
    out.a_ = a.a_ - b.a_;
    if (out.a_ < 0) out.a_ += r_;
    out.b_ = 0;
  }
  return out;
}

GT Pairing::gt_exp(const GT& base, const Scalar& e) const {
  check(base);
  GT out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    typea::Fq2 r = typea::Fq2::pow({base.a_, base.b_}, e.v_);
    out.a_ = r.a;
    out.b_ = r.b;
  } else {
    out.a_ = base.a_ * e.v_;
    mpz_mod(out.a_.get_mpz_t(), out.a_.get_mpz_t(), r_.get_mpz_t());
    out.b_ = 0;
  }
  return out;
}

// -- pairing ------------------------------------------------------------------

GT Pairing::pair(const G1& a, const G1& b) const {
  check(a);
  check(b);
  GT out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    typea::Fq2 r =
        typea::pairing({a.x_, a.y_, a.inf_}, {b.x_, b.y_, b.inf_});
    out.a_ = r.a;
    out.b_ = r.b;
  } else {
    out.a_ = a.x_ * b.x_;
    mpz_mod(out.a_.get_mpz_t(), out.a_.get_mpz_t(), r_.get_mpz_t());
    out.b_ = 0;
  }
  return out;
}

// -- hashing ------------------------------------------------------------------

G1 Pairing::hash_to_g1(BytesView data) const {
  G1 out;
  out.tag_ = tag_;
  if (backend_ == Backend::mock) {
    for (unsigned ctr = 0; ctr < 256; ++ctr) {
      auto d = digest_block(0, static_cast<std::uint8_t>(ctr), data);
      mpz_class v = read_be(BytesView(d.data(), d.size()));
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), r_.get_mpz_t());
      if (v != 0) {
        out.inf_ = false;
        out.x_ = v;
        out.y_ = 0;
        return out;
      }
    }
    throw ProtocolError("hash-to-group failed");
  }
  for (unsigned ctr = 0; ctr < 256; ++ctr) {
    auto d0 = digest_block(0, static_cast<std::uint8_t>(ctr), data);
    auto d1 = digest_block(1, static_cast<std::uint8_t>(ctr), data);
    Bytes xb;
    append(xb, BytesView(d0.data(), d0.size()));
    append(xb, BytesView(d1.data(), d1.size()));
    mpz_class x = read_be(xb);
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), q_.get_mpz_t());
    mpz_class y;
    if (!typea::solve_y(x, y)) continue;
    typea::Point p = typea::mul({x, y, false}, cofactor_);
    if (p.inf) continue;
    out.x_ = p.x;
    out.y_ = p.y;
    out.inf_ = false;
    return out;
  }
  throw ProtocolError("hash-to-group failed");
}

G1 Pairing::hash_gt_to_g1(const GT& y) const {
  return hash_to_g1(serialize(y));
}

// -- scalars ------------------------------------------------------------------

Scalar Pairing::scalar(std::uint64_t v) const { return scalar(mpz_class(static_cast<unsigned long>(v))); }

Scalar Pairing::scalar(const mpz_class& v) const {
  mpz_class t;
  mpz_mod(t.get_mpz_t(), v.get_mpz_t(), r_.get_mpz_t());
  return Scalar(t);
}

Scalar Pairing::sc_add(const Scalar& a, const Scalar& b) const {
  mpz_class t = a.v_ + b.v_;
  if (t >= r_) t -= r_;
  return Scalar(t);
}

Scalar Pairing::sc_sub(const Scalar& a, const Scalar& b) const {
  mpz_class t = a.v_ - b.v_;
  if (t < 0) t += r_;
  return Scalar(t);
}

Scalar Pairing::sc_mul(const Scalar& a, const Scalar& b) const {
  mpz_class t = a.v_ * b.v_;
  mpz_mod(t.get_mpz_t(), t.get_mpz_t(), r_.get_mpz_t());
  return Scalar(t);
}

Scalar Pairing::sc_neg(const Scalar& a) const {
  if (a.v_ == 0) return a;
  return Scalar(mpz_class(r_ - a.v_));
}

Scalar Pairing::sc_inv(const Scalar& a) const {
  mpz_class t;
  if (mpz_invert(t.get_mpz_t(), a.v_.get_mpz_t(), r_.get_mpz_t()) == 0)
    throw ProtocolError("scalar not invertible");
  return Scalar(t);
}

Scalar Pairing::random_scalar(Rng& rng) const { return Scalar(rng.below(r_)); }

Scalar Pairing::random_nonzero_scalar(Rng& rng) const {
  return Scalar(rng.below_nonzero(r_));
}

GT Pairing::random_gt(Rng& rng) const {
  return gt_exp(z_, Scalar(rng.below(r_)));
}

// -- canonical encoding --------------------------------------------------------

Bytes Pairing::serialize(const G1& a) const {
  check(a);
  Bytes out;
  out.reserve(kElementBytes);
  if (backend_ == Backend::curve) {
    if (a.inf_) {
      out.assign(kElementBytes, 0);
      return out;
    }
    write_be(out, a.x_, 64);
    write_be(out, a.y_, 64);
  } else {
    write_be(out, a.x_, kElementBytes);
  }
  return out;
}

Bytes Pairing::serialize(const GT& a) const {
  check(a);
  Bytes out;
  out.reserve(kElementBytes);
  if (backend_ == Backend::curve) {
    write_be(out, a.a_, 64);
    write_be(out, a.b_, 64);
  } else {
    write_be(out, a.a_, kElementBytes);
  }
  return out;
}

Bytes Pairing::serialize(const Scalar& s) const {
  Bytes out;
  write_be(out, s.v_, kScalarBytes);
  return out;
}

G1 Pairing::parse_g1(BytesView in) const {
  if (in.size() != kElementBytes)
    throw DecodeError("G1 element must be 128 bytes");
  G1 out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    if (all_zero(in)) {
      out.inf_ = true;
      return out;
    }
    out.x_ = read_be(in.subspan(0, 64));
    out.y_ = read_be(in.subspan(64, 64));
    out.inf_ = false;
    if (out.x_ >= q_ || out.y_ >= q_)
      throw DecodeError("G1 coordinate out of range");
    if (!typea::on_curve({out.x_, out.y_, false}))
      throw DecodeError("point not on curve");
    if (!typea::mul({out.x_, out.y_, false}, r_).inf)
      throw DecodeError("point outside the prime-order subgroup");
  } else {
    out.x_ = read_be(in);
    out.y_ = 0;
    out.inf_ = false;
    if (out.x_ >= r_) throw DecodeError("mock element out of range");
  }
  return out;
}

GT Pairing::parse_gt(BytesView in) const {
  if (in.size() != kElementBytes)
    throw DecodeError("GT element must be 128 bytes");
  GT out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    out.a_ = read_be(in.subspan(0, 64));
    out.b_ = read_be(in.subspan(64, 64));
    if (out.a_ >= q_ || out.b_ >= q_)
      throw DecodeError("GT coordinate out of range");
    if (!typea::Fq2::pow({out.a_, out.b_}, r_).is_one())
      throw DecodeError("element outside the prime-order GT subgroup");
  } else {
    out.a_ = read_be(in);
    out.b_ = 0;
    if (out.a_ >= r_) throw DecodeError("mock element out of range");
  }
  return out;
}

Scalar Pairing::parse_scalar(BytesView in) const {
  if (in.size() != kScalarBytes) throw DecodeError("scalar must be 32 bytes");
  mpz_class v = read_be(in);
  if (v >= r_) throw DecodeError("scalar out of range");
  return Scalar(v);
}

Bytes Pairing::serialize_compressed(const G1& a, std::size_t width) const {
  check(a);
  if (width < 65) throw DecodeError("compressed width must be >= 65");
  Bytes out(width, 0);
  if (backend_ == Backend::curve) {
    if (a.inf_) return out;
    out[width - 65] = mpz_odd_p(a.y_.get_mpz_t()) ? 0x03 : 0x02;
    Bytes x;
    write_be(x, a.x_, 64);
    std::memcpy(out.data() + width - 64, x.data(), 64);
  } else {
    if (a.x_ == 0) return out;
    out[width - 65] = 0x02;
    Bytes x;
    write_be(x, a.x_, 64);
    std::memcpy(out.data() + width - 64, x.data(), 64);
  }
  return out;
}

G1 Pairing::parse_compressed(BytesView in) const {
  if (in.size() < 65) throw DecodeError("compressed element too short");
  if (!all_zero(in.subspan(0, in.size() - 65)))
    throw DecodeError("nonzero padding in compressed element");
  if (all_zero(in)) return g1_identity();
  std::uint8_t parity = in[in.size() - 65];
  BytesView xb = in.subspan(in.size() - 64, 64);
  G1 out;
  out.tag_ = tag_;
  if (backend_ == Backend::curve) {
    if (parity != 0x02 && parity != 0x03)
      throw DecodeError("bad compression tag");
    mpz_class x = read_be(xb);
    if (x >= q_) throw DecodeError("G1 coordinate out of range");
    mpz_class y;
    if (!typea::solve_y(x, y)) throw DecodeError("x not on curve");
    if ((parity == 0x03) != (mpz_odd_p(y.get_mpz_t()) != 0))
      y = typea::Fq::neg(y);
    out.x_ = x;
    out.y_ = y;
    out.inf_ = false;
    if (!typea::mul({out.x_, out.y_, false}, r_).inf)
      throw DecodeError("point outside the prime-order subgroup");
  } else {
    if (parity != 0x02) throw DecodeError("bad compression tag");
    out.x_ = read_be(xb);
    out.y_ = 0;
    out.inf_ = false;
    if (out.x_ >= r_) throw DecodeError("mock element out of range");
  }
  return out;
}

mpz_class Pairing::mock_log_g1(const G1& a) const {
  check(a);
  if (backend_ != Backend::mock)
    throw ProtocolError("discrete-log oracle only exists on the mock backend");
  return a.x_;
}

mpz_class Pairing::mock_log_gt(const GT& a) const {
  check(a);
  if (backend_ != Backend::mock)
    throw ProtocolError("discrete-log oracle only exists on the mock backend");
  return a.a_;
}

}  // namespace fogsec
