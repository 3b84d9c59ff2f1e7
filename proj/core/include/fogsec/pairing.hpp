#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include <gmpxx.h>

#include "fogsec/bytes.hpp"
#include "fogsec/rng.hpp"

namespace fogsec {

/// Symmetric prime-order pairing ê : G1 × G1 → GT with two interchangeable
/// backends:
///
///  * `curve` — a type-a supersingular curve y² = x³ + x over a 512-bit prime
///    field, embedding degree 2, prime subgroup order r = 2^159 + 2^107 + 1.
///    G1 is the r-order subgroup of E(F_q); GT the r-order subgroup of F_q².
///    The pairing is the Tate pairing composed with the distortion map
///    (x, y) ↦ (−x, iy).
///
///  * `mock` — an exponent-arithmetic oracle. Elements are stored as their
///    discrete logarithms modulo a small prime; pair(g^a, g^b) = Z^{ab} in a
///    separate GT log space. Every algebraic identity can be checked against
///    it by integer arithmetic alone.
///
/// Canonical encodings are 128 bytes per group element (curve: two 64-byte
/// big-endian coordinates; mock: zero-padded log) and 32 bytes per scalar, so
/// byte ledgers are identical across backends.

enum class Backend { curve, mock };

/// Tally of the countable operations per measurement session.
struct OpCounter {
  std::uint64_t pairings = 0;
  std::uint64_t exponentiations = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t hashes = 0;
  std::uint64_t divisions = 0;
  std::uint64_t subtractions = 0;

  OpCounter& operator+=(const OpCounter& o);
  /// Per-category difference; requires *this >= o in every category.
  OpCounter operator-(const OpCounter& o) const;
  bool operator==(const OpCounter&) const = default;
  std::uint64_t total() const;
};

class Pairing;

/// G1 element. Value type; bound to the Pairing that created it.
class G1 {
 public:
  G1() = default;
  bool operator==(const G1& o) const;
  bool operator!=(const G1& o) const { return !(*this == o); }

 private:
  friend class Pairing;
  mpz_class x_, y_;    // curve: affine coordinates; mock: log in x_
  bool inf_ = true;    // curve only; mock identity is log 0
  std::uint64_t tag_ = 0;
};

/// GT element. Value type; bound to the Pairing that created it.
class GT {
 public:
  GT() = default;
  bool operator==(const GT& o) const;
  bool operator!=(const GT& o) const { return !(*this == o); }

 private:
  friend class Pairing;
  mpz_class a_, b_;    // curve: a + b·i in F_q²; mock: log in a_
  std::uint64_t tag_ = 0;
};

/// Exponent modulo the group order q. Reduced representative in [0, q).
class Scalar {
 public:
  Scalar() = default;
  const mpz_class& value() const { return v_; }
  bool operator==(const Scalar&) const = default;

 private:
  friend class Pairing;
  explicit Scalar(mpz_class v) : v_(std::move(v)) {}
  mpz_class v_;
};

struct SetupOptions {
  /// Group order of the mock oracle. Must be prime.
  mpz_class mock_order = mpz_class((1L << 31) - 1);
};

/// Immutable group instantiation. Shareable across threads and entities; all
/// algebra here is uncounted (see Ctx for the counting surface).
class Pairing {
 public:
  static std::shared_ptr<const Pairing> setup(Backend backend, BytesView seed,
                                              const SetupOptions& opts = {});
  static std::shared_ptr<const Pairing> setup(Backend backend, std::string_view seed,
                                              const SetupOptions& opts = {});

  Backend backend() const { return backend_; }
  const mpz_class& order() const { return r_; }
  unsigned base_field_bits() const { return base_field_bits_; }
  const G1& generator() const { return g_; }
  /// Published ê(g, g); fixed at setup.
  const GT& z() const { return z_; }
  /// Group fingerprint used for cross-instantiation checks.
  std::uint64_t tag() const { return tag_; }

  static constexpr std::size_t kElementBytes = 128;
  static constexpr std::size_t kScalarBytes = 32;

  // -- G1 -----------------------------------------------------------------
  G1 g1_identity() const;
  G1 g1_mul(const G1& a, const G1& b) const;
  G1 g1_exp(const G1& base, const Scalar& e) const;
  bool g1_is_identity(const G1& a) const;

  // -- GT -----------------------------------------------------------------
  GT gt_identity() const;
  GT gt_mul(const GT& a, const GT& b) const;
  GT gt_div(const GT& a, const GT& b) const;
  GT gt_exp(const GT& base, const Scalar& e) const;
  bool gt_is_identity(const GT& a) const;

  // -- pairing and hashing --------------------------------------------------
  GT pair(const G1& a, const G1& b) const;
  /// H1 : {0,1}* → G1. SHA-256 based, counter-appended until a point lands.
  G1 hash_to_g1(BytesView data) const;
  /// H2 : GT → G1; hashes the canonical encoding of y.
  G1 hash_gt_to_g1(const GT& y) const;

  // -- scalars ----------------------------------------------------------------
  Scalar scalar(std::uint64_t v) const;
  Scalar scalar(const mpz_class& v) const;
  Scalar sc_add(const Scalar& a, const Scalar& b) const;
  Scalar sc_sub(const Scalar& a, const Scalar& b) const;
  Scalar sc_mul(const Scalar& a, const Scalar& b) const;
  Scalar sc_neg(const Scalar& a) const;
  Scalar sc_inv(const Scalar& a) const;

  // -- randomness -----------------------------------------------------------
  Scalar random_scalar(Rng& rng) const;
  Scalar random_nonzero_scalar(Rng& rng) const;
  /// Uniform element of the r-order subgroup of GT (Z^t for uniform t).
  GT random_gt(Rng& rng) const;

  // -- canonical encoding -----------------------------------------------------
  Bytes serialize(const G1& a) const;
  Bytes serialize(const GT& a) const;
  Bytes serialize(const Scalar& s) const;
  G1 parse_g1(BytesView in) const;
  GT parse_gt(BytesView in) const;
  Scalar parse_scalar(BytesView in) const;

  /// Compressed point form used by signatures: parity byte + x coordinate,
  /// left-padded with zeros to `width` (width >= 65).
  Bytes serialize_compressed(const G1& a, std::size_t width) const;
  G1 parse_compressed(BytesView in) const;

  /// Discrete log of a mock element; throws on the curve backend. Test oracle.
  mpz_class mock_log_g1(const G1& a) const;
  mpz_class mock_log_gt(const GT& a) const;

 private:
  Pairing() = default;
  void check(const G1& a) const;
  void check(const GT& a) const;

  Backend backend_ = Backend::mock;
  mpz_class q_;  // curve base field prime (unused by mock)
  mpz_class r_;  // group order
  mpz_class cofactor_;
  unsigned base_field_bits_ = 0;
  G1 g_;
  GT z_;
  std::uint64_t tag_ = 0;
};

/// Counting façade over a Pairing: one per measurement session / entity.
/// Counter categories follow the convention: exponentiation and group
/// multiplication in G1 or GT count as T_E / T_M; GT division and modular
/// inversion as T_D; H1/H2 as T_H; protocol-level scalar subtraction as T_S.
/// Scalar addition/multiplication and randomness generation are uncounted.
class Ctx {
 public:
  explicit Ctx(std::shared_ptr<const Pairing> p) : p_(std::move(p)) {}

  const Pairing& group() const { return *p_; }
  const std::shared_ptr<const Pairing>& shared_group() const { return p_; }
  OpCounter& counter() { return counter_; }
  const OpCounter& counter() const { return counter_; }
  void reset_counter() { counter_ = OpCounter{}; }

  const G1& g() const { return p_->generator(); }
  const GT& z() const { return p_->z(); }
  const mpz_class& order() const { return p_->order(); }

  GT pair(const G1& a, const G1& b) {
    ++counter_.pairings;
    return p_->pair(a, b);
  }
  G1 g1_exp(const G1& base, const Scalar& e) {
    ++counter_.exponentiations;
    return p_->g1_exp(base, e);
  }
  GT gt_exp(const GT& base, const Scalar& e) {
    ++counter_.exponentiations;
    return p_->gt_exp(base, e);
  }
  G1 g1_mul(const G1& a, const G1& b) {
    ++counter_.multiplications;
    return p_->g1_mul(a, b);
  }
  GT gt_mul(const GT& a, const GT& b) {
    ++counter_.multiplications;
    return p_->gt_mul(a, b);
  }
  GT gt_div(const GT& a, const GT& b) {
    ++counter_.divisions;
    return p_->gt_div(a, b);
  }
  G1 hash_to_g1(BytesView data) {
    ++counter_.hashes;
    return p_->hash_to_g1(data);
  }
  G1 hash_gt_to_g1(const GT& y) {
    ++counter_.hashes;
    return p_->hash_gt_to_g1(y);
  }
  Scalar sc_sub(const Scalar& a, const Scalar& b) {
    ++counter_.subtractions;
    return p_->sc_sub(a, b);
  }
  Scalar sc_inv(const Scalar& a) {
    ++counter_.divisions;
    return p_->sc_inv(a);
  }

 private:
  std::shared_ptr<const Pairing> p_;
  OpCounter counter_;
};

}  // namespace fogsec
