// Internal arithmetic for the type-a supersingular curve y^2 = x^3 + x over
// F_q, q = 3 mod 4. Embedding degree 2; F_q2 = F_q[i]/(i^2 + 1). Not part of
// the installed interface.
#pragma once

#include <gmpxx.h>

namespace fogsec::typea {

// Standard 512-bit parameter set: r = 2^159 + 2^107 + 1, q + 1 = r * h.
extern const char* const kQ;

struct Fq {
  static const mpz_class& q();
  static mpz_class add(const mpz_class& a, const mpz_class& b);
  static mpz_class sub(const mpz_class& a, const mpz_class& b);
  static mpz_class mul(const mpz_class& a, const mpz_class& b);
  static mpz_class neg(const mpz_class& a);
  static mpz_class inv(const mpz_class& a);
  // sqrt via t^((q+1)/4); caller must verify the result squares back
  static mpz_class sqrt_candidate(const mpz_class& t);
};

struct Fq2 {
  mpz_class a, b;  // a + b*i

  static Fq2 one() { return {1, 0}; }
  bool is_one() const { return a == 1 && b == 0; }
  bool operator==(const Fq2&) const = default;

  static Fq2 mul(const Fq2& x, const Fq2& y);
  static Fq2 sqr(const Fq2& x);
  static Fq2 inv(const Fq2& x);
  static Fq2 conj(const Fq2& x) { return {x.a, Fq::neg(x.b)}; }
  static Fq2 pow(const Fq2& base, const mpz_class& e);
};

struct Point {
  mpz_class x, y;
  bool inf = true;

  bool operator==(const Point&) const = default;
};

Point add(const Point& p, const Point& q);
Point dbl(const Point& p);
// Jacobian ladder; exponent may exceed the subgroup order (cofactor clearing)
Point mul(const Point& p, const mpz_class& k);
bool on_curve(const Point& p);

// Tate pairing with the distortion map phi(x, y) = (-x, iy) applied to the
// second argument. Both inputs come from the r-order subgroup of E(F_q).
Fq2 pairing(const Point& p, const Point& q);

const mpz_class& order_r();
const mpz_class& cofactor_h();

// y with y^2 = x^3 + x if one exists (the even representative); false if
// x^3 + x is a non-residue.
bool solve_y(const mpz_class& x, mpz_class& y_out);

}  // namespace fogsec::typea
