#include "typea.hpp"

#include <cassert>

namespace fogsec::typea {

const char* const kQ =
    "8780710799663312522437781984754049815806883199414208211028653399266475630"
    "8802229570786251794226622214231558587695823174592777133673174813249251299"
    "98224791";
namespace {
const char* const kR = "730750818665451621361119245571504901405976559617";
const char* const kH =
    "1201601226489114607938882136674053420480295440125131182291961513104720728"
    "9359704531102844802183906537786776";
}  // namespace

namespace {

struct Constants {
  mpz_class q, r, h, sqrt_exp;
  Constants() : q(kQ), r(kR), h(kH) {
    sqrt_exp = (q + 1) / 4;
    assert(q % 4 == 3);
    assert(r * h == q + 1);
  }
};

const Constants& C() {
  static const Constants c;
  return c;
}

}  // namespace

const mpz_class& Fq::q() { return C().q; }
const mpz_class& order_r() { return C().r; }
const mpz_class& cofactor_h() { return C().h; }

mpz_class Fq::add(const mpz_class& a, const mpz_class& b) {
  mpz_class t = a + b;
  if (t >= C().q) t -= C().q;
  return t;
}

mpz_class Fq::sub(const mpz_class& a, const mpz_class& b) {
  mpz_class t = a - b;
  if (t < 0) t += C().q;
  return t;
}

mpz_class Fq::mul(const mpz_class& a, const mpz_class& b) {
  mpz_class t = a * b;
  mpz_mod(t.get_mpz_t(), t.get_mpz_t(), C().q.get_mpz_t());
  return t;
}

mpz_class Fq::neg(const mpz_class& a) {
  if (a == 0) return 0;
  return C().q - a;
}

mpz_class Fq::inv(const mpz_class& a) {
  mpz_class t;
  mpz_invert(t.get_mpz_t(), a.get_mpz_t(), C().q.get_mpz_t());
  return t;
}

mpz_class Fq::sqrt_candidate(const mpz_class& t) {
  mpz_class y;
  mpz_powm(y.get_mpz_t(), t.get_mpz_t(), C().sqrt_exp.get_mpz_t(),
           C().q.get_mpz_t());
  return y;
}

Fq2 Fq2::mul(const Fq2& x, const Fq2& y) {
  // Karatsuba over i^2 = -1
  mpz_class t0 = Fq::mul(x.a, y.a);
  mpz_class t1 = Fq::mul(x.b, y.b);
  mpz_class t2 = Fq::mul(Fq::add(x.a, x.b), Fq::add(y.a, y.b));
  return {Fq::sub(t0, t1), Fq::sub(t2, Fq::add(t0, t1))};
}

Fq2 Fq2::sqr(const Fq2& x) {
  // (a+bi)^2 = (a+b)(a-b) + 2ab i
  mpz_class re = Fq::mul(Fq::add(x.a, x.b), Fq::sub(x.a, x.b));
  mpz_class im = Fq::mul(x.a, x.b);
  return {re, Fq::add(im, im)};
}

Fq2 Fq2::inv(const Fq2& x) {
  mpz_class norm = Fq::add(Fq::mul(x.a, x.a), Fq::mul(x.b, x.b));
  mpz_class ni = Fq::inv(norm);
  return {Fq::mul(x.a, ni), Fq::mul(Fq::neg(x.b), ni)};
}

Fq2 Fq2::pow(const Fq2& base, const mpz_class& e) {
  if (e == 0) return one();
  Fq2 acc = one();
  for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0;
       --i) {
    acc = sqr(acc);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = mul(acc, base);
  }
  return acc;
}

Point dbl(const Point& p) {
  if (p.inf) return p;
  if (p.y == 0) return Point{};  // 2-torsion, outside the r-subgroup
  mpz_class lam = Fq::mul(Fq::add(Fq::mul(3, Fq::mul(p.x, p.x)), 1),
                          Fq::inv(Fq::add(p.y, p.y)));
  mpz_class x3 = Fq::sub(Fq::mul(lam, lam), Fq::add(p.x, p.x));
  mpz_class y3 = Fq::sub(Fq::mul(lam, Fq::sub(p.x, x3)), p.y);
  return {x3, y3, false};
}

Point add(const Point& p, const Point& q) {
  if (p.inf) return q;
  if (q.inf) return p;
  if (p.x == q.x) {
    if (Fq::add(p.y, q.y) == 0) return Point{};
    return dbl(p);
  }
  mpz_class lam = Fq::mul(Fq::sub(q.y, p.y), Fq::inv(Fq::sub(q.x, p.x)));
  mpz_class x3 = Fq::sub(Fq::sub(Fq::mul(lam, lam), p.x), q.x);
  mpz_class y3 = Fq::sub(Fq::mul(lam, Fq::sub(p.x, x3)), p.y);
  return {x3, y3, false};
}

namespace {

// Jacobian coordinates (X, Y, Z): x = X/Z^2, y = Y/Z^3. Avoids the per-step
// field inversion of the affine ladder.
struct Jac {
  mpz_class X, Y, Z;  // Z == 0 means infinity
};

Jac jac_from(const Point& p) {
  if (p.inf) return {1, 1, 0};
  return {p.x, p.y, 1};
}

Point jac_to_affine(const Jac& j) {
  if (j.Z == 0) return Point{};
  mpz_class zi = Fq::inv(j.Z);
  mpz_class zi2 = Fq::mul(zi, zi);
  return {Fq::mul(j.X, zi2), Fq::mul(j.Y, Fq::mul(zi2, zi)), false};
}

Jac jac_dbl(const Jac& p) {
  if (p.Z == 0 || p.Y == 0) return {1, 1, 0};
  // curve a-coefficient is 1: M = 3X^2 + Z^4
  mpz_class XX = Fq::mul(p.X, p.X);
  mpz_class YY = Fq::mul(p.Y, p.Y);
  mpz_class YYYY = Fq::mul(YY, YY);
  mpz_class ZZ = Fq::mul(p.Z, p.Z);
  mpz_class S = Fq::mul(4, Fq::mul(p.X, YY));
  mpz_class M = Fq::add(Fq::mul(3, XX), Fq::mul(ZZ, ZZ));
  mpz_class X3 = Fq::sub(Fq::mul(M, M), Fq::add(S, S));
  mpz_class Y3 = Fq::sub(Fq::mul(M, Fq::sub(S, X3)), Fq::mul(8, YYYY));
  mpz_class Z3 = Fq::mul(Fq::add(p.Y, p.Y), p.Z);
  return {X3, Y3, Z3};
}

Jac jac_add_affine(const Jac& p, const Point& q) {
  // mixed addition, q affine
  if (q.inf) return p;
  if (p.Z == 0) return jac_from(q);
  mpz_class ZZ = Fq::mul(p.Z, p.Z);
  mpz_class U2 = Fq::mul(q.x, ZZ);
  mpz_class S2 = Fq::mul(q.y, Fq::mul(ZZ, p.Z));
  mpz_class H = Fq::sub(U2, p.X);
  mpz_class Rr = Fq::sub(S2, p.Y);
  if (H == 0) {
    if (Rr == 0) return jac_dbl(p);
    return {1, 1, 0};
  }
  mpz_class HH = Fq::mul(H, H);
  mpz_class HHH = Fq::mul(HH, H);
  mpz_class V = Fq::mul(p.X, HH);
  mpz_class X3 = Fq::sub(Fq::sub(Fq::mul(Rr, Rr), HHH), Fq::add(V, V));
  mpz_class Y3 = Fq::sub(Fq::mul(Rr, Fq::sub(V, X3)), Fq::mul(p.Y, HHH));
  mpz_class Z3 = Fq::mul(p.Z, H);
  return {X3, Y3, Z3};
}

}  // namespace

Point mul(const Point& p, const mpz_class& k) {
  if (p.inf || k == 0) return Point{};
  Jac acc{1, 1, 0};
  for (long i = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; i >= 0;
       --i) {
    acc = jac_dbl(acc);
    if (mpz_tstbit(k.get_mpz_t(), i)) acc = jac_add_affine(acc, p);
  }
  return jac_to_affine(acc);
}

bool on_curve(const Point& p) {
  if (p.inf) return true;
  mpz_class lhs = Fq::mul(p.y, p.y);
  mpz_class rhs = Fq::add(Fq::mul(p.x, Fq::mul(p.x, p.x)), p.x);
  return lhs == rhs;
}

bool solve_y(const mpz_class& x, mpz_class& y_out) {
  mpz_class t = Fq::add(Fq::mul(x, Fq::mul(x, x)), x);
  mpz_class y = Fq::sqrt_candidate(t);
  if (Fq::mul(y, y) != t) return false;
  // canonical representative: the even one
  if (mpz_odd_p(y.get_mpz_t())) y = Fq::neg(y);
  y_out = y;
  return true;
}

Fq2 pairing(const Point& p, const Point& q) {
  if (p.inf || q.inf) return Fq2::one();
  // Miller loop for f_{r,P} evaluated at phi(Q) = (-xQ, i*yQ). Vertical-line
  // factors live in F_q and die in the final exponentiation (q^2-1)/r =
  // (q-1)h, so only line numerators are accumulated.
  const mpz_class& r = C().r;
  Fq2 f = Fq2::one();
  Point t = p;
  for (long i = static_cast<long>(mpz_sizeinbase(r.get_mpz_t(), 2)) - 2; i >= 0;
       --i) {
    f = Fq2::sqr(f);
    if (!t.inf) {
      // tangent at T: l(phi(Q)) = lam*(xQ + xT) - yT + yQ*i
      mpz_class lam = Fq::mul(Fq::add(Fq::mul(3, Fq::mul(t.x, t.x)), 1),
                              Fq::inv(Fq::add(t.y, t.y)));
      Fq2 l{Fq::sub(Fq::mul(lam, Fq::add(q.x, t.x)), t.y), q.y};
      f = Fq2::mul(f, l);
      t = dbl(t);
    }
    if (mpz_tstbit(r.get_mpz_t(), i) && !t.inf) {
      if (t.x == p.x) {
        // T == -P at the last addition: vertical line, eliminated
        t = add(t, p);
      } else {
        mpz_class lam = Fq::mul(Fq::sub(p.y, t.y), Fq::inv(Fq::sub(p.x, t.x)));
        Fq2 l{Fq::sub(Fq::mul(lam, Fq::add(q.x, t.x)), t.y), q.y};
        f = Fq2::mul(f, l);
        t = add(t, p);
      }
    }
  }
  // final exponentiation: f^(q-1) = conj(f)/f, then ^h
  Fq2 u = Fq2::mul(Fq2::conj(f), Fq2::inv(f));
  return Fq2::pow(u, C().h);
}

}  // namespace fogsec::typea
