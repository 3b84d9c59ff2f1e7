#include "doctest.h"

#include "fogsec/errors.hpp"
#include "fogsec/homopre.hpp"
#include "util.hpp"

using namespace fogsec;
namespace ho = fogsec::homopre;

TEST_CASE("keygen satisfies pk1 = ê(pk2, g) at a cost of 2T_E + T_P") {
  for (auto b : testutil::both_backends()) {
    Ctx ctx(testutil::group(b));
    Rng rng(51);
    ctx.reset_counter();
    auto kp = ho::keygen(ctx, rng);
    CHECK(ctx.counter() == OpCounter{1, 2, 0, 0, 0, 0});
    CHECK(kp.pk1 == ctx.group().pair(kp.pk2, ctx.g()));
  }

  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  Rng rng(52);
  auto kp = ho::keygen(ctx, rng);
  CHECK(p->mock_log_g1(kp.pk2) == kp.sk.value());
  CHECK(p->mock_log_gt(kp.pk1) == kp.sk.value());
}

TEST_CASE("both ciphertext levels decrypt back to the message") {
  for (auto b : testutil::both_backends()) {
    auto p = testutil::group(b);
    Ctx ctx(p);
    Rng rng(53);
    auto kp = ho::keygen(ctx, rng);
    auto pk = ho::public_part(kp);
    GT m = p->random_gt(rng);

    for (auto level : {ho::Level::second, ho::Level::first}) {
      ctx.reset_counter();
      auto ct = ho::encrypt(ctx, rng, m, pk, level);
      CHECK(ctx.counter() == OpCounter{0, 2, 1, 0, 0, 0});
      CHECK(ho::serialize(*p, ct).size() == 256);
      CHECK(ho::decrypt(ctx, ct, kp.sk) == m);
    }

    // identity message: c2 carries only the blinding
    auto ct = ho::encrypt(ctx, rng, p->gt_identity(), pk, ho::Level::second);
    CHECK(ct.c2 == p->gt_exp(p->pair(std::get<G1>(ct.c1), p->generator()),
                             p->sc_inv(kp.sk)));
    CHECK(ho::decrypt(ctx, ct, kp.sk) == p->gt_identity());

    // second-level decryption uses exactly one pairing
    ctx.reset_counter();
    ho::decrypt(ctx, ct, kp.sk);
    CHECK(ctx.counter().pairings == 1);

    // first-level decryption needs none
    auto ct1 = ho::encrypt(ctx, rng, m, pk, ho::Level::first);
    ctx.reset_counter();
    ho::decrypt(ctx, ct1, kp.sk);
    CHECK(ctx.counter().pairings == 0);

    // wrong key misdecrypts
    auto other = ho::keygen(ctx, rng);
    CHECK(ho::decrypt(ctx, ho::encrypt(ctx, rng, m, pk, ho::Level::second),
                      other.sk) != m);
  }
}

TEST_CASE("eval_mul multiplies plaintexts under fresh randomness") {
  for (auto b : testutil::both_backends()) {
    auto p = testutil::group(b);
    Ctx ctx(p);
    Rng rng(54);
    auto kp = ho::keygen(ctx, rng);
    auto pk = ho::public_part(kp);

    const int reps = b == Backend::mock ? 200 : 25;
    for (auto level : {ho::Level::second, ho::Level::first}) {
      for (int i = 0; i < reps; ++i) {
        GT m1 = p->random_gt(rng);
        GT m2 = p->random_gt(rng);
        auto c1 = ho::encrypt(ctx, rng, m1, pk, level);
        auto c2 = ho::encrypt(ctx, rng, m2, pk, level);
        auto prod = ho::eval_mul(ctx, rng, c1, c2, pk);
        REQUIRE(ho::decrypt(ctx, prod, kp.sk) == p->gt_mul(m1, m2));
      }
    }

    // cost shape 4T_M + 2T_E
    GT m = p->random_gt(rng);
    auto ca = ho::encrypt(ctx, rng, m, pk, ho::Level::second);
    auto cb = ho::encrypt(ctx, rng, m, pk, ho::Level::second);
    ctx.reset_counter();
    ho::eval_mul(ctx, rng, ca, cb, pk);
    CHECK(ctx.counter() == OpCounter{0, 2, 4, 0, 0, 0});

    // multiplying by an encryption of the identity preserves m
    auto cid = ho::encrypt(ctx, rng, p->gt_identity(), pk, ho::Level::second);
    CHECK(ho::decrypt(ctx, ho::eval_mul(ctx, rng, ca, cid, pk), kp.sk) == m);

    // rerandomization: equal plaintexts, unequal ciphertexts
    auto e1 = ho::eval_mul(ctx, rng, ca, cb, pk);
    auto e2 = ho::eval_mul(ctx, rng, ca, cb, pk);
    CHECK(e1.c2 != e2.c2);
    CHECK(ho::decrypt(ctx, e1, kp.sk) == ho::decrypt(ctx, e2, kp.sk));
  }
}

TEST_CASE("mock oracle: Z^3 times Z^5 evaluates to Z^8") {
  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  Rng rng(55);
  auto kp = ho::keygen(ctx, rng);
  auto pk = ho::public_part(kp);
  GT m1 = p->gt_exp(p->z(), p->scalar(3));
  GT m2 = p->gt_exp(p->z(), p->scalar(5));
  auto prod = ho::eval_mul(ctx, rng, ho::encrypt(ctx, rng, m1, pk, ho::Level::second),
                           ho::encrypt(ctx, rng, m2, pk, ho::Level::second), pk);
  CHECK(p->mock_log_gt(ho::decrypt(ctx, prod, kp.sk)) == 8);
}

TEST_CASE("eval_mul rejects mismatched operands") {
  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  Rng rng(56);
  auto kp1 = ho::keygen(ctx, rng);
  auto kp2 = ho::keygen(ctx, rng);
  GT m = p->random_gt(rng);
  auto second = ho::encrypt(ctx, rng, m, ho::public_part(kp1), ho::Level::second);
  auto first = ho::encrypt(ctx, rng, m, ho::public_part(kp1), ho::Level::first);
  CHECK_THROWS_AS(ho::eval_mul(ctx, rng, second, first, ho::public_part(kp1)),
                  MismatchError);
  auto foreign = ho::encrypt(ctx, rng, m, ho::public_part(kp2), ho::Level::second);
  CHECK_THROWS_AS(ho::eval_mul(ctx, rng, second, foreign, ho::public_part(kp1)),
                  MismatchError);
}

TEST_CASE("re-encryption keys are unilateral and publicly checkable") {
  for (auto b : testutil::both_backends()) {
    auto p = testutil::group(b);
    Ctx ctx(p);
    Rng rng(57);
    auto kp1 = ho::keygen(ctx, rng);
    auto kp2 = ho::keygen(ctx, rng);

    ctx.reset_counter();
    auto rk = ho::rekeygen(ctx, kp1.sk, kp2.pk2);
    // the 1/sk inversion maps to T_D
    CHECK(ctx.counter() == OpCounter{0, 1, 0, 0, 1, 0});
    CHECK(ho::rekey_well_formed(*p, rk, kp1.pk2, kp2.pk2));
    CHECK_FALSE(ho::rekey_well_formed(*p, rk, kp2.pk2, kp1.pk2));

    // self-delegation collapses to the generator
    auto self_rk = ho::rekeygen(ctx, kp1.sk, kp1.pk2);
    CHECK(self_rk.rk == p->generator());
  }

  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  auto mk = [&](std::uint64_t v) {
    return ho::KeyPair{p->scalar(v), p->gt_exp(p->z(), p->scalar(v)),
                       p->g1_exp(p->generator(), p->scalar(v))};
  };
  auto a = mk(4), c = mk(12);
  auto rk = ho::rekeygen(ctx, a.sk, c.pk2);
  CHECK(p->mock_log_g1(rk.rk) == 3);  // 12 / 4
}

TEST_CASE("key switching moves a ciphertext to the target key") {
  for (auto b : testutil::both_backends()) {
    auto p = testutil::group(b);
    Ctx ctx(p);
    Rng rng(58);
    auto kp1 = ho::keygen(ctx, rng);
    auto kp2 = ho::keygen(ctx, rng);
    auto rk = ho::rekeygen(ctx, kp1.sk, kp2.pk2);
    GT m = p->random_gt(rng);
    auto ct = ho::encrypt(ctx, rng, m, ho::public_part(kp1), ho::Level::second);

    ctx.reset_counter();
    auto moved = ho::reencrypt(ctx, ct, rk);
    CHECK(ctx.counter() == OpCounter{1, 0, 0, 0, 0, 0});
    CHECK(moved.level == ho::Level::first);
    CHECK(ho::decrypt(ctx, moved, kp2.sk) == m);
    CHECK(ho::decrypt(ctx, moved, kp1.sk) != m);

    CHECK_THROWS_AS(ho::reencrypt(ctx, moved, rk), ProtocolError);
  }
}

TEST_CASE("the transformed result still evaluates homomorphically") {
  for (auto b : testutil::both_backends()) {
    auto p = testutil::group(b);
    Ctx ctx(p);
    Rng rng(59);
    auto kp1 = ho::keygen(ctx, rng);
    auto kp2 = ho::keygen(ctx, rng);
    auto rk = ho::rekeygen(ctx, kp1.sk, kp2.pk2);

    GT m1 = p->random_gt(rng), m2 = p->random_gt(rng), m3 = p->random_gt(rng);
    auto c1 = ho::encrypt(ctx, rng, m1, ho::public_part(kp1), ho::Level::second);
    auto c2 = ho::encrypt(ctx, rng, m2, ho::public_part(kp1), ho::Level::second);
    auto res = ho::eval_mul(ctx, rng, c1, c2, ho::public_part(kp1));
    auto moved = ho::reencrypt(ctx, res, rk);
    auto c3 = ho::encrypt(ctx, rng, m3, ho::public_part(kp2), ho::Level::first);
    auto final_ct = ho::eval_mul(ctx, rng, moved, c3, ho::public_part(kp2));
    CHECK(ho::decrypt(ctx, final_ct, kp2.sk) ==
          p->gt_mul(p->gt_mul(m1, m2), m3));
  }
}

TEST_CASE("mock pipeline sweep over small exponents") {
  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  Rng rng(60);
  auto kp1 = ho::keygen(ctx, rng);
  auto kp2 = ho::keygen(ctx, rng);
  auto rk = ho::rekeygen(ctx, kp1.sk, kp2.pk2);
  for (std::uint64_t i = 0; i <= 6; ++i) {
    for (std::uint64_t j = 0; j <= 6; ++j) {
      GT mi = p->gt_exp(p->z(), p->scalar(i));
      GT mj = p->gt_exp(p->z(), p->scalar(j));
      auto res = ho::eval_mul(
          ctx, rng, ho::encrypt(ctx, rng, mi, ho::public_part(kp1), ho::Level::second),
          ho::encrypt(ctx, rng, mj, ho::public_part(kp1), ho::Level::second),
          ho::public_part(kp1));
      auto out = ho::decrypt(ctx, ho::reencrypt(ctx, res, rk), kp2.sk);
      REQUIRE(p->mock_log_gt(out) == i + j);
    }
  }
}

TEST_CASE("no public combination reverses a re-encryption key") {
  // rk construction itself demands the source secret (API-level property);
  // algebraically, rk_{2->1} = g^{sk1/sk2} matches no product of the
  // published values and rk_{1->2}
  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  Rng rng(61);
  auto kp1 = ho::keygen(ctx, rng);
  auto kp2 = ho::keygen(ctx, rng);
  auto rk12 = ho::rekeygen(ctx, kp1.sk, kp2.pk2);
  auto rk21 = ho::rekeygen(ctx, kp2.sk, kp1.pk2);

  std::vector<G1> public_material = {p->generator(), kp1.pk2, kp2.pk2, rk12.rk};
  for (const auto& x : public_material) {
    CHECK(x != rk21.rk);
    for (const auto& y : public_material) {
      CHECK(p->g1_mul(x, y) != rk21.rk);
      if (p->mock_log_g1(y) != 0) {
        // x * y^{-1}
        G1 ratio = p->g1_mul(x, p->g1_exp(y, p->sc_neg(p->scalar(1))));
        CHECK(ratio != rk21.rk);
      }
    }
  }
}

TEST_CASE("evaluation programs serialize and execute") {
  auto p = testutil::group(Backend::mock);
  Ctx ctx(p);
  Rng rng(62);
  auto kp = ho::keygen(ctx, rng);
  auto pk = ho::public_part(kp);

  GT m1 = p->gt_exp(p->z(), p->scalar(2));
  GT m2 = p->gt_exp(p->z(), p->scalar(3));
  GT k = p->gt_exp(p->z(), p->scalar(10));

  ho::EvalProgram prog;
  prog.ops.push_back({ho::EvalOp::Kind::mul_ct, 1, GT{}});
  prog.ops.push_back({ho::EvalOp::Kind::mul_const, 0, k});

  Bytes wire = ho::serialize(*p, prog);
  ho::EvalProgram back = ho::parse_program(*p, wire);
  REQUIRE(back.ops.size() == 2);
  CHECK(back.ops[0].kind == ho::EvalOp::Kind::mul_ct);
  CHECK(back.ops[1].factor == k);

  std::vector<ho::Ciphertext> inputs = {
      ho::encrypt(ctx, rng, m1, pk, ho::Level::second),
      ho::encrypt(ctx, rng, m2, pk, ho::Level::second)};
  auto res = ho::run_program(ctx, rng, back, inputs, pk);
  CHECK(p->mock_log_gt(ho::decrypt(ctx, res, kp.sk)) == 2 + 3 + 10);

  ho::EvalProgram bad;
  bad.ops.push_back({ho::EvalOp::Kind::mul_ct, 7, GT{}});
  CHECK_THROWS_AS(ho::run_program(ctx, rng, bad, inputs, pk), ProtocolError);

  Bytes junk = wire;
  junk[4] = 0x77;  // unknown opcode
  CHECK_THROWS_AS(ho::parse_program(*p, junk), DecodeError);
}
