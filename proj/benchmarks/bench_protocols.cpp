#include <benchmark/benchmark.h>

#include "fogsec/aggsign.hpp"
#include "fogsec/clpre.hpp"
#include "fogsec/homopre.hpp"
#include "fogsec/mabe.hpp"

using namespace fogsec;

namespace {

std::shared_ptr<const Pairing> curve() {
  static auto p = Pairing::setup(Backend::curve, "bench");
  return p;
}

void BM_AggVerify(benchmark::State& state) {
  Ctx ctx(curve());
  Rng rng(1);
  auto kp = aggsign::keygen(ctx, rng);
  const long n = state.range(0);
  std::vector<Bytes> pkts;
  std::vector<aggsign::Signature> sigs;
  for (long i = 0; i < n; ++i) {
    Bytes b(100);
    rng.fill(b);
    pkts.push_back(b);
    sigs.push_back(aggsign::sign(ctx, b, kp.sk));
  }
  auto agg = aggsign::aggregate(ctx, sigs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aggsign::verify_aggregate(ctx, pkts, agg, kp.pk));
  }
}
BENCHMARK(BM_AggVerify)->Arg(1)->Arg(4)->Arg(7)->Arg(10);

void BM_BlsVerify(benchmark::State& state) {
  Ctx ctx(curve());
  Rng rng(2);
  auto kp = aggsign::keygen(ctx, rng);
  const long n = state.range(0);
  std::vector<Bytes> pkts;
  std::vector<aggsign::Signature> sigs;
  for (long i = 0; i < n; ++i) {
    Bytes b(100);
    rng.fill(b);
    pkts.push_back(b);
    sigs.push_back(aggsign::sign(ctx, b, kp.sk));
  }
  for (auto _ : state) {
    for (long i = 0; i < n; ++i) {
      benchmark::DoNotOptimize(
          aggsign::verify_single(ctx, pkts[i], sigs[i], kp.pk));
    }
  }
}
BENCHMARK(BM_BlsVerify)->Arg(1)->Arg(4)->Arg(7)->Arg(10);

void BM_ClpreReencrypt(benchmark::State& state) {
  Ctx ctx(curve());
  Rng rng(3);
  auto pkg = clpre::pkg_setup(ctx, rng);
  auto sender = clpre::user_keygen(
      ctx, rng, clpre::extract_partial_key(ctx, pkg, to_bytes("s")),
      to_bytes("s"), pkg.mpk, true);
  auto receiver = clpre::user_keygen(
      ctx, rng, clpre::extract_partial_key(ctx, pkg, to_bytes("r")),
      to_bytes("r"), pkg.mpk, false);
  GT m = ctx.group().random_gt(rng);
  auto ct = clpre::encrypt(ctx, rng, m, sender);
  auto rk = clpre::rekeygen(ctx, rng, sender, receiver.g_i, receiver.pub.X);
  for (auto _ : state) {
    benchmark::DoNotOptimize(clpre::reencrypt(ctx, ct, rk));
  }
}
BENCHMARK(BM_ClpreReencrypt);

void BM_MabePartialDecrypt(benchmark::State& state) {
  Ctx ctx(curve());
  Rng rng(4);
  const long x = state.range(0);
  std::set<std::string> attrs;
  std::vector<std::string> attr_list;
  for (long i = 0; i < x; ++i) {
    attr_list.push_back("a" + std::to_string(i));
    attrs.insert(attr_list.back());
  }
  auto auth = mabe::authority_setup(ctx, rng, attrs);
  mabe::AuthorityDirectory dir;
  dir.enroll(auth);
  lsss::Policy policy = lsss::Policy::leaf(attr_list[0]);
  for (long i = 1; i < x; ++i)
    policy = lsss::Policy::and_of(std::move(policy),
                                  lsss::Policy::leaf(attr_list[i]));
  auto inter = mabe::intermediate_encrypt(ctx, rng, attr_list, dir);
  GT d = ctx.group().random_gt(rng);
  auto ct = mabe::full_encrypt(ctx, rng, d, inter, policy);
  auto uk = mabe::keygen_user(ctx, auth, to_bytes("u"), attrs);
  auto [tk, r] = mabe::transform_key(ctx, rng, uk);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mabe::partial_decrypt(ctx, ct, tk));
  }
  (void)r;
}
BENCHMARK(BM_MabePartialDecrypt)->Arg(1)->Arg(3)->Arg(6);

void BM_HomoEval(benchmark::State& state) {
  Ctx ctx(curve());
  Rng rng(5);
  auto kp = homopre::keygen(ctx, rng);
  auto pk = homopre::public_part(kp);
  GT m1 = ctx.group().random_gt(rng);
  GT m2 = ctx.group().random_gt(rng);
  auto c1 = homopre::encrypt(ctx, rng, m1, pk, homopre::Level::second);
  auto c2 = homopre::encrypt(ctx, rng, m2, pk, homopre::Level::second);
  for (auto _ : state) {
    benchmark::DoNotOptimize(homopre::eval_mul(ctx, rng, c1, c2, pk));
  }
}
BENCHMARK(BM_HomoEval);

}  // namespace

BENCHMARK_MAIN();
