#include <benchmark/benchmark.h>

#include "fogsec/pairing.hpp"

using namespace fogsec;

namespace {

std::shared_ptr<const Pairing> curve() {
  static auto p = Pairing::setup(Backend::curve, "bench");
  return p;
}

std::shared_ptr<const Pairing> mock() {
  static auto p = Pairing::setup(Backend::mock, "bench");
  return p;
}

void BM_Pairing(benchmark::State& state, std::shared_ptr<const Pairing> p) {
  Rng rng(1);
  G1 a = p->g1_exp(p->generator(), p->random_scalar(rng));
  G1 b = p->g1_exp(p->generator(), p->random_scalar(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(p->pair(a, b));
  }
}
BENCHMARK_CAPTURE(BM_Pairing, curve, curve());
BENCHMARK_CAPTURE(BM_Pairing, mock, mock());

void BM_G1Exp(benchmark::State& state, std::shared_ptr<const Pairing> p) {
  Rng rng(2);
  Scalar s = p->random_scalar(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(p->g1_exp(p->generator(), s));
  }
}
BENCHMARK_CAPTURE(BM_G1Exp, curve, curve());
BENCHMARK_CAPTURE(BM_G1Exp, mock, mock());

void BM_GTExp(benchmark::State& state, std::shared_ptr<const Pairing> p) {
  Rng rng(3);
  Scalar s = p->random_scalar(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(p->gt_exp(p->z(), s));
  }
}
BENCHMARK_CAPTURE(BM_GTExp, curve, curve());
BENCHMARK_CAPTURE(BM_GTExp, mock, mock());

void BM_HashToG1(benchmark::State& state, std::shared_ptr<const Pairing> p) {
  Bytes data = to_bytes("a sensed datum");
  for (auto _ : state) {
    benchmark::DoNotOptimize(p->hash_to_g1(data));
  }
}
BENCHMARK_CAPTURE(BM_HashToG1, curve, curve());
BENCHMARK_CAPTURE(BM_HashToG1, mock, mock());

void BM_Serialize(benchmark::State& state, std::shared_ptr<const Pairing> p) {
  Rng rng(4);
  G1 a = p->g1_exp(p->generator(), p->random_scalar(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(p->serialize(a));
  }
}
BENCHMARK_CAPTURE(BM_Serialize, curve, curve());

}  // namespace

BENCHMARK_MAIN();
