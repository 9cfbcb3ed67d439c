#include <benchmark/benchmark.h>

#include "otplab/attacks.hpp"
#include "otplab/chen.hpp"
#include "otplab/group_model.hpp"
#include "otplab/primitives.hpp"

namespace {

using namespace otplab;

void BM_Crc16(benchmark::State& state) {
  Bytes data(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  rng.fill(data);
  for (auto _ : state) benchmark::DoNotOptimize(prim::crc16(data));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Crc16)->Arg(2)->Arg(64)->Arg(4096);

void BM_PrngIter(benchmark::State& state) {
  const prim::WordSpec spec(static_cast<unsigned>(state.range(0)));
  prim::Word s{1};
  for (auto _ : state) {
    s = spec.prng_iter(s, 64);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PrngIter)->Arg(8)->Arg(16)->Arg(32);

void BM_Pairing(benchmark::State& state) {
  const group::PairingParams p;
  Rng rng(2);
  const auto a = p.pow(p.g1(), p.random_scalar(rng));
  const auto b = p.pow(p.g2(), p.random_scalar(rng));
  for (auto _ : state) benchmark::DoNotOptimize(p.pairing(a, b));
}
BENCHMARK(BM_Pairing);

void BM_ChenTrace(benchmark::State& state) {
  const prim::WordSpec spec(16);
  Rng rng(3);
  chen::ChenTagState tag{spec.random(rng), prim::Word{0}, spec.random(rng), spec.random(rng)};
  chen::ChenOwnerState owner{ideal::PartyId{"o"}, prim::Word{0}, tag.k, tag.k_star, tag.id_t};
  const auto know = attacks::chen_knowledge_from(spec, owner, static_cast<std::uint64_t>(state.range(0)));
  for (std::int64_t i = 1; i < state.range(0); ++i) chen::run_chen_session(spec, owner, tag, rng);
  const auto a = chen::run_chen_session(spec, owner, tag, rng);
  const auto b = chen::run_chen_session(spec, owner, tag, rng);
  for (auto _ : state) benchmark::DoNotOptimize(attacks::chen_trace(spec, know, a, b));
}
BENCHMARK(BM_ChenTrace)->Arg(16)->Arg(64)->Arg(255);

}  // namespace

BENCHMARK_MAIN();
