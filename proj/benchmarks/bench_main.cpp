#include <random>

#include <benchmark/benchmark.h>

#include "galmod/cohomology.hpp"
#include "galmod/extgroup.hpp"
#include "galmod/jmodel.hpp"
#include "galmod/pmodule.hpp"

using namespace galmod;

static void BM_RingMultiply(benchmark::State &state) {
  const RingParams params(3, static_cast<std::uint32_t>(state.range(0)));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> digit(0, 2);
  std::vector<std::int64_t> a(params.order()), b(params.order());
  for (auto &x : a)
    x = digit(rng);
  for (auto &x : b)
    x = digit(rng);
  const GroupRingElement f(params, a), g(params, b);
  for (auto _ : state)
    benchmark::DoNotOptimize(f * g);
}
BENCHMARK(BM_RingMultiply)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

static void BM_ExtMultiply(benchmark::State &state) {
  const ExtGroup g(RingParams(3, 3), 20, ExtFlavor::Bullet);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::uint64_t> pick(0, g.size() - 1);
  const auto x = g.element_at(pick(rng)), y = g.element_at(pick(rng));
  for (auto _ : state)
    benchmark::DoNotOptimize(g.mul(x, y));
}
BENCHMARK(BM_ExtMultiply);

static void BM_Fingerprint(benchmark::State &state) {
  const ExtGroup g(RingParams(3, 2), static_cast<std::uint32_t>(state.range(0)), ExtFlavor::Bullet);
  for (auto _ : state)
    benchmark::DoNotOptimize(fingerprint(g, 1'000'000));
}
BENCHMARK(BM_Fingerprint)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Decompose(benchmark::State &state) {
  const RingParams params(3, 3);
  const ModuleShape shape(params, {27, 9, 9, 3, 1});
  std::mt19937_64 rng(3);
  const FpMatrix u = action_matrix(shape);
  const FpMatrix g = random_invertible(u.rows(), 3, rng);
  const NilpotentAction action(params, g * u * *g.inverse());
  for (auto _ : state)
    benchmark::DoNotOptimize(decompose(action));
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

static void BM_Census(benchmark::State &state) {
  const JModel m(RingParams(3, 1), std::nullopt, {static_cast<std::uint32_t>(state.range(0)), 2});
  for (auto _ : state)
    benchmark::DoNotOptimize(census(m, 100'000'000));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m.cardinality(100'000'000)));
}
BENCHMARK(BM_Census)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_SolveCoboundary(benchmark::State &state) {
  const std::uint32_t p = static_cast<std::uint32_t>(state.range(0));
  const ExtGroup hx(RingParams(p, 1), 2, ExtFlavor::Split);
  auto h = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::from_ext_group(hx));
  auto q = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::elementary_abelian(p, 2));
  Cochain phi(q, 1, p), psi(q, 1, p);
  for (std::uint64_t x = 0; x < q->size(); ++x) {
    phi.set(x, static_cast<std::int64_t>(x % p));
    psi.set(x, static_cast<std::int64_t>(x / p));
  }
  std::vector<std::uint64_t> proj(h->size());
  for (std::uint64_t x = 0; x < h->size(); ++x) {
    const auto e = hx.element_at(x);
    proj[x] = e.f[0] + static_cast<std::uint64_t>(p) * e.j;
  }
  const Cochain c = inflate(cup11(phi, psi), GroupSurjection(h, q, proj));
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_coboundary(c));
}
BENCHMARK(BM_SolveCoboundary)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
