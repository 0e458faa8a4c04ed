#include <benchmark/benchmark.h>

#include "ofrac/frac_operator.hpp"
#include "ofrac/infconv.hpp"
#include "ofrac/orlicz.hpp"
#include "ofrac/solutions.hpp"

namespace {

using namespace ofrac;

void BM_PV(benchmark::State& state) {
  const auto Y = make_young(YoungSpec::power(static_cast<double>(state.range(0))));
  const auto u = make_generator("truncated_parabola_s", {{"s", 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(eval_pv_glaplacian(u, 0.3, Y, 0.5).value);
}
BENCHMARK(BM_PV)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_GGradient(benchmark::State& state) {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = make_generator("bump", {});
  for (auto _ : state) benchmark::DoNotOptimize(eval_g_gradient(u, 0.2, Y, 0.5));
}
BENCHMARK(BM_GGradient)->Unit(benchmark::kMillisecond);

void BM_ModularSG(benchmark::State& state) {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = SampledFunction::sample([](double x) { return 1.0 - x * x; }, 1.0,
                                         static_cast<std::size_t>(state.range(0)), TailModel::zero());
  const Domain1D dom{-1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(modular_sG(u, dom, Y, 0.5).value);
}
BENCHMARK(BM_ModularSG)->Arg(21)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_Luxemburg(benchmark::State& state) {
  const auto Y = make_young(YoungSpec::power(3.0));
  const auto u = make_generator("bump", {});
  const Domain1D dom{-1.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(luxemburg_norm(u, dom, Y, NormKind::SeminormSG, 0.5).lambda);
}
BENCHMARK(BM_Luxemburg)->Unit(benchmark::kMillisecond);

void BM_InfConv(benchmark::State& state) {
  const auto u = make_generator("abs", {{"L", 2.0}});
  const auto p = make_infconv_params(u, 0.1, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(inf_convolve(u, p).values.back());
}
BENCHMARK(BM_InfConv)->Unit(benchmark::kMillisecond);

void BM_Dirichlet(benchmark::State& state) {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto ext = make_generator("constant", {{"c", 0.0}});
  const auto f = SourceFunction::constant(1.0);
  DirichletOptions o;
  o.nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(-1.0, 1.0, ext, Y, 0.5, f, o)(0.0));
}
BENCHMARK(BM_Dirichlet)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_WeakPair(benchmark::State& state) {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = make_generator("truncated_parabola_s", {{"s", 0.5}});
  const TestFunction psi{0.0, 0.3, 1.0};
  const auto f = SourceFunction::constant(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(weak_form_pair(u, psi, Y, 0.5, f).lhs);
}
BENCHMARK(BM_WeakPair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
