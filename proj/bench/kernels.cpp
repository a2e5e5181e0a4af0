#include "shimura/finsymp.hpp"
#include "shimura/trace.hpp"
#include "shimura/zeta.hpp"

#include <benchmark/benchmark.h>

using namespace shimura;

namespace {

Exec mode(const benchmark::State &state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State &state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_enumerate_sp4_f3(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(finsymp::enumerate_sp(2, 3, mode(state)).size());
  label(state);
}
BENCHMARK(BM_enumerate_sp4_f3)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_orbit_count_tp_d2(benchmark::State &state) {
  IntMatrix g{{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(finsymp::orbit_count_mod_p(2, 3, g, mode(state)));
  label(state);
}
BENCHMARK(BM_orbit_count_tp_d2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// y^2 z = x^3 + x z^2 over F_{5^4}.
void BM_count_points_elliptic(benchmark::State &state) {
  zeta::VarietySpec e;
  e.ambient = zeta::Ambient::Projective;
  e.dim = 2;
  e.p = 5;
  e.equations = {{{1, {0, 2, 1}}, {-1, {3, 0, 0}}, {-1, {1, 0, 2}}}};
  for (auto _ : state) benchmark::DoNotOptimize(zeta::count_points(e, 4, mode(state)));
  label(state);
}
BENCHMARK(BM_count_points_elliptic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

trace::TestFunction ramp(std::size_t n) {
  trace::TestFunction f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = make_rational(static_cast<long>(i % 7) - 3, static_cast<long>(i % 5) + 1);
  return f;
}

void BM_direct_trace_s5(benchmark::State &state) {
  auto g = trace::catalog_group("S5");
  auto f = ramp(g.order());
  for (auto _ : state) benchmark::DoNotOptimize(trace::direct_trace(g, f, mode(state)));
  label(state);
}
BENCHMARK(BM_direct_trace_s5)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_geometric_side_s5(benchmark::State &state) {
  auto g = trace::catalog_group("S5");
  auto f = ramp(g.order());
  for (auto _ : state) benchmark::DoNotOptimize(trace::geometric_side(g, f, mode(state)));
  label(state);
}
BENCHMARK(BM_geometric_side_s5)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
