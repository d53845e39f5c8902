// Serial reference versus OpenMP kernels on the workloads the library runs:
// weight evaluation over a grid, panel quadrature, and ratio suprema.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "lorentz/classes.hpp"
#include "lorentz/kernels.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/weight.hpp"

namespace {

using namespace lorentz;

std::vector<double> grid(int per_decade) { return log_grid(1e-6, 1e6, per_decade); }

const Weight& smoothed_wq() {
  static const Weight w = Weight::wq(Weight::smoothed(Weight::characteristic(0.0, 1.0), 1), 2.0);
  return w;
}

template <bool Parallel>
void BM_MapWeight(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const Weight& w = smoothed_wq();
  const auto f = [&](double t) { return w(t); };
  for (auto _ : st) {
    auto v = Parallel ? kernels::parallel::map(g, f) : kernels::serial::map(g, f);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}

template <bool Parallel>
void BM_Panels(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const Weight w = Weight::shifted_power(1.0, 1.0, -2.0);
  const auto f = [&](double a, double b) {
    return integrate_panel([&](double s) { return w(s) * std::pow(s, -2.0); }, a, b, 1e-12).value;
  };
  for (auto _ : st) {
    auto v = Parallel ? kernels::parallel::panels<double>(g, f)
                      : kernels::serial::panels<double>(g, f);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size() - 1));
}

template <bool Parallel>
void BM_DoubleLoopSup(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const Weight w = Weight::log_poly({1.0, -1.0}, 0.0, 0.0, 1.0);
  std::vector<double> W(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) W[k] = w.W(g[k]) / g[k];
  const auto f = [&](std::size_t i, std::size_t j) { return j >= i ? W[j] / W[i] : 0.0; };
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::double_loop_sup(g.size(), g.size(), f)
                      : kernels::serial::double_loop_sup(g.size(), g.size(), f);
    benchmark::DoNotOptimize(r.value);
  }
}

template <bool Parallel>
void BM_SuffixRatioSup(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = std::min(1.0, 1.0 / g[k]);
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::suffix_ratio_sup(v) : kernels::serial::suffix_ratio_sup(v);
    benchmark::DoNotOptimize(r.value);
  }
}

void BM_CertifyBp(benchmark::State& st) {
  const Weight w = Weight::log_poly({1.0, -1.0}, 0.0, 0.0, 1.0);
  RunConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(certify_bp(w, 1.0, cfg).constant);
}

}  // namespace

BENCHMARK(BM_MapWeight<false>)->Name("map_weight/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_MapWeight<true>)->Name("map_weight/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_Panels<false>)->Name("panels/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_Panels<true>)->Name("panels/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_DoubleLoopSup<false>)->Name("double_loop_sup/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_DoubleLoopSup<true>)->Name("double_loop_sup/parallel")->Arg(16)->Arg(64);
BENCHMARK(BM_SuffixRatioSup<false>)->Name("suffix_ratio_sup/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_SuffixRatioSup<true>)->Name("suffix_ratio_sup/parallel")->Arg(256)->Arg(4096);
BENCHMARK(BM_CertifyBp)->Name("certify_bp/end_to_end")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
