#include "sktspec/galerkin.hpp"
#include "sktspec/integrate.hpp"
#include "sktspec/lyapunov.hpp"
#include "sktspec/spectral.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

skt::SpectralState smooth_state(int n) {
  skt::SpectralState s(n);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      s.mu1(j, k) = 0.1 * std::exp(-0.5 * (j + k)) * ((j + k) % 2 ? -1 : 1);
      s.mu2(j, k) = 0.05 * std::exp(-0.4 * (j + k));
    }
  }
  s.mu1(0, 0) = 0.6 * std::numbers::pi;
  s.mu2(0, 0) = 0.3 * std::numbers::pi;
  return s;
}

void BM_BuildTensors(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(skt::build_tensors(n));
}
BENCHMARK(BM_BuildTensors)->Arg(4)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Rhs(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const skt::RhsAssembler a(*skt::preset("case2"), n);
  const Eigen::VectorXd y = skt::to_flat(smooth_state(n));
  Eigen::VectorXd dy(y.size());
  for (auto _ : st) {
    a.rhs(y.data(), dy.data());
    benchmark::DoNotOptimize(dy.data());
  }
  st.counters["nnz"] = static_cast<double>(a.tensors().mass3.nonzeros());
}
BENCHMARK(BM_Rhs)->Arg(4)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_DormandPrinceStep(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const skt::RhsAssembler a(*skt::preset("case1"), n);
  skt::DormandPrince dp(a, {1e-7, 1e-10});
  const Eigen::VectorXd y0 = skt::to_flat(smooth_state(n));
  for (auto _ : st) {
    Eigen::VectorXd y = y0;
    double t = 0.0;
    dp.reset();
    benchmark::DoNotOptimize(dp.step(y, t, 1e-2));
  }
}
BENCHMARK(BM_DormandPrinceStep)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_FindCertificate(benchmark::State& st) {
  const skt::ModelParams p = *skt::preset("case1");
  for (auto _ : st) benchmark::DoNotOptimize(skt::find_certificate(p));
}
BENCHMARK(BM_FindCertificate);

}  // namespace

BENCHMARK_MAIN();
