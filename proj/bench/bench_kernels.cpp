// Serial reference kernels against their OpenMP versions on the sizes the
// momentum pipeline actually produces.
#include <benchmark/benchmark.h>

#include <vector>

#include "cho/kernels.hpp"
#include "cho/measures.hpp"
#include "cho/solver.hpp"

namespace {

struct Transform {
  std::vector<double> r, w, p;
  std::vector<double> out;
};

Transform make_transform(std::size_t nr, std::size_t np) {
  Transform t;
  for (std::size_t i = 0; i < nr; ++i) {
    t.r.push_back((i + 0.5) / nr);
    t.w.push_back(1.0 / nr);
  }
  for (std::size_t j = 0; j < np; ++j) t.p.push_back(256.0 * (j + 0.5) / np);
  t.out.resize(np);
  return t;
}

void BM_transform_serial(benchmark::State& st) {
  auto t = make_transform(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) {
    cho::kernels::bessel_transform_serial(2, t.r, t.w, t.p, t.out);
    benchmark::DoNotOptimize(t.out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(1));
}

void BM_transform_parallel(benchmark::State& st) {
  auto t = make_transform(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) {
    cho::kernels::bessel_transform_parallel(2, t.r, t.w, t.p, t.out);
    benchmark::DoNotOptimize(t.out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(1));
}

struct Sum {
  std::vector<double> x, w, rho;
};

Sum make_sum(std::size_t n) {
  Sum s;
  for (std::size_t j = 0; j < n; ++j) {
    s.x.push_back(0.01 * (j + 1));
    s.w.push_back(0.01);
    s.rho.push_back(1.0 / (1.0 + s.x.back() * s.x.back()));
  }
  return s;
}

void BM_entropy_sum_serial(benchmark::State& st) {
  const auto s = make_sum(static_cast<std::size_t>(st.range(0)));
  const auto g = cho::kernels::Functional::neg_entropy();
  for (auto _ : st) benchmark::DoNotOptimize(cho::kernels::functional_sum_serial(g, s.x, s.w, s.rho));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_entropy_sum_parallel(benchmark::State& st) {
  const auto s = make_sum(static_cast<std::size_t>(st.range(0)));
  const auto g = cho::kernels::Functional::neg_entropy();
  for (auto _ : st) benchmark::DoNotOptimize(cho::kernels::functional_sum_parallel(g, s.x, s.w, s.rho));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// whole momentum transform of one deeply confined state
void BM_momentum(benchmark::State& st) {
  const auto rs = cho::radial_wavefunction(cho::QuantumState::from_name("2s", 0.1));
  cho::MomentumOptions opts;
  opts.parallel = st.range(0) != 0;
  for (auto _ : st) {
    auto ms = cho::momentum_wavefunction(rs, opts);
    benchmark::DoNotOptimize(ms.parseval());
  }
}

}  // namespace

BENCHMARK(BM_transform_serial)->Args({1024, 2048})->Args({4096, 8192});
BENCHMARK(BM_transform_parallel)->Args({1024, 2048})->Args({4096, 8192});
BENCHMARK(BM_entropy_sum_serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_entropy_sum_parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_momentum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
