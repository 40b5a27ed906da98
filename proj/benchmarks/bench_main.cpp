#include <benchmark/benchmark.h>

#include "subsaf/adaptive.hpp"
#include "subsaf/filterbank.hpp"
#include "subsaf/rng.hpp"

using namespace subsaf;

namespace {

SubbandTick make_tick(Rng& rng, int n, int m) {
  SubbandTick t;
  t.regressors.assign(n, std::vector<double>(m));
  t.desired.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (auto& v : t.regressors[i]) v = rng.gaussian();
    t.desired[i] = rng.gaussian();
  }
  return t;
}

void bm_grsaf_step(benchmark::State& state) {
  const int n = 4;
  const int m = static_cast<int>(state.range(0));
  GrSafOptions opts;
  opts.n_subbands = n;
  opts.filter_len = m;
  GrSafState st = GrSafState::init(opts);
  const ScalingRule rule{RobustVariant::none};
  Rng rng(1);
  const SubbandTick tick = make_tick(rng, n, m);
  for (auto _ : state) {
    grsaf_step(st, tick, rule, nullptr);
    benchmark::DoNotOptimize(st.w.data());
  }
  state.SetItemsProcessed(state.iterations());
}

void bm_grsaf_step_dense(benchmark::State& state) {
  const int n = 4;
  const int m = static_cast<int>(state.range(0));
  GrSafOptions opts;
  opts.n_subbands = n;
  opts.filter_len = m;
  opts.covariance = CovarianceMode::dense;
  GrSafState st = GrSafState::init(opts);
  const ScalingRule rule{RobustVariant::none};
  Rng rng(1);
  const SubbandTick tick = make_tick(rng, n, m);
  for (auto _ : state) {
    grsaf_step(st, tick, rule, nullptr);
    benchmark::DoNotOptimize(st.w.data());
  }
}

void bm_mnsaf_step(benchmark::State& state) {
  const int n = 4;
  const int m = static_cast<int>(state.range(0));
  MnsafOptions opts;
  opts.n_subbands = n;
  opts.filter_len = m;
  MnsafState st = MnsafState::init(opts);
  const ScalingRule rule{RobustVariant::none};
  Rng rng(1);
  const SubbandTick tick = make_tick(rng, n, m);
  for (auto _ : state) {
    mnsaf_step(st, tick, rule, nullptr);
    benchmark::DoNotOptimize(st.w.data());
  }
}

void bm_decompose_block(benchmark::State& state) {
  const int n = 4;
  const AnalysisBank bank = modulate(design_prototype(n, 33, 60.0));
  SubbandDecomposer dec(bank, static_cast<int>(state.range(0)));
  Rng rng(2);
  std::vector<double> u(n), d(n);
  for (auto _ : state) {
    for (int s = 0; s < n; ++s) {
      u[s] = rng.gaussian();
      d[s] = rng.gaussian();
    }
    const SubbandTick t = dec.step(u, d);
    benchmark::DoNotOptimize(t.desired.data());
  }
}

void bm_design_prototype(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const PrototypeFilter p = design_prototype(n, 8 * n + 1, 60.0);
    benchmark::DoNotOptimize(p.coeffs.data());
  }
}

}  // namespace

BENCHMARK(bm_grsaf_step)->Arg(128)->Arg(512);
BENCHMARK(bm_grsaf_step_dense)->Arg(64);
BENCHMARK(bm_mnsaf_step)->Arg(128)->Arg(512);
BENCHMARK(bm_decompose_block)->Arg(128)->Arg(512);
BENCHMARK(bm_design_prototype)->Arg(4)->Unit(benchmark::kMillisecond);
