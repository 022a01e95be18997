#include <benchmark/benchmark.h>

#include "axifep/app/checks.hpp"
#include "axifep/app/config.hpp"
#include "axifep/assembly.hpp"
#include "axifep/material_mcc.hpp"
#include "axifep/scenario.hpp"
#include "axifep/solver.hpp"

using namespace axifep;

namespace {

void BM_ReturnMapElastic(benchmark::State& state) {
  const mcc::MatParams p = fem::benchmark_params();
  const Mat3 eps = -1e-3 * Mat3::Identity();
  for (auto _ : state) benchmark::DoNotOptimize(mcc::return_map_strain(eps, 0.0, p));
}
BENCHMARK(BM_ReturnMapElastic);

void BM_ReturnMapPlastic(benchmark::State& state) {
  const mcc::MatParams p = fem::benchmark_params();
  Mat3 eps;
  eps << -0.01, 0.1, 0, 0.1, -0.02, 0, 0, 0, 0.005;
  for (auto _ : state) benchmark::DoNotOptimize(mcc::return_map_strain(eps, 0.0, p));
}
BENCHMARK(BM_ReturnMapPlastic);

// Internal force and tangent of the 5 x 10 benchmark mesh mid-ramp.
void BM_Assemble(benchmark::State& state) {
  app::RunConfig cfg = app::benchmark_config();
  cfg.formulation = state.range(0) ? fem::Formulation::TL : fem::Formulation::UL;
  app::MidRampState st = app::benchmark_state(cfg, 10);
  fem::AssemblyOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fem::assemble(st.model, st.u, opt));
}
BENCHMARK(BM_Assemble)
    ->ArgNames({"tl", "threads"})
    ->Args({0, 1})
    ->Args({1, 1})
    ->Args({0, 4})
    ->Unit(benchmark::kMicrosecond);

// One Newton solve of benchmark step 11 from the committed step-10 state.
void BM_NewtonStep(benchmark::State& state) {
  app::RunConfig cfg = app::benchmark_config();
  app::MidRampState st = app::benchmark_state(cfg, 10);
  const fem::DirichletSet bcs = fem::cylinder_ramp_bcs(st.model.mesh, cfg.geometry, 11.0 / 30.0);
  for (auto _ : state) {
    Eigen::VectorXd u;
    benchmark::DoNotOptimize(fem::nr_solve(st.model, bcs, fem::NrOptions{}, u));
  }
}
BENCHMARK(BM_NewtonStep)->Unit(benchmark::kMillisecond);

void BM_FullRamp(benchmark::State& state) {
  const app::RunConfig cfg = app::benchmark_config();
  for (auto _ : state) {
    fem::Model model(fem::gen_cylinder_mesh(cfg.geometry.r_int, cfg.geometry.r_ext,
                                            cfg.geometry.height, cfg.geometry.n_r,
                                            cfg.geometry.n_z),
                     cfg.material(), fem::Formulation::UL);
    fem::RampOptions ro;
    ro.steps = cfg.steps;
    benchmark::DoNotOptimize(fem::run_ramp(
        model, [&](double t) { return fem::cylinder_ramp_bcs(model.mesh, cfg.geometry, t); },
        ro));
  }
}
BENCHMARK(BM_FullRamp)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
