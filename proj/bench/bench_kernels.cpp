#include <benchmark/benchmark.h>

#include <vector>

#include "shockfront/exact_solution.hpp"
#include "shockfront/fvm.hpp"
#include "shockfront/geometry_verify.hpp"
#include "shockfront/process.hpp"
#include "shockfront/thermo.hpp"

namespace {

using namespace shockfront;

const exact::SolutionFamily& reference_family() {
  static const exact::SolutionFamily family(
      {0.0, 0.0, 1.0, 1.0}, process::adiabatic_process(thermo::ideal_gas_model(3.0, 0.6), 0.0));
  return family;
}

fvm::GridState reference_grid(int cells) {
  fvm::GridSpec spec;
  spec.n_cells = cells;
  return fvm::init_from_analytic(reference_family(), 0.0, spec);
}

std::vector<exact::BranchQuery> reference_queries(int count) {
  std::vector<exact::BranchQuery> q;
  for (int i = 0; i < count; ++i) q.push_back({4.0, -5.0 + 15.0 * i / count});
  return q;
}

void BM_FvmStepSerial(benchmark::State& st) {
  const auto& curve = reference_family().curve();
  auto grid = reference_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fvm::step_serial(grid, curve));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_FvmStepParallel(benchmark::State& st) {
  const auto& curve = reference_family().curve();
  auto grid = reference_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fvm::step(grid, curve));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_BranchesSerial(benchmark::State& st) {
  const auto q = reference_queries(static_cast<int>(st.range(0)));
  const auto& family = reference_family();
  for (auto _ : st) {
    benchmark::DoNotOptimize(exact::branches_batch_serial(family, q, family.curve().domain()));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_BranchesParallel(benchmark::State& st) {
  const auto q = reference_queries(static_cast<int>(st.range(0)));
  const auto& family = reference_family();
  for (auto _ : st) {
    benchmark::DoNotOptimize(exact::branches_batch(family, q, family.curve().domain()));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_Verification(benchmark::State& st) {
  geometry::VerifyOptions opt;
  opt.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(geometry::run_verification(reference_family(), opt));
}

}  // namespace

BENCHMARK(BM_FvmStepSerial)->Arg(1600)->Arg(12800);
BENCHMARK(BM_FvmStepParallel)->Arg(1600)->Arg(12800);
BENCHMARK(BM_BranchesSerial)->Arg(64)->Arg(512);
BENCHMARK(BM_BranchesParallel)->Arg(64)->Arg(512);
BENCHMARK(BM_Verification)->Arg(100);

BENCHMARK_MAIN();
