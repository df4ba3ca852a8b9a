// Serial reference vs OpenMP integration kernel, and the two assembly
// strategies, on structured cube meshes.

#include <benchmark/benchmark.h>

#include <map>

#include "hexfem/assemble.hpp"
#include "hexfem/integrate.hpp"

namespace {

using namespace hexfem;

constexpr std::uint64_t kBudget = std::uint64_t{1} << 40;

const Mesh& mesh_for(std::int64_t n) {
  static std::map<std::int64_t, Mesh> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, generate_cube_mesh({n, n, n, 1.0, 1.0})).first;
  return it->second;
}

void BM_IntegrateSerialReference(benchmark::State& state) {
  const auto& mesh = mesh_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_reference(mesh));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.n_elements()));
}

void BM_IntegrateSerialBackend(benchmark::State& state) {
  const auto& mesh = mesh_for(state.range(0));
  SerialBackend backend(kBudget);
  const auto plan = split_evenly(mesh.n_elements(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_all(mesh, backend, plan, ExecutionMode::sequential));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.n_elements()));
}

void BM_IntegrateOpenMP(benchmark::State& state) {
  const auto& mesh = mesh_for(state.range(0));
  OpenMPBackend backend(kBudget, static_cast<int>(state.range(1)));
  const auto plan = split_evenly(mesh.n_elements(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_all(mesh, backend, plan, ExecutionMode::sequential));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.n_elements()));
}

void BM_AssembleTriplet(benchmark::State& state) {
  const auto& mesh = mesh_for(state.range(0));
  const auto values = integrate_reference(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(triplet_to_csc(build_triplet(mesh, values)));
}

void BM_AssembleDirect(benchmark::State& state) {
  const auto& mesh = mesh_for(state.range(0));
  const auto values = integrate_reference(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_direct(mesh, values));
}

BENCHMARK(BM_IntegrateSerialReference)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IntegrateSerialBackend)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IntegrateOpenMP)
    ->ArgsProduct({{20, 40}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AssembleTriplet)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AssembleDirect)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
