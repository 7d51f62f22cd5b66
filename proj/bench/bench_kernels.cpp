// Copyright 2026 The hybridspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Lindblad right-hand side: dense serial reference against the sparse OpenMP
// kernel at several thread counts, plus whole evolutions with the dense and
// block solvers.
//
//   bench_kernels --benchmark_filter=Rhs

#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "hybridspin/dynamics.hpp"
#include "hybridspin/kernels.hpp"
#include "hybridspin/models.hpp"
#include "hybridspin/sectors.hpp"

namespace hs = hybridspin;

namespace {

hs::LindbladModel red_model(int trunc) {
  hs::ModelRecipe r;
  r.truncations = {trunc, trunc};
  r.params.gamma = 1.0;
  r.params.Gamma_m_s = 1e-3;
  r.params.kappa = 0.1;
  return hs::build_red(r, 0.3);
}

hs::DenseMatrix random_density(std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  hs::DenseMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {n(rng), n(rng)};
  hs::DenseMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

void RhsReference(benchmark::State& state) {
  const auto m = red_model(static_cast<int>(state.range(0)));
  const hs::DenseMatrix rho = random_density(m.space.dim());
  for (auto _ : state) {
    hs::DenseMatrix out = hs::lindblad_rhs_reference(m, 0.0, rho);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["dim"] = static_cast<double>(m.space.dim());
}

void RhsGenerator(benchmark::State& state) {
  const auto m = red_model(static_cast<int>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  const hs::LindbladGenerator gen(m);
  const hs::DenseMatrix rho = random_density(m.space.dim());
  hs::DenseMatrix out;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  for (auto _ : state) {
    gen.apply(0.0, rho, out);
    benchmark::DoNotOptimize(out.data());
  }
  omp_set_num_threads(saved);
  state.counters["dim"] = static_cast<double>(m.space.dim());
}

hs::EvolutionSpec red_spec(const hs::LindbladModel& m) {
  hs::EvolutionSpec spec;
  spec.t_end = 20.0;
  spec.n_samples = 41;
  spec.initial = hs::StateVector::basis(m.space, {1, 1, 0});
  spec.observables = {{"n_a", hs::number(m.space, 0)}, {"n_b", hs::number(m.space, 1)}};
  return spec;
}

void EvolveDense(benchmark::State& state) {
  const auto m = red_model(static_cast<int>(state.range(0)));
  const auto spec = red_spec(m);
  for (auto _ : state) benchmark::DoNotOptimize(hs::evolve_lindblad(m, spec));
}

void EvolveSectors(benchmark::State& state) {
  const auto m = red_model(static_cast<int>(state.range(0)));
  const auto spec = red_spec(m);
  const int w[] = {1, 1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(hs::evolve_lindblad_sectors(m, spec, w));
}

}  // namespace

BENCHMARK(RhsReference)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(RhsGenerator)
    ->ArgsProduct({{4, 8}, {1, 2, 4}})
    ->Unit(benchmark::kMicrosecond)
    ->UseRealTime();
BENCHMARK(EvolveDense)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(EvolveSectors)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
