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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <omp.h>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "hybridspin/dynamics.hpp"
#include "hybridspin/errors.hpp"
#include "hybridspin/kernels.hpp"
#include "hybridspin/models.hpp"
#include "hybridspin/oracles.hpp"

namespace hs = hybridspin;
using hs::Complex;
using hs::DenseMatrix;
using std::numbers::pi;

namespace {

hs::ModelRecipe recipe(std::vector<int> truncations, double gamma = 0.0, double gamma_m = 0.0) {
  hs::ModelRecipe r;
  r.truncations = std::move(truncations);
  r.params.gamma = gamma;
  r.params.Gamma_m_s = gamma_m;
  return r;
}

DenseMatrix random_density(int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  DenseMatrix a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(n01(rng), n01(rng));
  DenseMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

hs::LindbladModel single_mode(int truncation, double rate) {
  const hs::HilbertSpace s{hs::Factor::boson(truncation)};
  return {s, hs::Hamiltonian(hs::Operator::zero(s)), {{rate, hs::annihilation(s, 0), "decay"}},
          "decay"};
}

}  // namespace

TEST(Lindblad, AmplitudeDampingClosedForm) {
  const double g = 0.7;
  const hs::HilbertSpace s{hs::Factor::qubit()};
  const hs::LindbladModel m{s, hs::Hamiltonian(hs::Operator::zero(s)),
                            {{g, hs::pauli(s, 0, hs::Pauli::minus), "gamma"}}, "qubit"};
  hs::EvolutionSpec spec;
  spec.t_end = 5.0;
  spec.n_samples = 26;
  spec.initial = hs::StateVector::basis(s, {1});
  spec.observables = {{"sz", hs::pauli(s, 0, hs::Pauli::z)}};
  const auto ts = hs::evolve_lindblad(m, spec);
  for (std::size_t k = 0; k < ts.times.size(); ++k) {
    EXPECT_NEAR(ts.column("sz")[k], std::exp(-g * ts.times[k]) - 0.5, 1e-8);
  }
}

TEST(Lindblad, DampedOscillatorClosedForm) {
  const double rate = 0.3;
  const hs::LindbladModel m = single_mode(8, rate);
  hs::EvolutionSpec spec;
  spec.t_end = 10.0;
  spec.n_samples = 21;
  spec.initial = hs::StateVector::basis(m.space, {5});
  spec.observables = {{"n", hs::number(m.space, 0)}};
  const auto ts = hs::evolve_lindblad(m, spec);
  for (std::size_t k = 0; k < ts.times.size(); ++k) {
    EXPECT_NEAR(ts.column("n")[k], 5.0 * std::exp(-rate * ts.times[k]), 1e-7);
  }
}

TEST(Lindblad, ClosedSystemMatchesUnitary) {
  const hs::LindbladModel m = hs::build_jc(recipe({5}), 0.4);
  hs::EvolutionSpec spec;
  spec.t_end = 12.0;
  spec.n_samples = 61;
  spec.initial = hs::StateVector::basis(m.space, {2, 0});
  spec.observables = {{"n", hs::number(m.space, 0)},
                      {"sz", hs::pauli(m.space, 1, hs::Pauli::z)}};
  const auto a = hs::evolve_lindblad(m, spec);
  const auto b = hs::evolve_unitary(m, spec);
  for (const char* name : {"n", "sz"}) {
    for (std::size_t k = 0; k < a.times.size(); ++k) {
      EXPECT_NEAR(a.column(name)[k], b.column(name)[k], 1e-6);
    }
  }
}

TEST(Lindblad, StateValidityRecorded) {
  const hs::LindbladModel m = hs::build_jc(recipe({6}, 0.05, 0.01), 0.3);
  hs::EvolutionSpec spec;
  spec.t_end = 20.0;
  spec.n_samples = 41;
  spec.initial = hs::StateVector::basis(m.space, {3, 1});
  spec.observables = {{"n", hs::number(m.space, 0)}};
  const auto ts = hs::evolve_lindblad(m, spec);
  EXPECT_LT(ts.metadata.at("max_trace_error").get<double>(), 1e-6);
  EXPECT_LT(ts.metadata.at("max_hermiticity_defect").get<double>(), 1e-8);
}

TEST(Lindblad, MissingInitialStateRejected) {
  const hs::LindbladModel m = single_mode(3, 0.1);
  hs::EvolutionSpec spec;
  EXPECT_THROW(hs::evolve_lindblad(m, spec), hs::InvalidArgument);
  spec.initial = hs::StateVector::basis(m.space, {1});
  spec.t_end = -1.0;
  EXPECT_THROW(hs::evolve_lindblad(m, spec), hs::InvalidArgument);
}

TEST(Unitary, ZeroHamiltonianKeepsState) {
  const hs::HilbertSpace s{hs::Factor::boson(4), hs::Factor::qubit()};
  const hs::LindbladModel m{s, hs::Hamiltonian(hs::Operator::zero(s)), {}, "free"};
  hs::EvolutionSpec spec;
  spec.t_end = 3.0;
  spec.n_samples = 4;
  spec.initial = hs::StateVector::basis(s, {2, 1});
  spec.observables = {{"n", hs::number(s, 0)}};
  const hs::TimeSeries ts = hs::evolve_unitary(m, spec);
  for (double v : ts.column("n")) EXPECT_EQ(v, 2.0);
}

TEST(Unitary, JaynesCummingsRabiPeriod) {
  const double lam = 0.25;
  const hs::LindbladModel m = hs::build_jc(recipe({3}), lam);
  hs::EvolutionSpec spec;
  spec.t_end = 2.0 * pi / lam;
  spec.n_samples = 401;
  spec.initial = hs::StateVector::basis(m.space, {1, 0});
  spec.observables = {{"sz", hs::pauli(m.space, 1, hs::Pauli::z)}};
  const auto ts = hs::evolve_unitary(m, spec);
  const auto& sz = ts.column("sz");
  for (std::size_t k = 0; k < sz.size(); ++k) {
    // <sigma_z> = 1/2 - cos^2(Lambda t): period pi / Lambda between -1/2 and +1/2.
    const double c = std::cos(lam * ts.times[k]);
    EXPECT_NEAR(sz[k], 0.5 - c * c, 1e-10);
  }
  EXPECT_NEAR(sz[100], 0.5, 1e-10);
  EXPECT_NEAR(sz[200], -0.5, 1e-10);
}

TEST(Unitary, CollapseRequiresOptIn) {
  const hs::LindbladModel m = hs::build_jc(recipe({3}, 0.1), 0.25);
  hs::EvolutionSpec spec;
  spec.initial = hs::StateVector::basis(m.space, {1, 0});
  EXPECT_THROW(hs::evolve_unitary(m, spec), hs::InvalidArgument);
  EXPECT_NO_THROW(hs::evolve_unitary(m, spec, true));
}

TEST(Unitary, MsPropagatorMatchesMagnus) {
  const double delta = 1.0, ratio = 0.01;
  const hs::LindbladModel m = hs::build_ms_gate(recipe({6}), ratio, 3, delta);
  const double tau = 2.0 * pi / delta;
  const DenseMatrix u = hs::propagator(m, tau).dense().topLeftCorner(8, 8);
  const DenseMatrix v = hs::ms_closed_form(3, ratio * ratio * tau / delta);
  EXPECT_GT(std::norm((v.adjoint() * u).trace()) / 64.0, 0.999);
}

TEST(Propagator, IdentityAtZero) {
  const hs::LindbladModel m = hs::build_ms_gate(recipe({4}), 0.1, 2, 1.0);
  const DenseMatrix u = hs::propagator(m, 0.0).dense();
  EXPECT_LT((u - DenseMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagator, StaticMatchesEigendecomposition) {
  const hs::LindbladModel m = hs::build_jc(recipe({5}), 0.45);
  const double t = 3.7;
  const DenseMatrix a = hs::propagator(m, t).dense();
  const DenseMatrix b = hs::unitary_exponential(m.hamiltonian.static_part(), t);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
  // Independent reference: Pade-based matrix exponential.
  const DenseMatrix gen = (-hs::kI * t) * m.hamiltonian.static_part().dense();
  EXPECT_LT((b - DenseMatrix(gen.exp())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, GroupComposition) {
  const hs::LindbladModel m = hs::build_ms_gate(recipe({5}), 0.2, 2, 1.0);
  const double t1 = 1.3, t2 = 2.1;
  const DenseMatrix u12 = hs::propagator(m, 0.0, t1 + t2).dense();
  const DenseMatrix u1 = hs::propagator(m, 0.0, t1).dense();
  const DenseMatrix u2 = hs::propagator(m, t1, t1 + t2).dense();
  EXPECT_LT((u12 - u2 * u1).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Kernels, GeneratorMatchesDenseReference) {
  hs::ModelRecipe r = recipe({4, 3}, 0.2, 0.05);
  r.params.kappa = 0.1;
  const hs::LindbladModel m = hs::build_red(r, 0.3);
  const int d = static_cast<int>(m.space.dim());
  const DenseMatrix rho = random_density(d, 11);
  hs::LindbladGenerator gen(m);
  DenseMatrix out;
  gen.apply(0.0, rho, out);
  const DenseMatrix ref = hs::lindblad_rhs_reference(m, 0.0, rho);
  EXPECT_LT((out - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Kernels, TimeDependentGeneratorMatchesReference) {
  const hs::LindbladModel m = hs::build_ms_gate(recipe({4}, 0.1, 0.02), 0.3, 2, 1.0);
  const int d = static_cast<int>(m.space.dim());
  const DenseMatrix rho = random_density(d, 5);
  hs::LindbladGenerator gen(m);
  for (double t : {0.0, 0.7, 2.4}) {
    DenseMatrix out;
    gen.apply(t, rho, out);
    EXPECT_LT((out - hs::lindblad_rhs_reference(m, t, rho)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kernels, ThreadCountDoesNotChangeResults) {
  const hs::LindbladModel m = hs::build_cooling_exact(recipe({5}, 0.3, 0.01), 0.2, 3);
  const int d = static_cast<int>(m.space.dim());
  const DenseMatrix rho = random_density(d, 3);
  hs::LindbladGenerator gen(m);
  const int before = omp_get_max_threads();
  DenseMatrix serial, parallel;
  omp_set_num_threads(1);
  gen.apply(0.0, rho, serial);
  omp_set_num_threads(4);
  gen.apply(0.0, rho, parallel);
  omp_set_num_threads(before);
  EXPECT_EQ((serial - parallel).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Kernels, SchroedingerRhs) {
  const hs::LindbladModel m = hs::build_jc(recipe({4}), 0.3);
  hs::LindbladGenerator gen(m);
  const DenseMatrix psi = DenseMatrix::Identity(m.space.dim(), 2);
  DenseMatrix out;
  gen.apply_schroedinger(0.0, psi, out);
  const DenseMatrix want = -hs::kI * (m.hamiltonian.static_part().dense() * psi);
  EXPECT_LT((out - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(States, CheckStateFlagsBadMatrices) {
  DenseMatrix rho(2, 2);
  rho << 1.2, 0.0, 0.0, -0.2;
  const auto c = hs::check_state(rho, 1e-6);
  EXPECT_FALSE(c.positive);
  EXPECT_NEAR(c.trace_error, 0.0, 1e-15);
  DenseMatrix nh = DenseMatrix::Identity(2, 2) * 0.5;
  nh(0, 1) = Complex(0.0, 0.1);
  EXPECT_NEAR(hs::check_state(nh, 1e-6).hermiticity_defect, 0.1, 1e-15);
}
