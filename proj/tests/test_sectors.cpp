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

// The block solver against the dense solver on every charge-conserving model.

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hybridspin/dynamics.hpp"
#include "hybridspin/errors.hpp"
#include "hybridspin/experiments.hpp"
#include "hybridspin/models.hpp"
#include "hybridspin/sectors.hpp"

namespace hs = hybridspin;

namespace {

struct Case {
  const char* name;
  hs::LindbladModel model;
  std::vector<int> weights;
  hs::InitialState initial;
};

hs::ModelRecipe recipe(std::vector<int> truncations) {
  hs::ModelRecipe r;
  r.truncations = std::move(truncations);
  r.params.gamma = 0.3;
  r.params.Gamma_m_s = 0.02;
  r.params.kappa = 0.05;
  return r;
}

std::vector<Case> cases() {
  std::vector<Case> out;
  {
    auto m = hs::build_jc(recipe({6}), 0.4);
    auto psi = hs::StateVector::basis(m.space, {2, 1});
    out.push_back({"jc", std::move(m), {1, 1}, psi});
  }
  {
    auto m = hs::build_anti_jc(recipe({9}), 0.2);
    auto psi = hs::StateVector::basis(m.space, {1, 0});
    out.push_back({"anti_jc", std::move(m), {1, -1}, psi});
  }
  {
    auto m = hs::build_red(recipe({4, 4}), 0.3);
    auto psi = hs::StateVector::basis(m.space, {1, 1, 0});
    out.push_back({"red", std::move(m), {1, 1, 2}, psi});
  }
  {
    auto m = hs::build_blue(recipe({5, 5}), 0.3);
    auto psi = hs::StateVector::basis(m.space, {1, 1, 0});
    out.push_back({"blue", std::move(m), {1, -1, 2}, psi});
  }
  {
    auto m = hs::build_cooling_exact(recipe({6}), 0.25, 3);
    std::vector<double> pops(m.space.dim(), 0.0);
    // Mixed mechanical populations, spins down.
    const double w[] = {0.1, 0.2, 0.3, 0.4};
    for (int n = 0; n < 4; ++n) pops[m.space.index_of(std::vector<int>{n, 0, 0, 0})] = w[n];
    hs::DiagonalDensity rho(m.space, pops);
    out.push_back({"cooling_exact", std::move(m), {1, 1, 1, 1}, std::move(rho)});
  }
  {
    auto r = recipe({12, 8});
    auto m = hs::build_cooling_hp(r, 0.1, 6, 2.0);
    auto psi = hs::StateVector::basis(m.space, {2, 0});
    out.push_back({"cooling_hp", std::move(m), {1, 1}, psi});
  }
  return out;
}

hs::EvolutionSpec spec_for(const Case& c) {
  hs::EvolutionSpec spec;
  spec.t_end = 15.0;
  spec.n_samples = 31;
  spec.initial = c.initial;
  for (std::size_t f = 0; f < c.model.space.num_factors(); ++f) {
    const auto& factor = c.model.space.factor(f);
    const std::string name = "f" + std::to_string(f);
    if (factor.kind == hs::FactorKind::boson) {
      spec.observables.push_back({name, hs::number(c.model.space, f)});
    } else {
      spec.observables.push_back({name, hs::pauli(c.model.space, f, hs::Pauli::z)});
    }
  }
  return spec;
}

double max_gap(const hs::TimeSeries& a, const hs::TimeSeries& b) {
  double gap = 0.0;
  for (std::size_t j = 0; j < a.columns.size(); ++j) {
    for (std::size_t k = 0; k < a.times.size(); ++k) {
      gap = std::max(gap, std::abs(a.columns[j][k] - b.columns[j][k]));
    }
  }
  return gap;
}

}  // namespace

TEST(Sectors, AgreeWithDenseSolver) {
  for (const Case& c : cases()) {
    const hs::EvolutionSpec spec = spec_for(c);
    const auto dense = hs::evolve_lindblad(c.model, spec);
    const auto lab = hs::evolve_lindblad_sectors(c.model, spec, c.weights);
    EXPECT_LT(max_gap(dense, lab), 1e-7) << c.name;
  }
}

TEST(Sectors, InteractionFrameAgreesWithLabFrame) {
  hs::SectorOptions inter;
  inter.frame = hs::SectorFrame::interaction;
  for (const Case& c : cases()) {
    const hs::EvolutionSpec spec = spec_for(c);
    const auto lab = hs::evolve_lindblad_sectors(c.model, spec, c.weights);
    const auto rot = hs::evolve_lindblad_sectors(c.model, spec, c.weights, inter);
    EXPECT_LT(max_gap(lab, rot), 1e-7) << c.name;
  }
}

TEST(Sectors, CoherentStateDropsOnlyInterSectorCoherence) {
  // Phase covariance: charge-diagonal observables do not see the coherences.
  auto m = hs::build_jc(recipe({20}), 0.3);
  const int other[] = {0};
  const auto psi = hs::StateVector::coherent(m.space, 0, hs::Complex(1.5, 0.0), other);
  hs::EvolutionSpec spec;
  spec.t_end = 10.0;
  spec.n_samples = 21;
  spec.initial = psi;
  spec.observables = {{"n", hs::number(m.space, 0)}, {"sz", hs::pauli(m.space, 1, hs::Pauli::z)}};
  const int w[] = {1, 1};
  const auto dense = hs::evolve_lindblad(m, spec);
  const auto blocks = hs::evolve_lindblad_sectors(m, spec, w);
  EXPECT_LT(max_gap(dense, blocks), 1e-7);
  EXPECT_GT(blocks.metadata.at("dropped_coherence").get<double>(), 0.1);
}

TEST(Sectors, ChargeShiftBookkeeping) {
  const hs::HilbertSpace s{hs::Factor::boson(4), hs::Factor::qubit()};
  const int w[] = {1, 1};
  const auto q = hs::basis_charges(s, w);
  EXPECT_EQ(q[s.index_of(std::vector<int>{3, 1})], 4);
  EXPECT_EQ(hs::charge_shift(hs::annihilation(s, 0), q), -1);
  EXPECT_EQ(hs::charge_shift(hs::pauli(s, 1, hs::Pauli::plus), q), 1);
  EXPECT_EQ(hs::charge_shift(hs::Operator::zero(s), q), 0);
  EXPECT_THROW(hs::charge_shift(hs::pauli(s, 1, hs::Pauli::x), q), hs::InvalidArgument);
}

TEST(Sectors, NonConservingModelRejected) {
  const auto m = hs::build_ms_gate(recipe({4}), 0.1, 2, 1.0);
  hs::EvolutionSpec spec;
  spec.initial = hs::StateVector::basis(m.space, {0, 0, 0});
  const int w[] = {1, 1, 1};
  EXPECT_THROW(hs::evolve_lindblad_sectors(m, spec, w), hs::InvalidArgument);
}

TEST(Sectors, NonDiagonalObservableRejected) {
  const auto m = hs::build_jc(recipe({4}), 0.1);
  hs::EvolutionSpec spec;
  spec.initial = hs::StateVector::basis(m.space, {1, 0});
  spec.observables = {{"sx", hs::pauli(m.space, 1, hs::Pauli::x)}};
  const int w[] = {1, 1};
  EXPECT_THROW(hs::evolve_lindblad_sectors(m, spec, w), hs::InvalidArgument);
}

TEST(Sectors, AutomaticSolverChoiceIsTransparent) {
  hs::RunConfig cfg;
  cfg.type = hs::ModelType::red;
  cfg.recipe.params.g = 70.0;
  cfg.recipe.params.g0 = 1.0;
  cfg.recipe.params.J = 2800.0;
  cfg.recipe.params.gamma = 1.0;
  cfg.recipe.params.Gamma_m_s = 1e-3;
  cfg.recipe.params.kappa = 0.1;
  cfg.recipe.r = 2.0;
  cfg.recipe.truncations = {4, 4};
  cfg.initial = hs::InitialSpec::parse("basis:1,1,0");
  cfg.t_end = 20.0;
  cfg.n_samples = 41;
  const auto automatic = hs::simulate(cfg);
  EXPECT_EQ(automatic.metadata.at("solver").get<std::string>(), "lindblad-sectors");
  cfg.solver = hs::SolverKind::dense;
  const auto dense = hs::simulate(cfg);
  for (const char* name : {"n_a", "n_b", "sigma_z"}) {
    for (std::size_t k = 0; k < dense.times.size(); ++k) {
      EXPECT_NEAR(automatic.column(name)[k], dense.column(name)[k], 1e-8) << name;
    }
  }
}
