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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hybridspin/config.hpp"
#include "hybridspin/errors.hpp"
#include "hybridspin/frames.hpp"

namespace hs = hybridspin;
using hs::DenseMatrix;

namespace {

std::vector<double> sorted_eigenvalues(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  std::vector<double> v(eig.eigenvalues().data(), eig.eigenvalues().data() + 3);
  std::sort(v.begin(), v.end());
  return v;
}

// fig2-style parameters: frequencies in units of g, g/2pi = 1 GHz.
hs::SystemParams ghz_params(double n_bar) {
  hs::SystemParams p;
  p.unit = hs::RateUnit::from_hz("g", 1e9);
  p.g = 1.0;
  p.g0 = 1e-3;
  p.J = 10.0;
  p.set_n_bar_cav(n_bar);
  return p;
}

}  // namespace

TEST(SqueezeParams, NoDrive) {
  const auto s = hs::squeeze_params(2.0, 0.0, 0.6, 0.1);
  EXPECT_EQ(s.r, 0.0);
  EXPECT_DOUBLE_EQ(s.delta_m_s, 2.0);
  EXPECT_DOUBLE_EQ(s.jm_s, 0.3);
  EXPECT_DOUBLE_EQ(s.g0_s_amplitude, 0.1);
}

TEST(SqueezeParams, AlphaPointNine) {
  const auto s = hs::squeeze_params(1.0, 0.9);
  EXPECT_NEAR(s.r, 0.25 * std::log(19.0), 1e-15);
  EXPECT_NEAR(s.r, 0.73611, 5e-6);
  EXPECT_NEAR(s.delta_m_s, 0.43589, 5e-6);
}

TEST(SqueezeParams, RoundTripFromR) {
  const double dm = 3.7;
  const auto s = hs::squeeze_params(dm, dm * std::tanh(4.0));
  EXPECT_NEAR(s.r, 2.0, 1e-12);
  const auto t = hs::squeeze_params_from_r(dm, 2.0);
  EXPECT_NEAR(t.delta_m_s, s.delta_m_s, 1e-12 * dm);
}

TEST(SqueezeParams, UnstableDriveRejected) {
  EXPECT_THROW(hs::squeeze_params(1.0, 1.0), hs::UnstableDriveError);
  EXPECT_THROW(hs::squeeze_params(1.0, -1.5), hs::UnstableDriveError);
}

TEST(SqueezeTransform, ZeroIsIdentity) {
  const hs::HilbertSpace s{hs::Factor::boson(12), hs::Factor::qubit()};
  const hs::Operator b = hs::annihilation(s, 0);
  EXPECT_LT(hs::squeeze_operator_transform(b, 0, 0.0).max_abs_diff(b), 1e-15);
}

TEST(SqueezeTransform, BogoliubovClosedForm) {
  const double r = 0.5;
  const hs::HilbertSpace s{hs::Factor::boson(40)};
  const hs::Operator t = hs::squeeze_operator_transform(
      [](const hs::HilbertSpace& w) { return hs::annihilation(w, 0); }, s, 0, r);
  const DenseMatrix want =
      (std::cosh(r) * hs::annihilation(s, 0) - std::sinh(r) * hs::creation(s, 0)).dense();
  EXPECT_LT((t.dense() - want).topLeftCorner(20, 20).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SqueezeTransform, PreservesCommutator) {
  const double r = 0.5;
  const hs::HilbertSpace s{hs::Factor::boson(40)};
  const hs::Operator b = hs::squeeze_operator_transform(
      [](const hs::HilbertSpace& w) { return hs::annihilation(w, 0); }, s, 0, r);
  const hs::Operator bd = hs::squeeze_operator_transform(
      [](const hs::HilbertSpace& w) { return hs::creation(w, 0); }, s, 0, r);
  const DenseMatrix c = hs::commutator(b, bd).dense();
  EXPECT_LT((c - DenseMatrix::Identity(40, 40)).topLeftCorner(20, 20).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SqueezeTransform, MatrixOverloadAccurateFarBelowCutoff) {
  const double r = 0.5;
  const hs::HilbertSpace s{hs::Factor::boson(80)};
  const hs::Operator t = hs::squeeze_operator_transform(hs::annihilation(s, 0), 0, r);
  const DenseMatrix want =
      (std::cosh(r) * hs::annihilation(s, 0) - std::sinh(r) * hs::creation(s, 0)).dense();
  EXPECT_LT((t.dense() - want).topLeftCorner(10, 10).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Supermodes, MechanicalMatrixOrthogonal) {
  const Eigen::Matrix3d m = hs::mechanical_supermode_matrix();
  EXPECT_LT((m * m.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  const double h = 1.0 / std::numbers::sqrt2;
  EXPECT_NEAR(m(2, 0), h, 1e-15);
  EXPECT_NEAR(m(2, 1), 0.0, 1e-15);
  EXPECT_NEAR(m(2, 2), -h, 1e-15);
}

TEST(Supermodes, MechanicalSingleExcitationSpectrum) {
  const double d = 1.3, jm = 0.4;
  const auto ev = sorted_eigenvalues(hs::mechanical_single_excitation(d, jm));
  EXPECT_NEAR(ev[0], d - std::sqrt(2.0) * jm, 1e-12);
  EXPECT_NEAR(ev[1], d, 1e-12);
  EXPECT_NEAR(ev[2], d + std::sqrt(2.0) * jm, 1e-12);
  // The b_0 row is the eigenvector with eigenvalue Delta.
  const Eigen::Vector3d b0 = hs::mechanical_supermode_matrix().row(2).transpose();
  EXPECT_LT((hs::mechanical_single_excitation(d, jm) * b0 - d * b0).norm(), 1e-12);
}

TEST(Supermodes, OpticalSymmetricPoint) {
  const double J = 2.5;
  const auto o = hs::optical_supermode_matrix(0.0, J);
  EXPECT_NEAR(o.E, std::sqrt(2.0) * J, 1e-14);
  // The dark mode carries no weight on the central cavity.
  EXPECT_NEAR(o.matrix(0, 1), 0.0, 1e-15);
}

TEST(Supermodes, OpticalEnergyAtThetaEqualJ) {
  EXPECT_NEAR(hs::optical_supermode_matrix(1.7, 1.7).E, std::sqrt(3.0) * 1.7, 1e-14);
}

TEST(Supermodes, OpticalSpectrumAndRows) {
  for (double theta : {-0.8, 0.0, 0.35, 2.0}) {
    const double J = 1.1;
    const auto o = hs::optical_supermode_matrix(theta, J);
    const Eigen::Matrix3d h = hs::optical_single_excitation(theta, J);
    const auto ev = sorted_eigenvalues(h);
    EXPECT_NEAR(ev[0], -o.E, 1e-10);
    EXPECT_NEAR(ev[1], 0.0, 1e-10);
    EXPECT_NEAR(ev[2], o.E, 1e-10);
    const double want[] = {0.0, o.E, -o.E};
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d v = o.matrix.row(k).transpose();
      EXPECT_LT((h * v - want[k] * v).norm(), 1e-12) << "theta " << theta << " row " << k;
    }
    EXPECT_LT((o.matrix * o.matrix.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(Coupling, LambdaAtUnitAmplitude) {
  const hs::SystemParams p = ghz_params(1.0);
  const double lam = hs::lambda_enhanced(p, 0.0);
  EXPECT_NEAR(p.unit.to_hz(lam), 25e3, 1e-6);
  EXPECT_NEAR(lam / 1e-4, 0.25, 1e-12);
}

TEST(Coupling, LambdaAmplitudeHundredRTwo) {
  const hs::SystemParams p = ghz_params(100.0);
  const double lam = hs::lambda_enhanced(p, 2.0);
  EXPECT_NEAR(p.unit.to_hz(lam) / 1e6, 18.47, 0.005);
  EXPECT_NEAR(lam / 1e-4, 184.7, 0.05);
}

TEST(Coupling, LambdaScalings) {
  const hs::SystemParams p = ghz_params(3.0);
  const hs::SystemParams q = ghz_params(6.0);
  EXPECT_NEAR(hs::lambda_enhanced(q, 0.7) / hs::lambda_enhanced(p, 0.7), 2.0, 1e-14);
  EXPECT_NEAR(hs::lambda_enhanced(p, 1.7) / hs::lambda_enhanced(p, 0.7), std::exp(1.0), 1e-13);
}

TEST(Coupling, TripartiteFigFourValues) {
  const hs::SystemParams& p = hs::figure_preset("fig4").params;
  EXPECT_NEAR(hs::lambda_tripartite(p, 0.0), 6.25e-3, 1e-15);
  EXPECT_NEAR(hs::lambda_tripartite(p, 4.0), 0.341, 5e-4);
  hs::SystemParams unit = p;
  unit.set_n_bar_cav(1.0);
  EXPECT_DOUBLE_EQ(hs::lambda_enhanced(unit, 0.0), hs::lambda_tripartite(unit, 0.0));
}

TEST(Coupling, Cooperativity) {
  EXPECT_NEAR(hs::cooperativity(18.47, 1.0, 15.0), 22.7, 0.05);
  EXPECT_EQ(hs::cooperativity(0.0, 1.0, 15.0), 0.0);
  EXPECT_NEAR(hs::cooperativity(10.0, 0.3, 2.0) / hs::cooperativity(1.0, 0.3, 2.0), 100.0, 1e-12);
}

TEST(RateUnit, SiConversions) {
  const hs::RateUnit u = hs::RateUnit::from_hz("gamma", 15e6);
  EXPECT_NEAR(u.to_hz(2.0), 30e6, 1e-6);
  EXPECT_NEAR(u.to_seconds(1.0), 1.0 / (2.0 * std::numbers::pi * 15e6), 1e-24);
  EXPECT_THROW(hs::RateUnit{}.to_hz(1.0), hs::InvalidArgument);
}
