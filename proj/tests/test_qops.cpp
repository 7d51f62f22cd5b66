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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hybridspin/errors.hpp"
#include "hybridspin/qops.hpp"

namespace hs = hybridspin;
using hs::Complex;
using hs::DenseMatrix;

namespace {

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DenseMatrix local_annihilation(int d) {
  DenseMatrix a = DenseMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

TEST(Annihilation, TwoLevelBoson) {
  const hs::HilbertSpace s{hs::Factor::boson(2)};
  const DenseMatrix a = hs::annihilation(s, 0).dense();
  EXPECT_EQ(a(0, 1), Complex(1.0));
  EXPECT_EQ(a(0, 0), Complex(0.0));
  EXPECT_EQ(a(1, 0), Complex(0.0));
  EXPECT_EQ(a(1, 1), Complex(0.0));
}

TEST(Annihilation, FourLevelEntry) {
  const hs::HilbertSpace s{hs::Factor::boson(4)};
  EXPECT_NEAR(hs::annihilation(s, 0).element(2, 3).real(), 1.7320508075688772, 1e-15);
}

TEST(Annihilation, MatchesKroneckerConstruction) {
  const hs::HilbertSpace s{hs::Factor::qubit(), hs::Factor::boson(3)};
  const DenseMatrix got = hs::annihilation(s, 1).dense();
  const DenseMatrix want = kron(DenseMatrix::Identity(2, 2), local_annihilation(3));
  ASSERT_EQ(got.rows(), 6);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Annihilation, RejectsQubitFactor) {
  const hs::HilbertSpace s{hs::Factor::qubit(), hs::Factor::boson(3)};
  EXPECT_THROW(hs::annihilation(s, 0), hs::FactorKindError);
  EXPECT_THROW(hs::annihilation(s, 2), hs::InvalidArgument);
}

TEST(Pauli, SigmaZConvention) {
  const hs::HilbertSpace s{hs::Factor::qubit()};
  const DenseMatrix z = hs::pauli(s, 0, hs::Pauli::z).dense();
  EXPECT_EQ(z(0, 0), Complex(-0.5));
  EXPECT_EQ(z(1, 1), Complex(0.5));
  EXPECT_EQ(z(0, 1), Complex(0.0));
}

TEST(Pauli, XSquaredIsIdentity) {
  const hs::HilbertSpace s{hs::Factor::qubit()};
  const hs::Operator x = hs::pauli(s, 0, hs::Pauli::x);
  EXPECT_LT((x * x).max_abs_diff(hs::Operator::identity(s)), 1e-15);
}

TEST(Pauli, RaisingLoweringCommutator) {
  const hs::HilbertSpace s{hs::Factor::boson(3), hs::Factor::qubit()};
  const hs::Operator c =
      hs::commutator(hs::pauli(s, 1, hs::Pauli::plus), hs::pauli(s, 1, hs::Pauli::minus));
  EXPECT_LT(c.max_abs_diff(2.0 * hs::pauli(s, 1, hs::Pauli::z)), 1e-15);
}

TEST(CollectiveSpin, SingleSpinEqualsPauli) {
  const hs::HilbertSpace s{hs::Factor::boson(2), hs::Factor::qubit()};
  const std::size_t idx[] = {1};
  for (auto w : {hs::Pauli::x, hs::Pauli::plus, hs::Pauli::minus, hs::Pauli::z}) {
    EXPECT_LT(hs::collective_spin(s, idx, w).max_abs_diff(hs::pauli(s, 1, w)), 1e-15);
  }
}

TEST(CollectiveSpin, JxOnTwoSpinVacuum) {
  const hs::HilbertSpace s{hs::Factor::qubit(), hs::Factor::qubit()};
  const std::size_t idx[] = {0, 1};
  const hs::Operator jx = hs::collective_spin(s, idx, hs::Pauli::x);
  const hs::StateVector v = hs::StateVector::basis(s, {0, 0});
  const hs::DenseVector out = jx.dense() * v.amplitudes();
  EXPECT_EQ(out(s.index_of(std::vector<int>{1, 0})), Complex(1.0));
  EXPECT_EQ(out(s.index_of(std::vector<int>{0, 1})), Complex(1.0));
  EXPECT_EQ(out(0), Complex(0.0));
  EXPECT_EQ(out(3), Complex(0.0));
}

TEST(CollectiveSpin, JxSquaredSpectrumFourSpins) {
  const hs::HilbertSpace s{hs::Factor::qubit(), hs::Factor::qubit(), hs::Factor::qubit(),
                           hs::Factor::qubit()};
  const std::size_t idx[] = {0, 1, 2, 3};
  const hs::Operator jx = hs::collective_spin(s, idx, hs::Pauli::x);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig((jx * jx).dense());
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double v = eig.eigenvalues()(k);
    const double d = std::min({std::abs(v), std::abs(v - 4.0), std::abs(v - 16.0)});
    EXPECT_LT(d, 1e-12) << "eigenvalue " << v;
  }
}

TEST(Algebra, BosonCommutatorUnderTruncation) {
  const int d = 20;
  const hs::HilbertSpace s{hs::Factor::boson(d)};
  const DenseMatrix c =
      hs::commutator(hs::annihilation(s, 0), hs::creation(s, 0)).dense();
  for (int n = 0; n < d - 1; ++n) EXPECT_NEAR(c(n, n).real(), 1.0, 1e-12);
  EXPECT_NEAR(c(d - 1, d - 1).real(), 1.0 - d, 1e-12);
}

TEST(Algebra, AdjointIsInvolution) {
  const hs::HilbertSpace s{hs::Factor::boson(4), hs::Factor::qubit()};
  const hs::Operator a =
      hs::annihilation(s, 0) * hs::pauli(s, 1, hs::Pauli::plus) * Complex(0.3, -1.1) +
      hs::number(s, 0);
  EXPECT_EQ(a.adjoint().adjoint().max_abs_diff(a), 0.0);
}

TEST(Algebra, TensorOfIdentities) {
  const hs::Operator i2 = hs::Operator::identity(hs::HilbertSpace{hs::Factor::qubit()});
  const hs::Operator i3 = hs::Operator::identity(hs::HilbertSpace{hs::Factor::boson(3)});
  const hs::Operator t = hs::tensor(i2, i3);
  EXPECT_EQ(t.dim(), 6u);
  EXPECT_EQ(t.max_abs_diff(hs::Operator::identity(t.space())), 0.0);
}

TEST(Algebra, TensorMatchesKronecker) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  DenseMatrix a(3, 3), b(2, 2);
  for (auto* m : {&a, &b}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = Complex(n01(rng), n01(rng));
  }
  const hs::Operator oa = hs::Operator::from_dense(hs::HilbertSpace{hs::Factor::boson(3)}, a);
  const hs::Operator ob = hs::Operator::from_dense(hs::HilbertSpace{hs::Factor::qubit()}, b);
  EXPECT_LT((hs::tensor(oa, ob).dense() - kron(a, b)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Algebra, MismatchedSpacesRejected) {
  const hs::Operator a = hs::Operator::identity(hs::HilbertSpace{hs::Factor::boson(3)});
  const hs::Operator b = hs::Operator::identity(hs::HilbertSpace{hs::Factor::qubit()});
  EXPECT_THROW(a + b, hs::SpaceMismatchError);
  EXPECT_THROW(a * b, hs::SpaceMismatchError);
}

TEST(Expectation, NumberOperatorOnFockStates) {
  const hs::HilbertSpace s{hs::Factor::boson(5)};
  const hs::Operator n = hs::number(s, 0);
  EXPECT_EQ(hs::expectation(hs::StateVector::basis(s, {0}), n), Complex(0.0));
  EXPECT_NEAR(hs::expectation(hs::StateVector::basis(s, {1}), n).real(), 1.0, 1e-15);
  const auto rho = hs::DensityMatrix::from_pure(hs::StateVector::basis(s, {3}));
  EXPECT_NEAR(hs::expectation(rho, n).real(), 3.0, 1e-15);
}

TEST(Expectation, SigmaZOnGround) {
  const hs::HilbertSpace s{hs::Factor::qubit()};
  EXPECT_NEAR(hs::expectation(hs::StateVector::basis(s, {0}), hs::pauli(s, 0, hs::Pauli::z)).real(),
              -0.5, 1e-15);
}

TEST(Fidelity, PureAndOrthogonalAndMixed) {
  const hs::HilbertSpace s{hs::Factor::qubit(), hs::Factor::qubit(), hs::Factor::qubit(),
                           hs::Factor::qubit()};
  const hs::StateVector t = hs::StateVector::basis(s, {1, 0, 1, 1});
  EXPECT_NEAR(hs::fidelity(hs::DensityMatrix::from_pure(t), t), 1.0, 1e-15);
  EXPECT_NEAR(hs::fidelity(hs::DensityMatrix::from_pure(hs::StateVector::basis(s, {0, 0, 0, 0})), t),
              0.0, 1e-15);
  EXPECT_NEAR(hs::fidelity(hs::DensityMatrix::maximally_mixed(s), t), 1.0 / 16.0, 1e-15);
}

TEST(States, CoherentStateMeanOccupation) {
  const hs::HilbertSpace s{hs::Factor::boson(40), hs::Factor::qubit()};
  const int other[] = {0};
  const auto psi = hs::StateVector::coherent(s, 0, Complex(2.0, 0.0), other);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-14);
  EXPECT_NEAR(hs::expectation(psi, hs::number(s, 0)).real(), 4.0, 1e-9);
}

TEST(States, DensityValidation) {
  const hs::HilbertSpace s{hs::Factor::qubit()};
  DenseMatrix bad = DenseMatrix::Identity(2, 2);
  EXPECT_THROW(hs::DensityMatrix(s, bad), hs::InvalidArgument);  // trace 2
  DenseMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(hs::DensityMatrix(s, neg), hs::InvalidArgument);
}

TEST(HilbertSpace, DigitRoundTrip) {
  const hs::HilbertSpace s{hs::Factor::boson(3), hs::Factor::qubit(), hs::Factor::boson(4)};
  for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_EQ(s.index_of(s.digits(i)), i);
  // Factor 0 is the most significant digit.
  EXPECT_EQ(s.stride(0), 8u);
  EXPECT_EQ(s.stride(2), 1u);
}
