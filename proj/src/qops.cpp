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

#include "hybridspin/qops.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "hybridspin/errors.hpp"

namespace hybridspin {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix local_lowering(int n) {
  SparseMatrix a(n, n);
  std::vector<Triplet> t;
  for (int k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SparseMatrix local_pauli(Pauli which) {
  SparseMatrix s(2, 2);
  std::vector<Triplet> t;
  switch (which) {
    case Pauli::z:
      t = {{0, 0, -0.5}, {1, 1, 0.5}};
      break;
    case Pauli::plus:
      t = {{1, 0, 1.0}};
      break;
    case Pauli::minus:
      t = {{0, 1, 1.0}};
      break;
    case Pauli::x:
      t = {{1, 0, 1.0}, {0, 1, 1.0}};
      break;
  }
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

const Factor& checked_factor(const HilbertSpace& space, std::size_t index, FactorKind kind) {
  const Factor& f = space.factor(index);
  if (f.kind != kind) {
    throw FactorKindError("factor " + std::to_string(index) + " of " + space.describe() +
                          (kind == FactorKind::boson ? " is not a boson" : " is not a qubit"));
  }
  return f;
}

}  // namespace

Factor Factor::boson(int truncation) {
  if (truncation < 2) throw InvalidArgument("boson truncation must be >= 2");
  return {FactorKind::boson, truncation};
}

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  strides_.assign(factors_.size(), 1);
  dim_ = 1;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    if (factors_[k].dim < 2) throw InvalidArgument("factor dimension must be >= 2");
    strides_[k] = dim_;
    dim_ *= static_cast<std::size_t>(factors_[k].dim);
  }
}

const Factor& HilbertSpace::factor(std::size_t index) const {
  if (index >= factors_.size()) {
    throw InvalidArgument("factor index " + std::to_string(index) + " out of range for " +
                          describe());
  }
  return factors_[index];
}

int HilbertSpace::digit(std::size_t basis_index, std::size_t factor_index) const {
  return static_cast<int>((basis_index / strides_[factor_index]) %
                          static_cast<std::size_t>(factors_[factor_index].dim));
}

std::vector<int> HilbertSpace::digits(std::size_t basis_index) const {
  std::vector<int> out(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) out[k] = digit(basis_index, k);
  return out;
}

std::size_t HilbertSpace::index_of(std::span<const int> digits) const {
  if (digits.size() != factors_.size()) throw InvalidArgument("digit count mismatch");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= factors_[k].dim) {
      throw InvalidArgument("digit " + std::to_string(digits[k]) + " out of range for factor " +
                            std::to_string(k));
    }
    idx += static_cast<std::size_t>(digits[k]) * strides_[k];
  }
  return idx;
}

HilbertSpace HilbertSpace::concat(const HilbertSpace& other) const {
  std::vector<Factor> all = factors_;
  all.insert(all.end(), other.factors_.begin(), other.factors_.end());
  return HilbertSpace(std::move(all));
}

std::string HilbertSpace::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (k) os << " x ";
    if (factors_[k].kind == FactorKind::qubit) {
      os << "qubit";
    } else {
      os << "boson(" << factors_[k].dim << ")";
    }
  }
  return os.str();
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* context) {
  if (!(a == b)) {
    throw SpaceMismatchError(std::string(context) + ": space mismatch (" + a.describe() +
                             " vs " + b.describe() + ")");
  }
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(HilbertSpace space, SparseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(space_.dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw SpaceMismatchError("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + " but space dimension is " +
                             std::to_string(d));
  }
  matrix_.makeCompressed();
}

Operator Operator::identity(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  SparseMatrix m(d, d);
  m.setIdentity();
  return Operator(space, std::move(m));
}

Operator Operator::zero(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  return Operator(space, SparseMatrix(d, d));
}

Operator Operator::from_dense(const HilbertSpace& space, const DenseMatrix& matrix,
                              double drop_tol) {
  SparseMatrix m = matrix.sparseView(1.0, drop_tol);
  return Operator(space, std::move(m));
}

Complex Operator::element(std::size_t row, std::size_t col) const {
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

Operator Operator::adjoint() const {
  SparseMatrix a = matrix_.adjoint();
  return Operator(space_, std::move(a));
}

double Operator::hermiticity_defect() const {
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

void Operator::require_hermitian(const char* what, double tol) const {
  const double defect = hermiticity_defect();
  if (!(defect < tol)) {
    throw InvalidArgument(std::string(what) + " is not Hermitian (defect " +
                          std::to_string(defect) + ")");
  }
}

double Operator::max_abs_diff(const Operator& other) const {
  require_same_space(space_, other.space_, "max_abs_diff");
  SparseMatrix diff = matrix_ - other.matrix_;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_space(space_, rhs.space_, "operator+");
  matrix_ += rhs.matrix_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_space(space_, rhs.space_, "operator-");
  matrix_ -= rhs.matrix_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  matrix_ *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator*");
  SparseMatrix m = a.matrix_ * b.matrix_;
  return Operator(a.space_, std::move(m));
}

Operator tensor(const Operator& a, const Operator& b) {
  SparseMatrix m = Eigen::kroneckerProduct(a.sparse(), b.sparse()).eval();
  return Operator(a.space().concat(b.space()), std::move(m));
}

Operator tensor(std::initializer_list<Operator> ops) {
  if (ops.size() == 0) throw InvalidArgument("tensor of an empty operator list");
  auto it = ops.begin();
  Operator acc = *it++;
  for (; it != ops.end(); ++it) acc = tensor(acc, *it);
  return acc;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator embed(const HilbertSpace& space, std::size_t factor_index, const SparseMatrix& local) {
  const Factor& f = space.factor(factor_index);
  if (local.rows() != f.dim || local.cols() != f.dim) {
    throw SpaceMismatchError("local operator does not match factor dimension");
  }
  const std::size_t stride = space.stride(factor_index);
  const std::size_t d = space.dim();
  // Column-wise: local column c feeds every composite column whose digit is c.
  Eigen::SparseMatrix<Complex, Eigen::ColMajor> local_cols(local);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(local.nonZeros()) * (d / static_cast<std::size_t>(f.dim)));
  for (std::size_t col = 0; col < d; ++col) {
    const int c = space.digit(col, factor_index);
    for (decltype(local_cols)::InnerIterator it(local_cols, c); it; ++it) {
      const auto r = static_cast<std::ptrdiff_t>(it.row());
      const std::size_t row = col + static_cast<std::size_t>(r - c) * stride;
      t.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), it.value());
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.setFromTriplets(t.begin(), t.end());
  return Operator(space, std::move(m));
}

Operator annihilation(const HilbertSpace& space, std::size_t factor_index) {
  const Factor& f = checked_factor(space, factor_index, FactorKind::boson);
  return embed(space, factor_index, local_lowering(f.dim));
}

Operator creation(const HilbertSpace& space, std::size_t factor_index) {
  return annihilation(space, factor_index).adjoint();
}

Operator number(const HilbertSpace& space, std::size_t factor_index) {
  const Factor& f = checked_factor(space, factor_index, FactorKind::boson);
  SparseMatrix n(f.dim, f.dim);
  std::vector<Triplet> t;
  for (int k = 1; k < f.dim; ++k) t.emplace_back(k, k, static_cast<double>(k));
  n.setFromTriplets(t.begin(), t.end());
  return embed(space, factor_index, n);
}

Operator pauli(const HilbertSpace& space, std::size_t factor_index, Pauli which) {
  checked_factor(space, factor_index, FactorKind::qubit);
  return embed(space, factor_index, local_pauli(which));
}

Operator collective_spin(const HilbertSpace& space, std::span<const std::size_t> qubits,
                         Pauli which) {
  if (qubits.empty()) throw InvalidArgument("collective_spin needs at least one qubit");
  Operator acc = Operator::zero(space);
  for (std::size_t q : qubits) acc += pauli(space, q, which);
  return acc;
}

// ---------------------------------------------------------------------------
// States

StateVector::StateVector(HilbertSpace space, DenseVector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != space_.dim()) {
    throw SpaceMismatchError("state vector length does not match space dimension");
  }
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InvalidArgument("state vector is not normalized (norm " + std::to_string(norm) + ")");
  }
}

StateVector StateVector::basis(const HilbertSpace& space, std::span<const int> digits) {
  DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(space.dim()));
  v(static_cast<Eigen::Index>(space.index_of(digits))) = 1.0;
  return StateVector(space, std::move(v));
}

StateVector StateVector::coherent(const HilbertSpace& space, std::size_t factor_index,
                                  Complex alpha, std::span<const int> other_digits) {
  const Factor& f = checked_factor(space, factor_index, FactorKind::boson);
  if (other_digits.size() + 1 != space.num_factors()) {
    throw InvalidArgument("coherent: need one digit per non-coherent factor");
  }
  // Fock amplitudes via the recurrence c_{n} = c_{n-1} alpha / sqrt(n).
  std::vector<Complex> fock(static_cast<std::size_t>(f.dim));
  fock[0] = 1.0;
  for (int n = 1; n < f.dim; ++n) fock[n] = fock[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  double norm2 = 0.0;
  for (const auto& c : fock) norm2 += std::norm(c);
  std::vector<int> digits;
  digits.reserve(space.num_factors());
  for (std::size_t k = 0, j = 0; k < space.num_factors(); ++k) {
    digits.push_back(k == factor_index ? 0 : other_digits[j++]);
  }
  DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(space.dim()));
  const std::size_t base = space.index_of(digits);
  for (int n = 0; n < f.dim; ++n) {
    v(static_cast<Eigen::Index>(base + static_cast<std::size_t>(n) * space.stride(factor_index))) =
        fock[n] / std::sqrt(norm2);
  }
  return StateVector(space, std::move(v));
}

StateChecks check_state(const DenseMatrix& rho, double positivity_tol) {
  StateChecks c{};
  c.trace_error = std::abs(rho.trace() - Complex(1.0));
  c.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  DenseMatrix shifted = 0.5 * (rho + rho.adjoint());
  shifted.diagonal().array() += positivity_tol;
  Eigen::LLT<DenseMatrix> llt(shifted);
  c.positive = llt.info() == Eigen::Success;
  return c;
}

DensityMatrix::DensityMatrix(HilbertSpace space, DenseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(space_.dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw SpaceMismatchError("density matrix does not match space dimension");
  }
  const StateChecks c = check_state(matrix_, 1e-8);
  if (c.hermiticity_defect > 1e-10) throw InvalidArgument("density matrix is not Hermitian");
  if (c.trace_error > 1e-10) throw InvalidArgument("density matrix trace is not 1");
  if (!c.positive) throw InvalidArgument("density matrix has eigenvalue below -1e-8");
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DenseMatrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.space(), std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  DenseMatrix m = DenseMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(space, std::move(m));
}

DiagonalDensity::DiagonalDensity(HilbertSpace space, std::vector<double> populations)
    : space_(std::move(space)), populations_(std::move(populations)) {
  if (populations_.size() != space_.dim()) {
    throw SpaceMismatchError("population vector does not match space dimension");
  }
  double total = 0.0;
  for (double p : populations_) {
    if (p < 0.0) throw InvalidArgument("negative population");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("populations do not sum to 1");
}

DensityMatrix DiagonalDensity::to_dense() const {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(space_.dim()),
                                    static_cast<Eigen::Index>(space_.dim()));
  for (std::size_t i = 0; i < populations_.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = populations_[i];
  }
  return DensityMatrix(space_, std::move(m));
}

Complex trace_product(const DenseMatrix& rho, const SparseMatrix& obs) {
  // tr(rho O) = sum_ij rho_ji O_ij
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < obs.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(obs, i); it; ++it) {
      acc += rho(it.col(), i) * it.value();
    }
  }
  return acc;
}

Complex expectation(const StateVector& psi, const Operator& obs) {
  require_same_space(psi.space(), obs.space(), "expectation");
  return psi.amplitudes().dot(obs.sparse() * psi.amplitudes());
}

Complex expectation(const DensityMatrix& rho, const Operator& obs) {
  require_same_space(rho.space(), obs.space(), "expectation");
  return trace_product(rho.matrix(), obs.sparse());
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  require_same_space(rho.space(), target.space(), "fidelity");
  const DenseVector& t = target.amplitudes();
  return std::real(t.dot(rho.matrix() * t));
}

}  // namespace hybridspin
