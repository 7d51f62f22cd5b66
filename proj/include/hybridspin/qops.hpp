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

// Finite-dimensional operator algebra on tensor products of qubits and
// truncated bosonic modes.
//
// Basis conventions:
//   * qubit basis is (|0>, |1>); sigma_z = diag(-1/2, +1/2)
//   * Fock basis is ascending |0>, |1>, ..., |n-1>
//   * factor 0 is the most significant digit of the composite index, so
//     tensor(A, B) is the Kronecker product A (x) B.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hybridspin {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr Complex kI{0.0, 1.0};

enum class FactorKind { qubit, boson };

struct Factor {
  FactorKind kind;
  int dim;

  static Factor qubit() { return {FactorKind::qubit, 2}; }
  /// Fock states |0> ... |truncation-1>; truncation >= 2.
  static Factor boson(int truncation);

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered list of subsystem factors defining the tensor-product structure.
class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<Factor> factors);
  HilbertSpace(std::initializer_list<Factor> factors)
      : HilbertSpace(std::vector<Factor>(factors)) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_factors() const noexcept { return factors_.size(); }
  const Factor& factor(std::size_t index) const;
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  /// Index step of one unit on the given factor.
  std::size_t stride(std::size_t index) const { return strides_.at(index); }

  /// Digit of the given factor inside a composite basis index.
  int digit(std::size_t basis_index, std::size_t factor_index) const;
  std::vector<int> digits(std::size_t basis_index) const;
  std::size_t index_of(std::span<const int> digits) const;

  /// Concatenation of factor lists; this space's factors come first.
  HilbertSpace concat(const HilbertSpace& other) const;

  /// Human-readable factor list, e.g. "boson(6) x qubit".
  std::string describe() const;

  friend bool operator==(const HilbertSpace& a, const HilbertSpace& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
};

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* context);

/// Linear operator on a HilbertSpace. Immutable value type; stored sparse.
class Operator {
 public:
  Operator(HilbertSpace space, SparseMatrix matrix);

  static Operator identity(const HilbertSpace& space);
  static Operator zero(const HilbertSpace& space);
  static Operator from_dense(const HilbertSpace& space, const DenseMatrix& matrix,
                             double drop_tol = 0.0);

  const HilbertSpace& space() const noexcept { return space_; }
  const SparseMatrix& sparse() const noexcept { return matrix_; }
  DenseMatrix dense() const { return DenseMatrix(matrix_); }
  std::size_t dim() const noexcept { return space_.dim(); }
  Complex element(std::size_t row, std::size_t col) const;

  Operator adjoint() const;
  /// max |M - M^dagger| over all elements.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-10) const { return hermiticity_defect() < tol; }
  /// Throws InvalidArgument when the Hermiticity defect exceeds tol.
  void require_hermitian(const char* what, double tol = 1e-10) const;
  /// max |A - B| elementwise.
  double max_abs_diff(const Operator& other) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, double s) { return a *= Complex(s); }
  friend Operator operator*(double s, Operator a) { return a *= Complex(s); }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  HilbertSpace space_;
  SparseMatrix matrix_;
};

Operator tensor(const Operator& a, const Operator& b);
Operator tensor(std::initializer_list<Operator> ops);
Operator commutator(const Operator& a, const Operator& b);

/// Embed a single-factor operator (dim x dim of that factor) into the space.
Operator embed(const HilbertSpace& space, std::size_t factor_index, const SparseMatrix& local);

Operator annihilation(const HilbertSpace& space, std::size_t factor_index);
Operator creation(const HilbertSpace& space, std::size_t factor_index);
Operator number(const HilbertSpace& space, std::size_t factor_index);

enum class Pauli { z, plus, minus, x };

/// sigma_z = (|1><1| - |0><0|)/2, sigma_+ = |1><0|, sigma_- = |0><1|,
/// sigma_x = sigma_+ + sigma_-.
Operator pauli(const HilbertSpace& space, std::size_t factor_index, Pauli which);

/// Sum of embedded single-qubit operators over the listed factors.
Operator collective_spin(const HilbertSpace& space, std::span<const std::size_t> qubits,
                         Pauli which);

/// Normalized pure state.
class StateVector {
 public:
  StateVector(HilbertSpace space, DenseVector amplitudes);

  static StateVector basis(const HilbertSpace& space, std::span<const int> digits);
  static StateVector basis(const HilbertSpace& space, std::initializer_list<int> digits) {
    return basis(space, std::span<const int>(digits.begin(), digits.size()));
  }
  /// Coherent state of one boson factor tensored with basis digits elsewhere.
  /// The amplitude is renormalized after truncation.
  static StateVector coherent(const HilbertSpace& space, std::size_t factor_index, Complex alpha,
                              std::span<const int> other_digits);

  const HilbertSpace& space() const noexcept { return space_; }
  const DenseVector& amplitudes() const noexcept { return amps_; }

 private:
  HilbertSpace space_;
  DenseVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  DensityMatrix(HilbertSpace space, DenseMatrix matrix);
  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const DenseMatrix& matrix() const noexcept { return matrix_; }

 private:
  HilbertSpace space_;
  DenseMatrix matrix_;
};

/// Density matrix diagonal in the product basis, stored as populations.
class DiagonalDensity {
 public:
  DiagonalDensity(HilbertSpace space, std::vector<double> populations);

  const HilbertSpace& space() const noexcept { return space_; }
  const std::vector<double>& populations() const noexcept { return populations_; }
  DensityMatrix to_dense() const;

 private:
  HilbertSpace space_;
  std::vector<double> populations_;
};

struct StateChecks {
  double trace_error;
  double hermiticity_defect;
  bool positive;  ///< min eigenvalue >= -positivity_tol
};

/// Trace, Hermiticity and positivity diagnostics of a raw matrix.
StateChecks check_state(const DenseMatrix& rho, double positivity_tol);

Complex expectation(const StateVector& psi, const Operator& obs);
Complex expectation(const DensityMatrix& rho, const Operator& obs);
/// tr(rho O) for a raw matrix; O(nnz).
Complex trace_product(const DenseMatrix& rho, const SparseMatrix& obs);

/// <target| rho |target>.
double fidelity(const DensityMatrix& rho, const StateVector& target);

}  // namespace hybridspin
