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

#include "hybridspin/kernels.hpp"

#include <cmath>

#include "csr.hpp"
#include "hybridspin/errors.hpp"

namespace hybridspin {

void lindblad_rhs_reference(const DenseMatrix& h, std::span<const DenseMatrix> jumps,
                            const DenseMatrix& rho, DenseMatrix& out) {
  out = -kI * (h * rho - rho * h);
  for (const DenseMatrix& l : jumps) {
    const DenseMatrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
}

DenseMatrix lindblad_rhs_reference(const LindbladModel& model, double t, const DenseMatrix& rho) {
  std::vector<DenseMatrix> jumps;
  for (const auto& c : model.collapse) jumps.push_back(std::sqrt(c.rate) * c.op.dense());
  DenseMatrix out;
  lindblad_rhs_reference(model.hamiltonian.at(t).dense(), jumps, rho, out);
  return out;
}

namespace {

void columns_apply(std::span<const SparseMatrix* const> ops, std::span<const Complex> coeffs,
                   const DenseMatrix& in, DenseMatrix& out, bool accumulate) {
  const Eigen::Index n = in.rows();
  const Eigen::Index cols = in.cols();
  if (!accumulate) out.setZero(n, cols);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex* x = in.data() + j * n;
    Complex* acc = out.data() + j * n;
    for (std::size_t k = 0; k < ops.size(); ++k) detail::csr_matvec(*ops[k], coeffs[k], x, acc);
  }
}

SparseMatrix compressed(SparseMatrix m) {
  m.makeCompressed();
  return m;
}

}  // namespace

void sparse_columns_apply(std::span<const SparseMatrix* const> ops, std::span<const Complex> coeffs,
                          const DenseMatrix& in, DenseMatrix& out) {
  if (ops.size() != coeffs.size()) throw InvalidArgument("ops/coeffs size mismatch");
  for (const SparseMatrix* op : ops) {
    if (!op->isCompressed()) throw InvalidArgument("sparse operator must be compressed");
    if (op->cols() != in.rows()) throw SpaceMismatchError("operator/state dimension mismatch");
  }
  columns_apply(ops, coeffs, in, out, false);
}

LindbladGenerator::LindbladGenerator(const LindbladModel& model) : dim_(model.space.dim()) {
  require_same_space(model.space, model.hamiltonian.space(), "LindbladGenerator");
  h_static_ = compressed(model.hamiltonian.static_part().sparse());
  SparseMatrix damping(dim_, dim_);
  for (const auto& c : model.collapse) {
    if (c.rate == 0.0) continue;
    SparseMatrix l = std::sqrt(c.rate) * c.op.sparse();
    SparseMatrix ldl = SparseMatrix(l.adjoint()) * l;
    damping += ldl;
    jumps_.push_back(compressed(std::move(l)));
  }
  h_eff_ = compressed(h_static_ - Complex(0.0, 0.5) * damping);
  for (const auto& term : model.hamiltonian.terms()) {
    terms_.push_back({term.coefficient, compressed(term.op.sparse())});
  }
}

void LindbladGenerator::apply(double t, const DenseMatrix& rho, DenseMatrix& out) const {
  const Eigen::Index n = static_cast<Eigen::Index>(dim_);
  if (rho.rows() != n || rho.cols() != n) throw SpaceMismatchError("rho has wrong dimension");

  std::vector<const SparseMatrix*> ops{&h_eff_};
  std::vector<Complex> coeffs{Complex(1.0)};
  for (const auto& term : terms_) {
    ops.push_back(&term.op);
    coeffs.push_back(term.coefficient(t));
  }
  // The formulas below assume rho = rho^dag. Feeding the Hermitian part keeps
  // rounding-level anti-Hermitian components from being amplified.
  h_.resize(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) h_(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
  }
  // X = H_eff(t) rho; the coherent part plus anticommutator is -i (X - X^dag).
  columns_apply(ops, coeffs, h_, x_, false);
  out.resize(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = -kI * x_(i, j) + kI * std::conj(x_(j, i));
    }
  }
  // Jump terms L rho L^dag = L (L rho)^dag.
  const Complex one(1.0);
  for (const SparseMatrix& l : jumps_) {
    const SparseMatrix* lp = &l;
    columns_apply({&lp, 1}, {&one, 1}, h_, y_, false);
    x_ = y_.adjoint();
    columns_apply({&lp, 1}, {&one, 1}, x_, out, true);
  }
}

void LindbladGenerator::apply_schroedinger(double t, const DenseMatrix& psi,
                                           DenseMatrix& out) const {
  if (psi.rows() != static_cast<Eigen::Index>(dim_)) {
    throw SpaceMismatchError("state has wrong dimension");
  }
  std::vector<const SparseMatrix*> ops{&h_static_};
  std::vector<Complex> coeffs{-kI};
  for (const auto& term : terms_) {
    ops.push_back(&term.op);
    coeffs.push_back(-kI * term.coefficient(t));
  }
  columns_apply(ops, coeffs, psi, out, false);
}

}  // namespace hybridspin
