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

// Right-hand sides of the Lindblad and Schroedinger equations.
//
// LindbladGenerator is the production kernel: sparse operators, OpenMP over
// matrix columns, bit-identical results for any thread count. The dense
// serial functions are the reference used by tests and benchmarks.

#pragma once

#include <span>
#include <vector>

#include "hybridspin/models.hpp"
#include "hybridspin/qops.hpp"

namespace hybridspin {

/// Textbook dense evaluation:
/// -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2), L_k = sqrt(rate_k) c_k.
void lindblad_rhs_reference(const DenseMatrix& h, std::span<const DenseMatrix> jumps,
                            const DenseMatrix& rho, DenseMatrix& out);

/// Dense reference for a model at time t.
DenseMatrix lindblad_rhs_reference(const LindbladModel& model, double t, const DenseMatrix& rho);

class LindbladGenerator {
 public:
  explicit LindbladGenerator(const LindbladModel& model);

  std::size_t dim() const noexcept { return dim_; }

  /// out = L_t((rho + rho^dag) / 2). `out` is resized as needed.
  void apply(double t, const DenseMatrix& rho, DenseMatrix& out) const;

  /// -i H(t) psi for every column of `psi` (state vectors or propagators).
  /// Collapse operators are ignored.
  void apply_schroedinger(double t, const DenseMatrix& psi, DenseMatrix& out) const;

 private:
  struct Term {
    Coefficient coefficient;
    SparseMatrix op;
  };

  std::size_t dim_ = 0;
  SparseMatrix h_eff_;     // H_static - (i/2) sum_k L_k^dag L_k
  SparseMatrix h_static_;  // H_static
  std::vector<Term> terms_;
  std::vector<SparseMatrix> jumps_;  // sqrt(rate) c
  mutable DenseMatrix h_;
  mutable DenseMatrix x_;
  mutable DenseMatrix y_;
};

/// out.col(j) = sum_k coeffs[k] * ops[k] * in.col(j), OpenMP over columns.
void sparse_columns_apply(std::span<const SparseMatrix* const> ops, std::span<const Complex> coeffs,
                          const DenseMatrix& in, DenseMatrix& out);

}  // namespace hybridspin
