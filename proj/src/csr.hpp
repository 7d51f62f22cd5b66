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

// Raw compressed-row kernels shared by the dense and sector solvers.

#pragma once

#include "hybridspin/qops.hpp"

namespace hybridspin::detail {

// acc[i] += c * (A x)[i] for a compressed row-major A.
inline void csr_matvec(const SparseMatrix& a, Complex c, const Complex* x, Complex* acc) {
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const Complex* val = a.valuePtr();
  const Eigen::Index rows = a.rows();
  for (Eigen::Index i = 0; i < rows; ++i) {
    Complex s{0.0, 0.0};
    for (auto k = outer[i]; k < outer[i + 1]; ++k) s += val[k] * x[inner[k]];
    acc[i] += c * s;
  }
}

// out += c * A * in for column-major `in` (A.cols() x cols) and `out`
// (A.rows() x cols).
inline void csr_apply(const SparseMatrix& a, Complex c, const Complex* in, Eigen::Index cols,
                      Complex* out) {
  const Eigen::Index in_rows = a.cols();
  const Eigen::Index out_rows = a.rows();
  for (Eigen::Index j = 0; j < cols; ++j) csr_matvec(a, c, in + j * in_rows, out + j * out_rows);
}

}  // namespace hybridspin::detail
