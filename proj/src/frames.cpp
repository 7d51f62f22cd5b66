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

#include "hybridspin/frames.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "hybridspin/errors.hpp"

namespace hybridspin {

double RateUnit::to_hz(double value) const {
  if (!has_si()) throw InvalidArgument("unit '" + name + "' has no SI value");
  return value * angular_si / (2.0 * std::numbers::pi);
}

double RateUnit::to_seconds(double time) const {
  if (!has_si()) throw InvalidArgument("unit '" + name + "' has no SI value");
  return time / angular_si;
}

void SystemParams::validate() const {
  const auto nonneg = [](double v, const char* field) {
    if (!(v >= 0.0)) throw InvalidArgument(std::string("negative value for ") + field);
  };
  nonneg(gamma, "gamma");
  nonneg(Gamma_m_s, "Gamma_m_s");
  nonneg(kappa, "kappa");
  nonneg(n_cav, "n_cav");
  nonneg(lambda_ref, "lambda_ref");
  if (N_spins < 1) throw InvalidArgument("N_spins must be >= 1");
}

SqueezeParams squeeze_params(double delta_m, double omega_p_drive, double j_m, double g0) {
  if (!(delta_m > 0.0)) throw InvalidArgument("Delta_m must be positive");
  if (!(std::abs(omega_p_drive) < delta_m)) {
    throw UnstableDriveError("|Omega_p| >= Delta_m: squeezing parameter diverges");
  }
  SqueezeParams s;
  s.alpha = omega_p_drive / delta_m;
  s.r = 0.25 * std::log((1.0 + s.alpha) / (1.0 - s.alpha));
  s.delta_m_s = delta_m * std::sqrt(1.0 - s.alpha * s.alpha);
  s.g0_s_amplitude = g0 * std::exp(s.r);
  s.jm_s = j_m * std::exp(2.0 * s.r) / 2.0;
  return s;
}

SqueezeParams squeeze_params_from_r(double delta_m, double r, double j_m, double g0) {
  if (!(delta_m > 0.0)) throw InvalidArgument("Delta_m must be positive");
  SqueezeParams s;
  s.r = r;
  s.alpha = std::tanh(2.0 * r);
  // sqrt(1 - tanh^2) = 1/cosh, evaluated without cancellation for large r.
  s.delta_m_s = delta_m / std::cosh(2.0 * r);
  s.g0_s_amplitude = g0 * std::exp(r);
  s.jm_s = j_m * std::exp(2.0 * r) / 2.0;
  return s;
}

Operator squeeze_operator_transform(const Operator& op, std::size_t factor_index, double r) {
  const HilbertSpace& space = op.space();
  if (space.factor(factor_index).kind != FactorKind::boson) {
    throw FactorKindError("squeeze transform needs a boson factor");
  }
  const Operator b = annihilation(space, factor_index);
  const Operator bd = b.adjoint();
  const DenseMatrix generator = (0.5 * r) * (b * b - bd * bd).dense();
  const DenseMatrix u = generator.exp();
  const DenseMatrix out = u.adjoint() * op.dense() * u;
  return Operator::from_dense(space, out, 1e-15);
}

Operator squeeze_operator_transform(const OperatorBuilder& build, const HilbertSpace& space,
                                    std::size_t factor_index, double r, int padding) {
  const Factor& f = space.factor(factor_index);
  if (f.kind != FactorKind::boson) throw FactorKindError("squeeze transform needs a boson factor");
  if (padding < 0) {
    // A squeezed Fock state |n> spreads to about n e^{2|r|} quanta.
    padding = static_cast<int>(std::ceil(f.dim * std::exp(2.0 * std::abs(r)))) + 40;
  }
  std::vector<Factor> wide_factors = space.factors();
  wide_factors[factor_index] = Factor::boson(f.dim + padding);
  const HilbertSpace wide(std::move(wide_factors));
  const Operator op = build(wide);
  require_same_space(op.space(), wide, "squeeze_operator_transform");
  const DenseMatrix full = squeeze_operator_transform(op, factor_index, r).dense();

  // Restrict to basis states whose digit on the factor fits the original cutoff.
  std::vector<Eigen::Index> keep;
  keep.reserve(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    keep.push_back(static_cast<Eigen::Index>(wide.index_of(space.digits(i))));
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  DenseMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = full(keep[i], keep[j]);
  }
  return Operator::from_dense(space, out, 1e-15);
}

Eigen::Matrix3d mechanical_supermode_matrix() {
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix3d m;
  // b_+ , b_- , b_0  over  (L, T, R)
  m << 0.5, h, 0.5,
       0.5, -h, 0.5,
       h, 0.0, -h;
  return m;
}

OpticalSupermodes optical_supermode_matrix(double theta, double J) {
  if (!(J > 0.0)) throw InvalidArgument("J must be positive");
  OpticalSupermodes out;
  out.E = std::sqrt(2.0 * J * J + theta * theta);
  const double E = out.E;
  const double r1 = J / E;
  const double r2 = theta / E;
  // Eigenvector for eigenvalue l: ((l - Theta)/2E, J/E, (l + Theta)/2E).
  out.matrix << r1, r2, -r1,
                (E - theta) / (2 * E), r1, (E + theta) / (2 * E),
                (E + theta) / (2 * E), -r1, (E - theta) / (2 * E);
  return out;
}

Eigen::Matrix3d mechanical_single_excitation(double delta, double jm) {
  Eigen::Matrix3d h;
  h << delta, jm, 0.0,
       jm, delta, jm,
       0.0, jm, delta;
  return h;
}

Eigen::Matrix3d optical_single_excitation(double theta, double J) {
  Eigen::Matrix3d h;
  h << -theta, J, 0.0,
       J, 0.0, J,
       0.0, J, theta;
  return h;
}

double lambda_enhanced(const SystemParams& p, double r) {
  if (!(p.J > 0.0)) throw InvalidArgument("J must be positive");
  return p.n_bar_cav() * p.g * p.g0 * std::exp(r) / (4.0 * p.J);
}

double lambda_tripartite(const SystemParams& p, double r) {
  if (!(p.J > 0.0)) throw InvalidArgument("J must be positive");
  return p.g * p.g0 * std::exp(r) / (4.0 * p.J);
}

double cooperativity(double lambda, double gamma_m_s, double gamma) {
  if (!(gamma_m_s > 0.0) || !(gamma > 0.0)) {
    throw InvalidArgument("cooperativity needs positive dissipation rates");
  }
  return lambda * lambda / (gamma_m_s * gamma);
}

}  // namespace hybridspin
