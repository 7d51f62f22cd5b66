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

// Squeezed-frame parameters, supermode transforms and the closed-form
// coupling/cooperativity formulas of the hybrid spin-optomechanical setup.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "hybridspin/qops.hpp"

namespace hybridspin {

/// Every parameter set stores frequencies as multiples of one base rate.
/// `angular_si` is the base rate in rad/s, or 0 when the base has no fixed
/// absolute value.
struct RateUnit {
  std::string name = "1";
  double angular_si = 0.0;

  bool has_si() const noexcept { return angular_si > 0.0; }
  /// value [base units] -> ordinary frequency in Hz (value * base / 2pi).
  double to_hz(double value) const;
  /// time [1/base] -> seconds.
  double to_seconds(double time) const;
  /// Base rate fixed by `unit_over_2pi_hz` = base/2pi in Hz.
  static RateUnit from_hz(std::string name, double unit_over_2pi_hz) {
    return {std::move(name), 2.0 * std::numbers::pi * unit_over_2pi_hz};
  }
};

/// Model parameters in units of `unit`. Delta = omega_A - omega_c and
/// Delta_m = omega_m - omega_p are kept as independent fields because the
/// effective models are written directly in rotating frames.
struct SystemParams {
  RateUnit unit;
  double g = 0.0;
  double g0 = 0.0;
  double J = 0.0;
  double J_m = 0.0;
  double omega_m = 0.0;
  double omega_p = 0.0;
  double Omega_p = 0.0;
  double omega_c = 0.0;
  double omega_A = 0.0;
  double Delta = 0.0;
  double Delta_m = 1.0;
  double n_cav = 1.0;  ///< intracavity photon number
  double gamma = 0.0;
  double Gamma_m_s = 0.0;
  double kappa = 0.0;
  double lambda_ref = 0.0;
  int N_spins = 1;

  /// Field amplitude sqrt(n_cav).
  double n_bar_cav() const { return std::sqrt(n_cav); }
  void set_n_bar_cav(double amplitude) { n_cav = amplitude * amplitude; }
  /// Rejects negative rates, negative photon numbers and N_spins < 1.
  void validate() const;
};

/// Gamma_m = n_th * kappa_m, the bare mechanical rate before bath engineering.
struct DissipationParams {
  double n_th = 0.0;
  double kappa_m = 0.0;
  double gamma_m_product() const noexcept { return n_th * kappa_m; }
};

struct SqueezeParams {
  double alpha = 0.0;      ///< Omega_p / Delta_m
  double r = 0.0;          ///< tanh(2r) = alpha
  double delta_m_s = 0.0;  ///< Delta_m sqrt(1 - alpha^2)
  double g0_s_amplitude = 0.0;  ///< g0 e^r
  double jm_s = 0.0;       ///< J_m e^{2r} / 2
};

/// Throws UnstableDriveError for |Omega_p| >= Delta_m.
SqueezeParams squeeze_params(double delta_m, double omega_p_drive, double j_m = 0.0,
                             double g0 = 0.0);
/// Same relations parametrized by r (Omega_p = Delta_m tanh 2r).
SqueezeParams squeeze_params_from_r(double delta_m, double r, double j_m = 0.0, double g0 = 0.0);

/// U_s(r)^dagger op U_s(r) with U_s(r) = exp[r (b^2 - b^dagger^2) / 2] on one
/// boson factor, via the matrix exponential of the truncated generator.
Operator squeeze_operator_transform(const Operator& op, std::size_t factor_index, double r);

using OperatorBuilder = std::function<Operator(const HilbertSpace&)>;

/// Truncation-safe variant: `build` is evaluated on a copy of `space` whose
/// factor carries `padding` extra Fock levels (automatic when negative), the
/// transform is taken there, and the result is restricted back to `space`.
/// The matrix overload above is exact only for states far below the cutoff.
Operator squeeze_operator_transform(const OperatorBuilder& build, const HilbertSpace& space,
                                    std::size_t factor_index, double r, int padding = -1);

/// Rows (b_+, b_-, b_0), columns (b_L^S, b_T^S, b_R^S).
Eigen::Matrix3d mechanical_supermode_matrix();

struct OpticalSupermodes {
  Eigen::Matrix3d matrix;  ///< rows (a_0, a_+, a_-), columns (a_L, a_T, a_R)
  double E = 0.0;          ///< sqrt(2 J^2 + Theta^2)
};

/// Normal modes of Theta (a_R^dag a_R - a_L^dag a_L) + J a_T^dag (a_L + a_R) + h.c.
/// with a scalar Theta: a_0 has eigenvalue 0, a_+ has +E, a_- has -E.
OpticalSupermodes optical_supermode_matrix(double theta, double J);

/// Single-excitation matrices used by the supermode checks, in (L, T, R) order.
Eigen::Matrix3d mechanical_single_excitation(double delta, double jm);
Eigen::Matrix3d optical_single_excitation(double theta, double J);

/// Lambda = n_bar g g0 e^r / (4 J).
double lambda_enhanced(const SystemParams& p, double r);
/// Lambda_0 = g g0 e^r / (4 J).
double lambda_tripartite(const SystemParams& p, double r);
/// C = Lambda^2 / (Gamma_m^S gamma).
double cooperativity(double lambda, double gamma_m_s, double gamma);

}  // namespace hybridspin
