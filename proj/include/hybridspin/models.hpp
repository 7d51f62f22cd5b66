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

// Hamiltonian and collapse-operator builders. Every builder returns a
// LindbladModel over an explicitly declared HilbertSpace whose factor order
// is documented on the builder.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridspin/frames.hpp"
#include "hybridspin/qops.hpp"

namespace hybridspin {

/// Pure, deterministic scalar function of time.
using Coefficient = std::function<Complex(double)>;

struct HamiltonianTerm {
  Coefficient coefficient;
  Operator op;
};

/// H(t) = static_part + sum_k coefficient_k(t) op_k. The sum must be
/// Hermitian at every t; individual terms need not be.
class Hamiltonian {
 public:
  explicit Hamiltonian(Operator static_part, std::vector<HamiltonianTerm> terms = {});

  const HilbertSpace& space() const noexcept { return static_part_.space(); }
  bool is_static() const noexcept { return terms_.empty(); }
  const Operator& static_part() const noexcept { return static_part_; }
  const std::vector<HamiltonianTerm>& terms() const noexcept { return terms_; }
  Operator at(double t) const;

 private:
  Operator static_part_;
  std::vector<HamiltonianTerm> terms_;
};

struct CollapseChannel {
  double rate;  ///< >= 0; the dissipator uses sqrt(rate) * op
  Operator op;
  std::string name;
};

struct LindbladModel {
  HilbertSpace space;
  Hamiltonian hamiltonian;
  std::vector<CollapseChannel> collapse;
  std::string label;

  /// Rates >= 0 and H(t) Hermitian within 1e-10 at the given times.
  void validate(std::span<const double> sample_times) const;
  void validate() const;
  LindbladModel with_rates_scaled(double factor) const;
  LindbladModel without_collapse() const;
};

enum class Sideband { red, blue };

const char* to_string(Sideband s);

struct ModelRecipe {
  SystemParams params;
  double r = 0.0;                ///< squeezing parameter
  std::vector<int> truncations;  ///< one Fock cutoff per boson factor, in factor order
  Sideband sideband = Sideband::red;
  std::string variant;
  /// Replace a_0 by the classical amplitude n_bar in the tripartite model.
  bool classical_drive = false;
  /// Pump frequency; defaults to the resonant sideband value Delta -/+ Delta_m^S.
  std::optional<double> pump_frequency;
  /// Per-spin couplings; empty means homogeneous.
  std::vector<double> spin_couplings;
  /// Bare mechanical damping used only by build_full.
  DissipationParams mechanical_bath;

  /// Delta_m^S = Delta_m / cosh(2r).
  double delta_m_s() const;
  /// Pump frequency in force (override or sideband-resonant value).
  double pump() const;
};

/// Factors: a_L, a_T, a_R, b_L, b_T, b_R (bosons, truncations[0..5]), qubit.
/// H(t) = H_1 + H_2 + H_3 with the explicit e^{i omega_p t} factors of H_3.
/// Collapse: sqrt(kappa) a_j, sqrt(gamma) sigma_-, sqrt(Gamma_m) b_j.
LindbladModel build_full(const ModelRecipe& recipe);

/// Factors: a_0 (truncations[0]), b_0 (truncations[1]), qubit.
/// With classical_drive the a_0 factor is dropped: factors b_0 (truncations[0]), qubit,
/// and the trilinear term becomes n_bar (b_0 + b_0^dag) sigma_x.
LindbladModel build_effective_tripartite(const ModelRecipe& recipe);

/// Factors: b_0 (truncations[0]), qubit. Lambda (b sigma_+ + b^dag sigma_-).
LindbladModel build_jc(const ModelRecipe& recipe, double lambda);
/// Factors: b_0 (truncations[0]), qubit. Lambda (b sigma_- + b^dag sigma_+).
LindbladModel build_anti_jc(const ModelRecipe& recipe, double lambda);

/// Factors: a_0, b_0, qubit. Lambda_0 (sigma_- b a^dag + sigma_+ b^dag a).
LindbladModel build_blue(const ModelRecipe& recipe, double lambda0);
/// Factors: a_0, b_0, qubit. Lambda_0 (sigma_- b^dag a^dag + sigma_+ b a).
LindbladModel build_red(const ModelRecipe& recipe, double lambda0);

/// Factors: b_0 (truncations[0]), qubit x N. Interaction-picture
/// Lambda (b e^{-i Delta_m^S t} + b^dag e^{i Delta_m^S t}) J_x.
LindbladModel build_ms_gate(const ModelRecipe& recipe, double lambda, int n_spins,
                            double delta_m_s);

/// Factors: b_0 (truncations[0]), qubit x N, N <= 12. Lambda (b J_+ + b^dag J_-).
LindbladModel build_cooling_exact(const ModelRecipe& recipe, double lambda, int n_spins);

/// Factors: b_0 (truncations[0]), d (truncations[1]). Holstein-Primakoff
/// beam splitter Lambda sqrt(N) (b d^dag + b^dag d); spin decay maps onto d.
/// Throws TruncationError if truncations[0] - 1 < n0 + 6 sqrt(n0).
LindbladModel build_cooling_hp(const ModelRecipe& recipe, double lambda, int n_spins,
                               double initial_occupation);

inline constexpr int kMaxExactSpins = 12;

}  // namespace hybridspin
