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

// Master-equation and Schroedinger time evolution with observable recording.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridspin/integrator.hpp"
#include "hybridspin/models.hpp"
#include "hybridspin/qops.hpp"

namespace hybridspin {

using InitialState = std::variant<StateVector, DensityMatrix, DiagonalDensity>;

const HilbertSpace& state_space(const InitialState& state);

/// Dense density matrix of any initial-state representation.
DenseMatrix initial_density(const InitialState& state);

struct NamedObservable {
  std::string name;
  Operator op;
};

/// Per-sample state validation thresholds.
struct StateTolerances {
  double trace = 1e-6;
  double hermiticity = 1e-8;
  double positivity = 1e-6;  ///< smallest eigenvalue must be >= -positivity
};

/// Called at every sample with the full state: rho (d x d) for master
/// equations, psi (d x 1) for unitary evolution.
using SampleHook = std::function<void(std::size_t index, double t, const DenseMatrix& state)>;

struct EvolutionSpec {
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t n_samples = 101;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::vector<NamedObservable> observables;
  std::optional<InitialState> initial;
  StateTolerances checks;
  SampleHook on_sample;
  /// Upper bound on the internal step; infinite by default.
  double max_step = std::numeric_limits<double>::infinity();

  /// n_samples evenly spaced times; endpoints exact.
  std::vector<double> sample_times() const;
  /// Throws InvalidArgument on bad times, tolerances or missing state.
  void validate(const HilbertSpace& space) const;
  IntegratorOptions integrator_options() const;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  nlohmann::json metadata = nlohmann::json::object();

  bool has_column(std::string_view name) const;
  const std::vector<double>& column(std::string_view name) const;
  void add_column(std::string name, std::vector<double> values);
};

/// Lindblad master equation with the adaptive Dormand-Prince integrator.
/// Throws IntegrationError when a sample fails the state checks.
TimeSeries evolve_lindblad(const LindbladModel& model, const EvolutionSpec& spec);

/// Pure-state evolution. Static H uses its eigendecomposition; time-dependent
/// H uses the adaptive integrator. Throws InvalidArgument when the model has
/// active collapse channels and `ignore_collapse` is false.
TimeSeries evolve_unitary(const LindbladModel& model, const EvolutionSpec& spec,
                          bool ignore_collapse = false);

/// Time-ordered propagator U(t1, t0) of the Hamiltonian part.
Operator propagator(const LindbladModel& model, double t0, double t1,
                    const IntegratorOptions& options = {1e-10, 1e-12});
inline Operator propagator(const LindbladModel& model, double t) {
  return propagator(model, 0.0, t);
}

/// Exact exp(-i H t) for Hermitian H via eigendecomposition.
DenseMatrix unitary_exponential(const Operator& h, double t);

}  // namespace hybridspin
