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

// Figure harness: pinned parameter sets, gating oracles, single-run
// simulation with convergence gates, and CSV emission.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridspin/config.hpp"
#include "hybridspin/dynamics.hpp"
#include "hybridspin/oracles.hpp"

namespace hybridspin {

/// Library version recorded in every output file.
std::string version_string();

/// Runs oracles on demand and remembers their reports for the lifetime of
/// the gate. Figures call require() before emitting anything.
class OracleGate {
 public:
  /// Runs the named oracles that have not run yet. Throws OracleFailure if
  /// any named oracle failed (now or earlier).
  void require(std::span<const std::string> names);
  void require_all();

  const OracleSuite& suite() const noexcept { return suite_; }
  /// Digest over every report collected so far.
  std::string digest() const { return suite_.digest(); }
  /// Calibration result; requires the ghz_phase oracle.
  const GhzCalibration& ghz() const;

  /// oracle_report.json (full) and oracle_report.csv (one row per oracle).
  std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir) const;

 private:
  OracleSuite suite_;
};

/// Oracles a figure depends on.
std::vector<std::string> gating_oracles(const std::string& figure_id);

struct FigureSpec {
  std::string id;  ///< fig2, fig3, fig4, fig5 or fig6 (fig2 emits fig2a and fig2b)
  /// Parameter overrides by SystemParams field name (plus "r").
  nlohmann::json overrides = nlohmann::json::object();
  bool exploratory = false;
  std::filesystem::path output_dir = ".";
  int grid = 61;  ///< points per axis of the closed-form grids
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Tolerance-halving and truncation+5 reruns.
  bool convergence = true;
  /// Read the quoted photon figure of the GHZ run as n_cav instead of the
  /// field amplitude.
  bool photon_number_reading = false;
  /// Collective spin number of the cooling run.
  int cooling_spins = 100;
};

struct FigureResult {
  std::string id;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary = nlohmann::json::object();
  double seconds = 0.0;
};

/// Resolved figure parameters (preset plus overrides). Throws ConfigError
/// when an override changes a pinned quantity without the exploratory flag.
SystemParams resolve_params(const FigureSpec& spec, double* r = nullptr);

FigureResult run_fig2(const FigureSpec& spec, OracleGate& gate);
FigureResult run_fig3(const FigureSpec& spec, OracleGate& gate);
FigureResult run_fig4(const FigureSpec& spec, OracleGate& gate);
FigureResult run_fig5(const FigureSpec& spec, OracleGate& gate);
FigureResult run_fig6(const FigureSpec& spec, OracleGate& gate);
FigureResult run_figure(const FigureSpec& spec, OracleGate& gate);

/// Observables emitted for a model type, in column order.
std::vector<NamedObservable> standard_observables(const RunConfig& cfg, const HilbertSpace& space);

/// Coupling used by the builders: the explicit override, or the closed-form
/// Lambda (J-C family, MS gate, cooling) / Lambda_0 (sideband models).
double resolved_coupling(const RunConfig& cfg);

/// Builds the model, evolves it with the configured solver and adds the
/// derived columns (sigma_z_plus_half, top_level, coupling-scaled time).
/// With cfg.convergence the run is repeated at halved tolerances and at
/// truncation+5 and the drifts are recorded in the metadata.
TimeSeries simulate(const RunConfig& cfg);

/// Samples compared by the convergence reruns: every `stride`-th sample.
TimeSeries simulate(const RunConfig& cfg, std::size_t convergence_stride);

/// simulate() followed by a CSV with the full configuration echoed.
FigureResult run_custom(const RunConfig& cfg, const std::filesystem::path& output_dir);

/// Truncated Gibbs populations of one mode with mean exactly `mean`.
/// Throws InvalidArgument when the truncation cannot hold that mean.
std::vector<double> truncated_thermal(int truncation, double mean);
/// Poisson populations truncated and renormalized.
std::vector<double> truncated_poisson(int truncation, double mean);

}  // namespace hybridspin
