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

// Brute-force cross-checks of every analytic shortcut used by the figure
// harness. References are eigendecompositions and closed forms only.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridspin/qops.hpp"

namespace hybridspin {

struct OracleReport {
  std::string name;
  bool passed = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

inline constexpr std::uint64_t kSupermodeSeed = 20240611;
inline constexpr int kMagnusSpinsData[] = {2, 3, 4};
inline constexpr double kMagnusRatiosData[] = {0.005, 0.01, 0.02, 0.05, 0.1};
inline constexpr int kHpSpinsData[] = {4, 8, 10};
inline constexpr std::span<const int> kMagnusSpins{kMagnusSpinsData};
inline constexpr std::span<const double> kMagnusRatios{kMagnusRatiosData};
inline constexpr std::span<const int> kHpSpins{kHpSpinsData};

/// 20 seeded random draws of the mechanical and optical single-excitation
/// blocks: spectra and supermode eigenvectors against eigendecomposition.
OracleReport check_supermode_spectra(std::uint64_t seed = kSupermodeSeed, int draws = 20);

/// Brute-force MS propagator at tau = 2 pi / Delta_m^S against
/// exp(+i Lambda^2 J_x^2 tau / Delta_m^S). Deviation is the worst process
/// fidelity deficit at ratio 0.02; the check also requires the deficit to be
/// monotone in the ratio and the phonon to disentangle (purity > 0.999).
OracleReport check_magnus_ms(std::span<const int> n_spins = kMagnusSpins,
                             std::span<const double> ratios = kMagnusRatios,
                             int truncation = 6);

/// Closed form U(tau) = exp(+i phi J_x^2) with phi = Lambda^2 tau / Delta.
DenseMatrix ms_closed_form(int n_spins, double phi);

/// Target of the GHZ gate: (e^{-i pi/4}|0..0> + e^{i pi/4}|1..1>)/sqrt 2.
DenseVector ghz_target(int n_spins);

/// |<GHZ| exp(-i sign theta J_x^2) |0..0>|^2.
double ghz_fidelity(int n_spins, double theta, int sign);

struct GhzCalibration {
  double theta_star = 0.0;
  int sign = 0;
  double fidelity = 0.0;
  OracleReport report;

  /// Physical gate phase phi = Lambda^2 tau / Delta_m^S in (0, pi/2] that
  /// realizes exp(-i sign theta* J_x^2) up to a global phase.
  double gate_phase() const;
};

/// Sweeps theta in (0, pi/4] for both signs, refines with Brent's method.
GhzCalibration calibrate_ghz_phase(int n_spins = 4);

/// Exact collective-spin cooling vs its Holstein-Primakoff boson, from the
/// same initial mechanical Fock state. Deviation is the max |<n_b>| gap at the
/// largest N; the check also requires a strictly decreasing gap in N.
OracleReport check_hp_vs_exact(std::span<const int> n_spins = kHpSpins, int initial_fock = 2);

/// Max |<n_b>_HP - <n_b>_exact| over the oracle horizon for one N.
double hp_exact_deviation(int n_spins, int initial_fock);

/// Time-dependent classical-drive Rabi model vs the static J-C / anti-J-C
/// model over three Rabi periods, with a wrong-detuning negative control.
OracleReport check_rwa_sidebands();

/// Sup-norm gap of the population curves for the given pump detuning.
/// `blue` selects the anti-J-C reference.
double rwa_gap(bool blue, double pump);

struct OracleSuite {
  std::vector<OracleReport> reports;
  std::optional<GhzCalibration> ghz;

  bool all_passed() const;
  const OracleReport* find(const std::string& name) const;
  nlohmann::json to_json() const;
  /// FNV-1a 64-bit digest of the serialized report, as 16 hex digits.
  std::string digest() const;
};

inline constexpr const char* kOracleNames[] = {"supermode_spectra", "magnus_ms", "ghz_phase",
                                               "hp_vs_exact", "rwa_sidebands"};

/// Runs the named oracles (all five when empty), concurrently.
OracleSuite run_oracles(std::span<const std::string> names = {});

std::string fnv1a_hex(const std::string& text);

}  // namespace hybridspin
