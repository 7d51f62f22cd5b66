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

// Run descriptions for single simulations, and the INI reader for them.
//
//   [model]      type, preset, exploratory, truncations, n_spins, lambda,
//                delta_m_s, initial, sideband, classical_drive, pump_frequency
//   [params]     any SystemParams field, plus r, unit, unit_hz
//   [evolution]  t_start, t_end, n_samples, rel_tol, abs_tol, solver
//   [output]     path, convergence
//
// Unknown sections or keys are rejected with the offending line number.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridspin/frames.hpp"
#include "hybridspin/models.hpp"

namespace hybridspin {

enum class ModelType { jc, anti_jc, blue, red, tripartite, ms_gate, cooling_exact, cooling_hp };

const char* to_string(ModelType t);
ModelType model_type_from_string(std::string_view s);

enum class SolverKind {
  automatic,  ///< sectors for charge-conserving models from charge-diagonal states, else dense
  dense,
  sectors,
  unitary,
};

const char* to_string(SolverKind s);
SolverKind solver_from_string(std::string_view s);

/// Initial state grammar:
///   basis:d0,d1,...   product basis state, one digit per factor
///   coherent:alpha    coherent mode 0, other factors in |0>
///   thermal:n         truncated Gibbs state of mode 0 with mean exactly n
///   poisson:n         Poisson populations of mode 0 (dephased coherent state)
struct InitialSpec {
  enum class Kind { basis, coherent, thermal, poisson };
  Kind kind = Kind::basis;
  std::vector<int> digits;
  double value = 0.0;

  static InitialSpec parse(std::string_view text);
  std::string str() const;
};

/// Named access to the scalar fields of SystemParams.
struct ParamField {
  const char* name;
  double SystemParams::* member;
  bool is_rate;  ///< must be >= 0
};

std::span<const ParamField> param_fields();
const ParamField* find_param_field(std::string_view name);
nlohmann::json params_to_json(const SystemParams& p, double r);

/// Pinned parameter set of one figure. Frequencies are multiples of the
/// `base` field; the listed ratios (and r / n_cav when flagged) may only be
/// changed by exploratory runs.
struct FigurePreset {
  std::string id;
  SystemParams params;
  double r = 0.0;
  std::string base;
  std::vector<std::string> pinned;
  bool pins_r = false;
  bool pins_n_cav = false;
};

/// fig2, fig3, fig4, fig5, fig6. Throws ConfigError for unknown ids.
const FigurePreset& figure_preset(std::string_view id);
std::vector<std::string> preset_ids();

/// First pinned quantity of `preset` that `p` / `r` changes, if any.
std::optional<std::string> pinned_violation(const FigurePreset& preset, const SystemParams& p,
                                            double r);

struct RunConfig {
  ModelType type = ModelType::jc;
  std::optional<std::string> preset;
  bool exploratory = false;
  ModelRecipe recipe;  ///< params, r, truncations, sideband, drive options
  int n_spins = 1;
  std::optional<double> lambda;     ///< coupling override; otherwise from the formulas
  std::optional<double> delta_m_s;  ///< MS gate detuning; otherwise from the recipe
  InitialSpec initial;

  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t n_samples = 101;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  SolverKind solver = SolverKind::automatic;

  std::filesystem::path output = "custom.csv";
  bool convergence = false;  ///< tolerance-halving and truncation+5 reruns

  /// "section.key" -> 1-based line of the entry in the source text.
  std::map<std::string, int> lines;
  std::string source = "<config>";

  /// Where a key came from, e.g. "run.ini:12 (params.gamma)".
  std::string where(const std::string& key) const;
  nlohmann::json to_json() const;
};

/// Parses and validates; throws ConfigError naming line and field.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace hybridspin
