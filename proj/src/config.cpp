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

#include "hybridspin/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hybridspin/csv.hpp"
#include "hybridspin/errors.hpp"

namespace hybridspin {

namespace pt = boost::property_tree;

namespace {

constexpr ParamField kFields[] = {
    {"g", &SystemParams::g, false},
    {"g0", &SystemParams::g0, false},
    {"J", &SystemParams::J, false},
    {"J_m", &SystemParams::J_m, false},
    {"omega_m", &SystemParams::omega_m, false},
    {"omega_p", &SystemParams::omega_p, false},
    {"Omega_p", &SystemParams::Omega_p, false},
    {"omega_c", &SystemParams::omega_c, false},
    {"omega_A", &SystemParams::omega_A, false},
    {"Delta", &SystemParams::Delta, false},
    {"Delta_m", &SystemParams::Delta_m, false},
    {"n_cav", &SystemParams::n_cav, true},
    {"gamma", &SystemParams::gamma, true},
    {"Gamma_m_s", &SystemParams::Gamma_m_s, true},
    {"kappa", &SystemParams::kappa, true},
    {"lambda_ref", &SystemParams::lambda_ref, true},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ConfigError(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

long long to_integer(const std::string& text, const std::string& what) {
  long long v = 0;
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(text.data(), last, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ConfigError(what + ": '" + text + "' is not an integer");
  }
  return v;
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(what + ": '" + text + "' is not a boolean");
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const auto keys = [] {
    std::map<std::string, std::set<std::string>> k;
    k["model"] = {"type",     "preset",    "exploratory", "truncations",     "n_spins",
                  "lambda",   "delta_m_s", "initial",     "classical_drive", "sideband",
                  "pump_frequency"};
    auto& params = k["params"];
    params = {"r", "unit", "unit_hz"};
    for (const auto& f : kFields) params.insert(f.name);
    k["evolution"] = {"t_start", "t_end", "n_samples", "rel_tol", "abs_tol", "solver"};
    k["output"] = {"path", "convergence"};
    return k;
  }();
  return keys;
}

// Line numbers of sections and keys; the property tree does not keep them.
std::map<std::string, int> scan_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      lines.emplace(section, n);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    lines.emplace(section + "." + trim(std::string_view(line).substr(0, eq)), n);
  }
  return lines;
}

int bosons_required(ModelType t, bool classical_drive) {
  switch (t) {
    case ModelType::jc:
    case ModelType::anti_jc:
    case ModelType::ms_gate:
    case ModelType::cooling_exact:
      return 1;
    case ModelType::tripartite:
      return classical_drive ? 1 : 2;
    case ModelType::blue:
    case ModelType::red:
    case ModelType::cooling_hp:
      return 2;
  }
  return 0;
}

std::size_t factor_count(ModelType t, bool classical_drive, int n_spins) {
  switch (t) {
    case ModelType::jc:
    case ModelType::anti_jc:
      return 2;
    case ModelType::tripartite:
      return classical_drive ? 2 : 3;
    case ModelType::blue:
    case ModelType::red:
      return 3;
    case ModelType::ms_gate:
    case ModelType::cooling_exact:
      return 1 + static_cast<std::size_t>(n_spins);
    case ModelType::cooling_hp:
      return 2;
  }
  return 0;
}

std::string format_initial_value(double v) { return format_double(v); }

}  // namespace

const char* to_string(ModelType t) {
  switch (t) {
    case ModelType::jc: return "jc";
    case ModelType::anti_jc: return "anti_jc";
    case ModelType::blue: return "blue";
    case ModelType::red: return "red";
    case ModelType::tripartite: return "tripartite";
    case ModelType::ms_gate: return "ms_gate";
    case ModelType::cooling_exact: return "cooling_exact";
    case ModelType::cooling_hp: return "cooling_hp";
  }
  return "?";
}

ModelType model_type_from_string(std::string_view s) {
  for (ModelType t : {ModelType::jc, ModelType::anti_jc, ModelType::blue, ModelType::red,
                      ModelType::tripartite, ModelType::ms_gate, ModelType::cooling_exact,
                      ModelType::cooling_hp}) {
    if (s == to_string(t)) return t;
  }
  throw ConfigError("unknown model type '" + std::string(s) + "'");
}

const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::automatic: return "auto";
    case SolverKind::dense: return "dense";
    case SolverKind::sectors: return "sectors";
    case SolverKind::unitary: return "unitary";
  }
  return "?";
}

SolverKind solver_from_string(std::string_view s) {
  for (SolverKind k :
       {SolverKind::automatic, SolverKind::dense, SolverKind::sectors, SolverKind::unitary}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown solver '" + std::string(s) + "'");
}

InitialSpec InitialSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("initial state '" + std::string(text) + "' needs the form kind:value");
  }
  const std::string kind = trim(text.substr(0, colon));
  const std::string rest = trim(text.substr(colon + 1));
  InitialSpec spec;
  if (kind == "basis") {
    spec.kind = Kind::basis;
    for (const auto& d : split(rest, ',')) {
      const long long v = to_integer(d, "basis digit");
      if (v < 0) throw ConfigError("basis digits must be >= 0");
      spec.digits.push_back(static_cast<int>(v));
    }
    return spec;
  }
  if (kind == "coherent") {
    spec.kind = Kind::coherent;
  } else if (kind == "thermal") {
    spec.kind = Kind::thermal;
  } else if (kind == "poisson") {
    spec.kind = Kind::poisson;
  } else {
    throw ConfigError("unknown initial state kind '" + kind + "'");
  }
  spec.value = to_double(rest, "initial " + kind);
  if (spec.kind != Kind::coherent && spec.value < 0.0) {
    throw ConfigError("initial " + kind + " occupation must be >= 0");
  }
  return spec;
}

std::string InitialSpec::str() const {
  switch (kind) {
    case Kind::basis: {
      std::string s = "basis:";
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(digits[i]);
      }
      return s;
    }
    case Kind::coherent: return "coherent:" + format_initial_value(value);
    case Kind::thermal: return "thermal:" + format_initial_value(value);
    case Kind::poisson: return "poisson:" + format_initial_value(value);
  }
  return "?";
}

std::span<const ParamField> param_fields() { return kFields; }

const ParamField* find_param_field(std::string_view name) {
  for (const auto& f : kFields) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

nlohmann::json params_to_json(const SystemParams& p, double r) {
  nlohmann::json j = nlohmann::json::object();
  j["unit"] = p.unit.name;
  j["unit_over_2pi_hz"] = p.unit.has_si() ? p.unit.to_hz(1.0) : 0.0;
  for (const auto& f : kFields) j[f.name] = p.*f.member;
  j["n_bar_cav"] = p.n_bar_cav();
  j["N_spins"] = p.N_spins;
  j["r"] = r;
  return j;
}

// ---------------------------------------------------------------------------
// Figure presets

namespace {

std::vector<FigurePreset> make_presets() {
  std::vector<FigurePreset> out;
  {
    FigurePreset f;
    f.id = "fig2";
    SystemParams& p = f.params;
    p.unit = RateUnit::from_hz("g", 1e9);
    p.g = 1.0;
    p.g0 = 1e-3;
    p.J = 10.0;
    p.lambda_ref = 1e-4;
    p.Gamma_m_s = 1e-3;
    p.gamma = 0.015;
    f.base = "g";
    f.pinned = {"g0", "J", "lambda_ref", "Gamma_m_s", "gamma"};
    out.push_back(f);
  }
  {
    FigurePreset f;
    f.id = "fig3";
    SystemParams& p = f.params;
    p.unit = {"g", 0.0};
    p.g = 1.0;
    p.g0 = 1e-3;
    p.J = 10.0;
    p.Gamma_m_s = 1e-3;
    p.gamma = 0.02;
    p.n_cav = 5e2;
    f.base = "g";
    f.pinned = {"g0", "J", "Gamma_m_s", "gamma"};
    out.push_back(f);
  }
  {
    FigurePreset f;
    f.id = "fig4";
    SystemParams& p = f.params;
    p.unit = {"gamma", 0.0};
    p.gamma = 1.0;
    p.g0 = 1.0;
    p.J = 2.8e3;
    p.g = 70.0;
    p.Gamma_m_s = 1e-3;
    p.kappa = 0.1;
    f.base = "gamma";
    f.pinned = {"g0", "J", "g", "Gamma_m_s", "kappa"};
    out.push_back(f);
  }
  {
    FigurePreset f;
    f.id = "fig5";
    SystemParams& p = f.params;
    p.unit = RateUnit::from_hz("gamma", 15e6);
    p.gamma = 1.0;
    p.g = 1e9 / 15e6;
    p.g0 = 1e-3 * p.g;
    p.J = 10.0 * p.g;
    p.set_n_bar_cav(1e4);
    p.Gamma_m_s = 1e-3;
    p.N_spins = 4;
    f.r = 4.0;
    f.base = "gamma";
    f.pinned = {"g", "g0", "J", "Gamma_m_s"};
    f.pins_r = true;
    f.pins_n_cav = true;
    out.push_back(f);
  }
  {
    FigurePreset f;
    f.id = "fig6";
    SystemParams& p = f.params;
    p.unit = RateUnit::from_hz("gamma", 15e6);
    p.gamma = 1.0;
    p.g = 66.0;
    p.g0 = 1e-3 * p.g;
    p.J = 10.0 * p.g;
    p.set_n_bar_cav(100.0);
    p.Gamma_m_s = 1e-3;
    f.r = 2.0;
    f.base = "gamma";
    f.pinned = {"g", "g0", "J", "Gamma_m_s"};
    f.pins_r = true;
    f.pins_n_cav = true;
    out.push_back(f);
  }
  return out;
}

}  // namespace

const FigurePreset& figure_preset(std::string_view id) {
  static const std::vector<FigurePreset> presets = make_presets();
  for (const auto& p : presets) {
    if (p.id == id) return p;
  }
  throw ConfigError("unknown preset '" + std::string(id) + "'");
}

std::vector<std::string> preset_ids() { return {"fig2", "fig3", "fig4", "fig5", "fig6"}; }

std::optional<std::string> pinned_violation(const FigurePreset& preset, const SystemParams& p,
                                            double r) {
  auto differs = [](double a, double b) {
    return std::abs(a - b) > 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
  };
  const ParamField* base = find_param_field(preset.base);
  const double ref_base = preset.params.*base->member;
  const double cur_base = p.*base->member;
  if (cur_base <= 0.0) return preset.base;
  for (const auto& name : preset.pinned) {
    const ParamField* f = find_param_field(name);
    const double want = preset.params.*f->member / ref_base;
    const double have = p.*f->member / cur_base;
    if (differs(want, have)) return name + "/" + preset.base;
  }
  if (preset.pins_r && differs(preset.r, r)) return std::string("r");
  if (preset.pins_n_cav && differs(preset.params.n_cav, p.n_cav)) return std::string("n_cav");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RunConfig

std::string RunConfig::where(const std::string& key) const {
  const auto it = lines.find(key);
  if (it == lines.end()) return source + " (" + key + ")";
  return source + ":" + std::to_string(it->second) + " (" + key + ")";
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["type"] = to_string(type);
  j["preset"] = preset ? nlohmann::json(*preset) : nlohmann::json(nullptr);
  j["exploratory"] = exploratory;
  j["params"] = params_to_json(recipe.params, recipe.r);
  j["truncations"] = recipe.truncations;
  j["sideband"] = to_string(recipe.sideband);
  j["classical_drive"] = recipe.classical_drive;
  j["pump_frequency"] =
      recipe.pump_frequency ? nlohmann::json(*recipe.pump_frequency) : nlohmann::json(nullptr);
  j["n_spins"] = n_spins;
  j["lambda"] = lambda ? nlohmann::json(*lambda) : nlohmann::json(nullptr);
  j["delta_m_s"] = delta_m_s ? nlohmann::json(*delta_m_s) : nlohmann::json(nullptr);
  j["initial"] = initial.str();
  j["t_start"] = t_start;
  j["t_end"] = t_end;
  j["n_samples"] = n_samples;
  j["rel_tol"] = rel_tol;
  j["abs_tol"] = abs_tol;
  j["solver"] = to_string(solver);
  j["convergence"] = convergence;
  return j;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  cfg.lines = scan_lines(text);

  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  const auto& allowed = allowed_keys();
  for (const auto& [section, body] : tree) {
    const auto sec = allowed.find(section);
    if (sec == allowed.end()) {
      throw ConfigError(cfg.where(section) + ": unknown section '" + section + "'");
    }
    if (!body.data().empty()) {
      throw ConfigError(cfg.where(section) + ": key outside of any section");
    }
    for (const auto& [key, value] : body) {
      if (!sec->second.count(key)) {
        throw ConfigError(cfg.where(section + "." + key) + ": unknown key '" + key + "'");
      }
    }
  }

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  };
  auto num = [&](const std::string& key) -> std::optional<double> {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return to_double(*v, cfg.where(key));
  };
  auto wrap = [&](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(cfg.where(key) + ": " + e.what());
    }
  };

  // [model]
  const auto type = get("model.type");
  if (!type) throw ConfigError(source + ": missing required key model.type");
  wrap("model.type", [&] { cfg.type = model_type_from_string(*type); });
  if (const auto v = get("model.exploratory")) {
    cfg.exploratory = to_bool(*v, cfg.where("model.exploratory"));
  }
  if (const auto v = get("model.preset")) {
    wrap("model.preset", [&] {
      const FigurePreset& p = figure_preset(*v);
      cfg.preset = p.id;
      cfg.recipe.params = p.params;
      cfg.recipe.r = p.r;
    });
  }
  if (const auto v = get("model.n_spins")) {
    const long long n = to_integer(*v, cfg.where("model.n_spins"));
    if (n < 1) throw ConfigError(cfg.where("model.n_spins") + ": must be >= 1");
    cfg.n_spins = static_cast<int>(n);
  }
  cfg.recipe.params.N_spins = cfg.n_spins;
  if (const auto v = get("model.classical_drive")) {
    cfg.recipe.classical_drive = to_bool(*v, cfg.where("model.classical_drive"));
  }
  if (const auto v = get("model.sideband")) {
    if (*v == "red") {
      cfg.recipe.sideband = Sideband::red;
    } else if (*v == "blue") {
      cfg.recipe.sideband = Sideband::blue;
    } else {
      throw ConfigError(cfg.where("model.sideband") + ": expected red or blue");
    }
  }
  if (const auto v = num("model.pump_frequency")) cfg.recipe.pump_frequency = *v;
  if (const auto v = num("model.lambda")) {
    if (*v < 0.0) throw ConfigError(cfg.where("model.lambda") + ": coupling must be >= 0");
    cfg.lambda = *v;
  }
  if (const auto v = num("model.delta_m_s")) {
    if (*v <= 0.0) throw ConfigError(cfg.where("model.delta_m_s") + ": must be > 0");
    cfg.delta_m_s = *v;
  }
  const auto trunc = get("model.truncations");
  if (!trunc) throw ConfigError(source + ": missing required key model.truncations");
  for (const auto& t : split(*trunc, ',')) {
    const long long n = to_integer(t, cfg.where("model.truncations"));
    if (n < 2) throw ConfigError(cfg.where("model.truncations") + ": truncations must be >= 2");
    cfg.recipe.truncations.push_back(static_cast<int>(n));
  }
  const int want = bosons_required(cfg.type, cfg.recipe.classical_drive);
  if (static_cast<int>(cfg.recipe.truncations.size()) != want) {
    throw ConfigError(cfg.where("model.truncations") + ": model " + to_string(cfg.type) +
                      " needs " + std::to_string(want) + " truncation(s)");
  }
  const auto init = get("model.initial");
  if (!init) throw ConfigError(source + ": missing required key model.initial");
  wrap("model.initial", [&] { cfg.initial = InitialSpec::parse(*init); });

  // [params]
  if (const auto v = get("params.unit")) cfg.recipe.params.unit.name = *v;
  if (const auto v = num("params.unit_hz")) {
    if (*v < 0.0) throw ConfigError(cfg.where("params.unit_hz") + ": must be >= 0");
    cfg.recipe.params.unit = RateUnit::from_hz(cfg.recipe.params.unit.name, *v);
  }
  if (const auto v = num("params.r")) cfg.recipe.r = *v;
  for (const auto& f : kFields) {
    const std::string key = std::string("params.") + f.name;
    if (const auto v = num(key)) {
      if (f.is_rate && *v < 0.0) {
        throw ConfigError(cfg.where(key) + ": negative value for rate field '" + f.name + "'");
      }
      cfg.recipe.params.*f.member = *v;
    }
  }

  // [evolution]
  if (const auto v = num("evolution.t_start")) cfg.t_start = *v;
  if (const auto v = num("evolution.t_end")) cfg.t_end = *v;
  if (cfg.t_end <= cfg.t_start) {
    throw ConfigError(cfg.where("evolution.t_end") + ": t_end must exceed t_start");
  }
  if (const auto v = get("evolution.n_samples")) {
    const long long n = to_integer(*v, cfg.where("evolution.n_samples"));
    if (n < 2) throw ConfigError(cfg.where("evolution.n_samples") + ": must be >= 2");
    cfg.n_samples = static_cast<std::size_t>(n);
  }
  for (const char* key : {"evolution.rel_tol", "evolution.abs_tol"}) {
    if (const auto v = num(key)) {
      if (!(*v > 1e-14 && *v < 1e-3)) {
        throw ConfigError(cfg.where(key) + ": tolerance must lie in (1e-14, 1e-3)");
      }
      (std::string(key) == "evolution.rel_tol" ? cfg.rel_tol : cfg.abs_tol) = *v;
    }
  }
  if (const auto v = get("evolution.solver")) {
    wrap("evolution.solver", [&] { cfg.solver = solver_from_string(*v); });
  }

  // [output]
  if (const auto v = get("output.path")) {
    if (v->empty()) throw ConfigError(cfg.where("output.path") + ": empty path");
    cfg.output = *v;
  }
  if (const auto v = get("output.convergence")) {
    cfg.convergence = to_bool(*v, cfg.where("output.convergence"));
  }

  // Cross-field checks.
  const std::size_t factors = factor_count(cfg.type, cfg.recipe.classical_drive, cfg.n_spins);
  if (cfg.initial.kind == InitialSpec::Kind::basis) {
    if (cfg.initial.digits.size() != factors) {
      throw ConfigError(cfg.where("model.initial") + ": expected " + std::to_string(factors) +
                        " basis digits");
    }
    for (std::size_t i = 0; i < cfg.recipe.truncations.size(); ++i) {
      const int d = cfg.initial.digits[i];
      const int t = cfg.recipe.truncations[i];
      if (d >= t || (d >= 1 && t < 4)) {
        throw ConfigError(cfg.where("model.truncations") + ": truncation " + std::to_string(t) +
                          " too small for occupation " + std::to_string(d));
      }
    }
    for (std::size_t i = cfg.recipe.truncations.size(); i < factors; ++i) {
      if (cfg.initial.digits[i] > 1) {
        throw ConfigError(cfg.where("model.initial") + ": qubit digits must be 0 or 1");
      }
    }
  } else {
    const double occ = cfg.initial.kind == InitialSpec::Kind::coherent
                           ? cfg.initial.value * cfg.initial.value
                           : cfg.initial.value;
    if (occ >= 1.0 && cfg.recipe.truncations[0] < 4) {
      throw ConfigError(cfg.where("model.truncations") + ": truncation must be >= 4");
    }
  }
  if (cfg.type == ModelType::ms_gate && cfg.n_spins < 2) {
    throw ConfigError(cfg.where("model.n_spins") + ": the MS gate needs at least 2 spins");
  }
  if (cfg.type == ModelType::cooling_exact && cfg.n_spins > kMaxExactSpins) {
    throw ConfigError(cfg.where("model.n_spins") + ": too many spins for cooling_exact; use "
                      "cooling_hp");
  }
  if (cfg.preset && !cfg.exploratory) {
    const auto bad = pinned_violation(figure_preset(*cfg.preset), cfg.recipe.params, cfg.recipe.r);
    if (bad) {
      const std::string field = bad->substr(0, bad->find('/'));
      const std::string key = field == "r" ? "params.r" : "params." + field;
      throw ConfigError(cfg.where(key) + ": changes the pinned " + *cfg.preset + " quantity " +
                        *bad + "; set model.exploratory = true to allow it");
    }
  }
  try {
    cfg.recipe.params.validate();
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace hybridspin
