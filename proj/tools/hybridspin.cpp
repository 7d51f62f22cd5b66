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

// hybridspin: oracles, figure datasets and custom runs from the command line.
//
// Exit codes: 0 success, 1 oracle failure, 2 configuration error,
// 3 integration failure. Errors go to stderr as
//   hybridspin: error[<kind>]: <message>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "hybridspin/config.hpp"
#include "hybridspin/errors.hpp"
#include "hybridspin/experiments.hpp"
#include "hybridspin/frames.hpp"

namespace hs = hybridspin;

namespace {

enum Exit { kOk = 0, kOracle = 1, kConfig = 2, kIntegration = 3 };

int fail(const char* kind, const std::string& msg, int code) {
  std::cerr << "hybridspin: error[" << kind << "]: " << msg << '\n';
  return code;
}

std::string default_out() {
  if (const char* env = std::getenv("HYBRIDSPIN_OUT"); env && *env) return env;
  return "hybridspin-out";
}

struct FigureFlags {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  bool exploratory = false;
  bool no_convergence = false;
  int grid = 61;
  bool photon_reading = false;
  int cooling_spins = 100;
  std::vector<std::string> sets;
};

hs::FigureSpec make_spec(const std::string& id, const FigureFlags& f, const std::string& out) {
  hs::FigureSpec spec;
  spec.id = id;
  spec.output_dir = out;
  spec.rel_tol = f.rel_tol;
  spec.abs_tol = f.abs_tol;
  spec.exploratory = f.exploratory;
  spec.convergence = !f.no_convergence;
  spec.grid = f.grid;
  spec.photon_number_reading = f.photon_reading;
  spec.cooling_spins = f.cooling_spins;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw hs::ConfigError("--set expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      spec.overrides[key] = v;
    } catch (const std::logic_error&) {
      throw hs::ConfigError("--set " + key + ": value is not a number");
    }
  }
  if (!(f.rel_tol > 1e-14 && f.rel_tol < 1e-3) || !(f.abs_tol > 1e-14 && f.abs_tol < 1e-3)) {
    throw hs::ConfigError("tolerances must lie in (1e-14, 1e-3)");
  }
  return spec;
}

void print_oracles(const hs::OracleSuite& suite) {
  for (const auto& r : suite.reports) {
    std::printf("%-18s %s  deviation %.3e  tolerance %.3e\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.deviation, r.tolerance);
  }
}

void print_result(const hs::FigureResult& res) {
  for (const auto& f : res.files) std::printf("wrote %s\n", f.string().c_str());
  std::printf("%s summary: %s\n", res.id.c_str(), res.summary.dump().c_str());
}

std::string hz_text(double hz) {
  struct Scale {
    double factor;
    const char* unit;
  };
  static constexpr Scale scales[] = {{1e9, "GHz"}, {1e5, "MHz"}, {1e2, "kHz"}};
  char buf[64];
  for (const auto& s : scales) {
    if (std::abs(hz) >= s.factor) {
      const double div = s.unit[0] == 'G' ? 1e9 : s.unit[0] == 'M' ? 1e6 : 1e3;
      std::snprintf(buf, sizeof buf, "%.6g %s", hz / div, s.unit);
      return buf;
    }
  }
  std::snprintf(buf, sizeof buf, "%.6g Hz", hz);
  return buf;
}

void print_params(const std::string& id) {
  const hs::FigurePreset& preset = hs::figure_preset(id);
  const hs::SystemParams& p = preset.params;
  std::printf("%s parameters (base unit: %s", id.c_str(), p.unit.name.c_str());
  if (p.unit.has_si()) std::printf(", %s/2pi = %s", p.unit.name.c_str(), hz_text(p.unit.to_hz(1.0)).c_str());
  std::printf(")\n");
  struct Row {
    const char* label;
    double value;
  };
  const Row rows[] = {{"g", p.g},         {"g0", p.g0},       {"J", p.J},
                      {"lambda", p.lambda_ref}, {"gamma", p.gamma}, {"Gamma_m_s", p.Gamma_m_s},
                      {"kappa", p.kappa}};
  for (const auto& r : rows) {
    if (r.value == 0.0) continue;
    if (p.unit.has_si()) {
      std::printf("  %s/2pi = %s  (%.6g %s)\n", r.label, hz_text(p.unit.to_hz(r.value)).c_str(),
                  r.value, p.unit.name.c_str());
    } else {
      std::printf("  %s = %.6g %s\n", r.label, r.value, p.unit.name.c_str());
    }
  }
  std::printf("  n_cav = %.6g (n_bar = %.6g)\n", p.n_cav, p.n_bar_cav());
  if (preset.pins_r) std::printf("  r = %.6g\n", preset.r);
  if (preset.pins_r) {
    const double lam = hs::lambda_enhanced(p, preset.r);
    if (p.unit.has_si()) {
      std::printf("  Lambda/2pi = %s  (%.6g %s)\n", hz_text(p.unit.to_hz(lam)).c_str(), lam,
                  p.unit.name.c_str());
    } else {
      std::printf("  Lambda = %.6g %s\n", lam, p.unit.name.c_str());
    }
  }
  std::printf("  pinned ratios to %s:", preset.base.c_str());
  for (const auto& n : preset.pinned) std::printf(" %s", n.c_str());
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid spin-optomechanics simulator: oracles, figure datasets, custom runs"};
  app.require_subcommand(1);
  std::string out = default_out();
  int threads = 0;
  app.add_option("-o,--out", out, "Output directory (default $HYBRIDSPIN_OUT or ./hybridspin-out)");
  app.add_option("--threads", threads, "OpenMP threads (1 = fully serial)")->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", hs::version_string());

  auto* verify = app.add_subcommand("verify", "Run every oracle and write the report");

  FigureFlags flags;
  auto add_figure_flags = [&flags](CLI::App* sub) {
    sub->add_option("--rel-tol", flags.rel_tol, "Integrator relative tolerance");
    sub->add_option("--abs-tol", flags.abs_tol, "Integrator absolute tolerance");
    sub->add_flag("--exploratory", flags.exploratory, "Allow changes to pinned figure ratios");
    sub->add_flag("--no-convergence", flags.no_convergence,
                  "Skip the tolerance-halving and truncation+5 reruns");
    sub->add_option("--set", flags.sets, "Parameter override key=value (repeatable)");
  };
  std::vector<std::pair<std::string, CLI::App*>> figs;
  for (const char* id : {"fig2", "fig3", "fig4", "fig5", "fig6"}) {
    auto* sub = app.add_subcommand(id, std::string("Dataset for ") + id);
    add_figure_flags(sub);
    figs.emplace_back(id, sub);
  }
  figs[0].second->add_option("--grid", flags.grid, "Points per axis")->check(CLI::Range(2, 100000));
  figs[3].second->add_flag("--photon-number-reading", flags.photon_reading,
                           "Read the quoted 1e4 as n_cav instead of the amplitude");
  figs[4].second->add_option("--spins", flags.cooling_spins, "Collective spin number")
      ->check(CLI::PositiveNumber);
  auto* all = app.add_subcommand("all-figs", "verify, then every figure");
  add_figure_flags(all);

  std::string config_path;
  auto* custom = app.add_subcommand("custom", "Evolve a model described by a config file");
  custom->add_option("config", config_path, "INI configuration")->required();

  std::string params_id;
  auto* params = app.add_subcommand("params", "Print the resolved parameters of a figure");
  params->add_option("figure", params_id, "fig2 ... fig6")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("config", e.what(), kConfig);
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (params->parsed()) {
      print_params(params_id);
      return kOk;
    }
    hs::OracleGate gate;
    if (verify->parsed()) {
      int code = kOk;
      try {
        gate.require_all();
      } catch (const hs::OracleFailure&) {
        code = kOracle;
      }
      print_oracles(gate.suite());
      for (const auto& f : gate.write_report(out)) std::printf("wrote %s\n", f.string().c_str());
      std::printf("digest %s\n", gate.digest().c_str());
      if (code != kOk) return fail("oracle", "one or more oracles failed", code);
      return kOk;
    }
    if (custom->parsed()) {
      const hs::RunConfig cfg = hs::load_config(config_path);
      print_result(hs::run_custom(cfg, out));
      return kOk;
    }
    std::vector<std::string> ids;
    for (const auto& [id, sub] : figs) {
      if (sub->parsed()) ids.push_back(id);
    }
    if (all->parsed()) {
      gate.require_all();
      print_oracles(gate.suite());
      ids = {"fig2", "fig3", "fig4", "fig5", "fig6"};
    }
    for (const auto& id : ids) {
      const hs::FigureSpec spec = make_spec(id, flags, out);
      print_result(hs::run_figure(spec, gate));
    }
    gate.write_report(out);
    return kOk;
  } catch (const hs::OracleFailure& e) {
    return fail("oracle", e.what(), kOracle);
  } catch (const hs::ConfigError& e) {
    return fail("config", e.what(), kConfig);
  } catch (const hs::InvalidArgument& e) {
    return fail("config", e.what(), kConfig);
  } catch (const hs::UnstableDriveError& e) {
    return fail("config", e.what(), kConfig);
  } catch (const hs::IntegrationError& e) {
    return fail("integration", e.what(), kIntegration);
  } catch (const hs::TruncationError& e) {
    return fail("integration", e.what(), kIntegration);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kIntegration);
  }
}
