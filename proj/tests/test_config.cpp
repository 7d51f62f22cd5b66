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

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <gtest/gtest.h>

#include "hybridspin/config.hpp"
#include "hybridspin/csv.hpp"
#include "hybridspin/errors.hpp"
#include "hybridspin/experiments.hpp"

namespace hs = hybridspin;

namespace {

const char* kBase = R"([model]
type = jc
preset = fig3
truncations = 6
initial = basis:1,0

[evolution]
t_end = 10
n_samples = 11
)";

std::string error_of(const std::string& text) {
  try {
    hs::parse_config(text, "run.ini");
  } catch (const hs::ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ParsesMinimalRun) {
  const hs::RunConfig c = hs::parse_config(kBase, "run.ini");
  EXPECT_EQ(c.type, hs::ModelType::jc);
  EXPECT_EQ(c.recipe.truncations, std::vector<int>{6});
  EXPECT_EQ(c.n_samples, 11u);
  EXPECT_DOUBLE_EQ(c.t_end, 10.0);
  EXPECT_EQ(c.solver, hs::SolverKind::automatic);
  EXPECT_DOUBLE_EQ(c.recipe.params.gamma, 0.02);
  EXPECT_EQ(c.where("model.truncations"), "run.ini:4 (model.truncations)");
}

TEST(Config, NegativeRateNamesField) {
  const std::string msg = error_of(std::string(kBase) + "[params]\ngamma = -0.02\n");
  EXPECT_NE(msg.find("negative value for rate field 'gamma'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("run.ini:11"), std::string::npos) << msg;
}

TEST(Config, PinnedRatioNeedsExploratory) {
  const std::string text = std::string(kBase) + "[params]\nJ = 20\n";
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("pinned fig3 quantity"), std::string::npos) << msg;
  std::string explo = text;
  explo.replace(explo.find("truncations"), 0, "exploratory = true\n");
  EXPECT_DOUBLE_EQ(hs::parse_config(explo).recipe.params.J, 20.0);
}

TEST(Config, ScalingTheBaseKeepsRatios) {
  // Doubling every frequency together leaves the pinned ratios intact.
  const std::string text = std::string(kBase) +
                           "[params]\ng = 2\ng0 = 2e-3\nJ = 20\nGamma_m_s = 2e-3\ngamma = 0.04\n";
  EXPECT_NO_THROW(hs::parse_config(text));
}

TEST(Config, UnknownKeyReportsLine) {
  const std::string msg = error_of(std::string(kBase) + "colour = blue\n");
  EXPECT_NE(msg.find("unknown key 'colour'"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":10"), std::string::npos) << msg;
}

TEST(Config, StructuralErrors) {
  EXPECT_THROW(hs::parse_config("[model]\ntype = jc\n"), hs::ConfigError);
  EXPECT_THROW(hs::parse_config("[nonsense]\nx = 1\n"), hs::ConfigError);
  std::string bad_digits = kBase;
  bad_digits.replace(bad_digits.find("basis:1,0"), 9, "basis:1,2");
  EXPECT_THROW(hs::parse_config(bad_digits), hs::ConfigError);
  std::string bad_time = kBase;
  bad_time.replace(bad_time.find("t_end = 10"), 10, "t_end = -1");
  EXPECT_THROW(hs::parse_config(bad_time), hs::ConfigError);
  EXPECT_THROW(hs::model_type_from_string("rabi"), hs::ConfigError);
  EXPECT_THROW(hs::figure_preset("fig9"), hs::ConfigError);
}

TEST(InitialSpec, Grammar) {
  const auto b = hs::InitialSpec::parse("basis:2,0,1");
  EXPECT_EQ(b.kind, hs::InitialSpec::Kind::basis);
  EXPECT_EQ(b.digits, (std::vector<int>{2, 0, 1}));
  const auto c = hs::InitialSpec::parse("coherent:1.5");
  EXPECT_EQ(c.kind, hs::InitialSpec::Kind::coherent);
  EXPECT_DOUBLE_EQ(c.value, 1.5);
  EXPECT_EQ(hs::InitialSpec::parse(c.str()).value, 1.5);
  EXPECT_EQ(hs::InitialSpec::parse("thermal:3").kind, hs::InitialSpec::Kind::thermal);
  EXPECT_THROW(hs::InitialSpec::parse("thermal:-1"), hs::ConfigError);
  EXPECT_THROW(hs::InitialSpec::parse("basis"), hs::ConfigError);
  EXPECT_THROW(hs::InitialSpec::parse("squeezed:1"), hs::ConfigError);
}

TEST(Presets, AllPresent) {
  const auto ids = hs::preset_ids();
  EXPECT_EQ(ids, (std::vector<std::string>{"fig2", "fig3", "fig4", "fig5", "fig6"}));
  for (const auto& id : ids) EXPECT_EQ(hs::figure_preset(id).id, id);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0,
                   std::numeric_limits<double>::min(), std::nextafter(1.0, 2.0)}) {
    EXPECT_EQ(std::stod(hs::format_double(v)), v) << hs::format_double(v);
  }
  EXPECT_EQ(hs::format_double(0.1), "0.1");
}

TEST(Csv, TableRoundTrip) {
  hs::CsvTable t({"t", "label", "n"});
  t.add_meta("figure", "fig3");
  t.add_meta("params", {{"g", 1.0}});
  t.add_row({0.5, std::string("a"), 3LL});
  t.add_row({1.0 / 3.0, std::string("b"), -7LL});
  const hs::CsvData d = hs::parse_csv(t.str());
  EXPECT_EQ(d.columns, t.columns());
  ASSERT_EQ(d.rows.size(), 2u);
  EXPECT_EQ(nlohmann::json::parse(d.meta.at("figure")), "fig3");
  EXPECT_EQ(nlohmann::json::parse(d.meta.at("params")).at("g"), 1.0);
  EXPECT_EQ(d.numeric_column("t")[1], 1.0 / 3.0);
  EXPECT_EQ(d.numeric_column("n")[1], -7.0);
  EXPECT_EQ(d.rows[0][1], "a");
  EXPECT_THROW(d.column_index("missing"), hs::Error);
}

TEST(ThermalState, MeanIsExact) {
  for (double mean : {0.0, 0.3, 2.0, 9.0}) {
    const auto p = hs::truncated_thermal(40, mean);
    double total = 0.0, first = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
      total += p[n];
      first += n * p[n];
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_NEAR(first, mean, 1e-10);
    // Gibbs: geometric ratios.
    if (mean > 0) EXPECT_NEAR(p[2] / p[1], p[1] / p[0], 1e-12);
  }
  EXPECT_THROW(hs::truncated_thermal(4, 5.0), hs::InvalidArgument);
}

TEST(ThermalState, PoissonNormalized) {
  const auto p = hs::truncated_poisson(30, 2.25);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-14);
  EXPECT_NEAR(p[1] / p[0], 2.25, 1e-12);
}
