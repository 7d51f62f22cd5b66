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
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "hybridspin/oracles.hpp"

namespace hs = hybridspin;
using std::numbers::pi;

TEST(SupermodeOracle, PassesAtTightTolerance) {
  const hs::OracleReport r = hs::check_supermode_spectra();
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.deviation, 1e-10);
  EXPECT_EQ(r.tolerance, 1e-10);
}

TEST(SupermodeOracle, SeedChangesDrawsNotVerdict) {
  EXPECT_TRUE(hs::check_supermode_spectra(1, 5).passed);
  EXPECT_TRUE(hs::check_supermode_spectra(99, 5).passed);
}

TEST(MagnusOracle, DeficitVanishesWithRatio) {
  const int spins[] = {2};
  const double ratios[] = {0.001, 0.02};
  const hs::OracleReport r = hs::check_magnus_ms(spins, ratios);
  EXPECT_TRUE(r.passed);
  const auto& runs = r.details.at("runs");
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_LT(runs[0].at("deficit").get<double>(), runs[1].at("deficit").get<double>());
  EXPECT_LT(runs[1].at("deficit").get<double>(), 1e-3);
  EXPECT_GT(runs[1].at("phonon_purity").get<double>(), 0.999);
}

TEST(MagnusOracle, DefaultSuitePasses) {
  const hs::OracleReport r = hs::check_magnus_ms();
  EXPECT_TRUE(r.passed) << r.to_json().dump();
  EXPECT_LT(r.deviation, 1e-3);
}

TEST(GhzOracle, FidelityAtZeroIsHalf) {
  EXPECT_NEAR(hs::ghz_fidelity(4, 0.0, 1), 0.5, 1e-15);
  EXPECT_NEAR(hs::ghz_fidelity(4, 0.0, -1), 0.5, 1e-15);
}

TEST(GhzOracle, CalibratesNearEighthPi) {
  const hs::GhzCalibration c = hs::calibrate_ghz_phase(4);
  EXPECT_TRUE(c.report.passed);
  EXPECT_GT(c.fidelity, 0.9999);
  EXPECT_NEAR(c.theta_star, pi / 8.0, 1e-6);
  EXPECT_TRUE(c.sign == 1 || c.sign == -1);
  const double phi = c.gate_phase();
  EXPECT_GT(phi, 0.0);
  EXPECT_LE(phi, pi / 2.0);
}

TEST(GhzOracle, TwoSpinAnalog) {
  // |00> -> (|00> -/+ i|11>)/sqrt2 up to a global phase: relative phase pi/2.
  const hs::GhzCalibration c = hs::calibrate_ghz_phase(2);
  EXPECT_GT(c.fidelity, 0.9999);
  EXPECT_NEAR(c.theta_star, pi / 8.0, 1e-6);
  EXPECT_NEAR(hs::ghz_fidelity(2, pi / 8.0, c.sign), 1.0, 1e-12);
}

TEST(HpOracle, PassesAndImprovesWithN) {
  const hs::OracleReport r = hs::check_hp_vs_exact();
  EXPECT_TRUE(r.passed) << r.to_json().dump();
  EXPECT_LE(r.deviation, 0.05);
  EXPECT_TRUE(r.details.at("strictly_decreasing").get<bool>());
  const auto devs = r.details.at("deviations").get<std::vector<double>>();
  ASSERT_EQ(devs.size(), 3u);
  EXPECT_GT(devs.front(), devs.back());
}

TEST(HpOracle, SingleSpinSingleExcitationCoincides) {
  EXPECT_LT(hs::hp_exact_deviation(1, 1), 1e-9);
}

TEST(RwaOracle, AgreesAndNegativeControlFails) {
  const hs::OracleReport r = hs::check_rwa_sidebands();
  EXPECT_TRUE(r.passed) << r.to_json().dump();
  EXPECT_LT(r.details.at("red_gap").get<double>(), 0.05);
  EXPECT_LT(r.details.at("blue_gap").get<double>(), 0.05);
  EXPECT_GT(r.details.at("negative_control_gap").get<double>(), 0.2);
}

TEST(Suite, DigestIsStableHex) {
  EXPECT_EQ(hs::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(hs::fnv1a_hex("a"), "af63dc4c8601ec8c");
  const std::string names[] = {"supermode_spectra"};
  const hs::OracleSuite a = hs::run_oracles(names);
  const hs::OracleSuite b = hs::run_oracles(names);
  EXPECT_TRUE(a.all_passed());
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(a.digest().size(), 16u);
  ASSERT_NE(a.find("supermode_spectra"), nullptr);
  EXPECT_EQ(a.find("magnus_ms"), nullptr);
}
