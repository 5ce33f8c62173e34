// Copyright 2026 The holocnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "holocnot/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace holocnot {
namespace {

TEST(Config, DefaultsMatchTheDeviceTable) {
  const Config c = load_config("default");
  EXPECT_EQ(c.source, "default");
  EXPECT_NEAR(to_mhz(c.device.lambda[0]), 20.8, 1e-9);
  EXPECT_NEAR(to_mhz(c.device.lambda[1]), 19.9, 1e-9);
  EXPECT_NEAR(to_mhz(c.device.alpha[0]), 242.0, 1e-9);
  EXPECT_NEAR(to_mhz(c.device.omega_r), 5584.0, 1e-9);
  EXPECT_NEAR(to_ns(c.device.t1_e[1]), 15900.0, 1e-6);
  EXPECT_NEAR(to_ns(c.integrator.max_step), 2.0, 1e-12);
  EXPECT_EQ(c.space.levels_q1, 4);
  EXPECT_EQ(c.space.fock_dim, 5);
  EXPECT_EQ(c.device.drive_tuning, DriveTuning::dressed);
  EXPECT_EQ(c.digest, fnv1a_hex(default_config_text()));
  EXPECT_EQ(c.digest.size(), 16u);
}

TEST(Config, ShippedFileMatchesTheBuiltInDefaults) {
  const Config file = load_config(std::string(HOLOCNOT_SOURCE_DIR) + "/config/default.cfg");
  EXPECT_EQ(file.digest, load_config("default").digest);
}

TEST(Config, EmptyTextKeepsDefaults) {
  const Config c = parse_config("# nothing\n\n");
  EXPECT_EQ(c.device.lambda, DeviceParams{}.lambda);
}

TEST(Config, OverridesAndUnits) {
  const Config c = parse_config("lambda_1 = 30  # MHz\nramp_time=5\nkappa = 0.01\nfull_crosstalk = true\ncolumns = 4\n");
  EXPECT_NEAR(c.device.lambda[0], 2.0 * std::numbers::pi * 30e6, 1e-3);
  EXPECT_NEAR(c.device.ramp_time, 5e-9, 1e-20);
  EXPECT_NEAR(c.device.kappa, 2.0 * std::numbers::pi * 1e4, 1e-6);
  EXPECT_TRUE(c.device.full_crosstalk);
  EXPECT_EQ(c.integrator.columns, 4);
}

TEST(Config, MisspelledKeyIsAnError) {
  try {
    parse_config("lamda_1 = 20\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lamda_1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Config, MalformedInputIsRejected) {
  EXPECT_THROW(parse_config("alpha_1 = 24o\n"), ConfigError);
  EXPECT_THROW(parse_config("alpha_1\n"), ConfigError);
  EXPECT_THROW(parse_config("alpha_1 = \n"), ConfigError);
  EXPECT_THROW(parse_config("alpha_1 = 240\nalpha_1 = 250\n"), ConfigError);
  EXPECT_THROW(parse_config("full_crosstalk = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("levels = 3.5\n"), ConfigError);
  EXPECT_THROW(parse_config("drive_tuning = fancy\n"), ConfigError);
}

TEST(Config, OutOfRangeValuesAreRejected) {
  EXPECT_THROW(parse_config("t1_e_1 = -5\n"), ConfigError);
  EXPECT_THROW(parse_config("levels = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("max_step = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("tolerance = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("fock_dim = 0\n"), ConfigError);
}

TEST(Config, DephasingFromRamseyTime) {
  const Config c = parse_config("t1_e_1 = 60000\nt1_e_2 = 60000\nt2_star_1 = 86000\nt2_star_2 = 86000\n");
  EXPECT_NEAR(to_ns(c.device.t_phi[0]) / 1000.0, 303.53, 0.01);
  EXPECT_EQ(c.device.t_phi[0], c.device.t_phi[1]);
  EXPECT_THROW(parse_config("t2_star_1 = 86000\n"), ConfigError);
  EXPECT_THROW(parse_config("t2_star_1 = 86000\nt2_star_2 = 86000\nt_phi_1 = 100\n"), ConfigError);
  EXPECT_THROW(parse_config("t1_e_1 = 10000\nt2_star_1 = 30000\nt2_star_2 = 30000\n"), ConfigError);
}

TEST(Config, FilesAndDigests) {
  const auto path = std::filesystem::temp_directory_path() / "holocnot_config_test.cfg";
  {
    std::ofstream f(path);
    f << "alpha_2 = 300\n";
  }
  const Config c = load_config(path.string());
  EXPECT_NEAR(to_mhz(c.device.alpha[1]), 300.0, 1e-9);
  EXPECT_EQ(c.source, path.string());
  EXPECT_NE(c.digest, load_config("default").digest);
  std::filesystem::remove(path);
  try {
    load_config(path.string());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cannot read"), std::string::npos);
  }
}

}  // namespace
}  // namespace holocnot
