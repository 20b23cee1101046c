// Copyright 2026 The Fastgate Authors.
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fastgate/config.hpp"

namespace fastgate::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 2, kInfeasible = 3, kNumerical = 4 };

enum class Format { csv, json };

Format parse_format(const std::string& text);

/// Laser power per beam, W. Throws InvalidArgument unless both are positive.
double average_power(double repetition_rate_hz, double pulse_energy_j);

/// Positions, mode table and the radial-ratio curve for 1..max(L, 20) ions.
void cmd_crystal(const RunConfig& config, const std::filesystem::path& out, Format format);

/// One optimisation: manifest.json, scheme.json, train.csv and the rotating-frame
/// trajectory of every mode for each basis state.
void cmd_design(const RunConfig& config, const std::filesystem::path& out, Format format);

void cmd_sweep(const RunConfig& config, const std::filesystem::path& out, Format format);

struct TrajectoryRequest {
  std::optional<std::string> scheme_path;  ///< designs from the config when empty
  std::string state = "gg";
  int mode = 0;
  std::string frame = "rotating";
  int samples = 2000;
};

void cmd_trajectory(const RunConfig& config, const TrajectoryRequest& request,
                    const std::filesystem::path& out, Format format);
void cmd_displacement(const RunConfig& config, const TrajectoryRequest& request,
                      const std::filesystem::path& out, Format format);

/// Full command line; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fastgate::cli
