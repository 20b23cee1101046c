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

#include <iosfwd>
#include <string>
#include <vector>

#include "fastgate/optimizer.hpp"

namespace fastgate {

/// Run settings in boundary units (MHz, amu, nm, GHz, ns). Plain-text form:
///
///   [trap]       axial_frequency_mhz, mass_amu, wavelength_nm, ions
///   [scheme]     family, convention, target_pair (1-based "i,j"), cycles,
///                objective, gate_time_ns
///   [laser]      repetition_rate_ghz (number or inf)
///   [motional]   mean_occupation (one value, or one per mode)
///   [optimizer]  AnnealConfig fields, timing_scale_ns
///   [sweep]      axis, repetition_rates_ghz, ion_counts, spacing,
///                pair_position, gate_times_ns, blocks
///   [output]     directory, format
///
/// '#' starts a comment. Missing keys keep their defaults.
struct RunConfig {
  double axial_frequency_mhz = 1.2;
  double mass_amu = 39.962590863;
  double wavelength_nm = 393.0;
  int ions = 2;

  std::string family = "frag";
  std::string convention = "asymmetric";
  int pair_first = 1;
  int pair_second = 2;
  int cycles = 1;
  std::string objective = "min-time";
  double gate_time_ns = 0.0;

  double repetition_rate_ghz = 5.0;  ///< +inf for instantaneous kicks

  std::vector<double> mean_occupation{0.1};

  double initial_temperature = 0.0;
  double cooling_factor = 0.97;
  int steps_per_temperature = 200;
  int temperature_levels = 40;
  int restarts = 8;
  unsigned long long seed = 1;
  double timing_scale_ns = 2.0;
  int n_min = 1;
  int n_max = 0;
  double n_move_probability = 0.1;
  double infidelity_threshold = 1e-8;
  int projection_levels = 40;
  int projection_steps = 40;
  bool polish = true;

  std::string sweep_axis = "repetition-rate";
  std::vector<double> repetition_rates_ghz{0.3, 1.0, 5.0, 20.0};
  std::vector<int> ion_counts{2, 3, 4, 5};
  std::string spacing = "fixed-distance";
  std::string pair_position = "end";
  std::vector<double> gate_times_ns{};
  std::vector<int> blocks{};

  std::string output_directory = "out";
  std::string output_format = "csv";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  /// Throws InvalidArgument naming the offending field ("trap.ions").
  void validate() const;

  TrapConfig trap() const;
  DesignProblem problem() const;
  AnnealConfig anneal() const;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

}  // namespace fastgate
