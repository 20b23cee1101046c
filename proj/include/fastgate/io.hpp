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
#include <span>
#include <string>

#include <json.hpp>

#include "fastgate/crystal.hpp"
#include "fastgate/dynamics.hpp"
#include "fastgate/fidelity.hpp"
#include "fastgate/optimizer.hpp"
#include "fastgate/schemes.hpp"

namespace fastgate::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits; "inf" and "-inf" for infinities.
std::string format_number(double value);

/// Repetition rates serialize as numbers in Hz, or the string "inf".
Json rate_to_json(double repetition_rate);
double rate_from_json(const Json& value);

void write_positions_csv(std::ostream& out, const IonCrystal& crystal);
void write_modes_csv(std::ostream& out, const IonCrystal& crystal);
void write_radial_ratio_csv(std::ostream& out, std::span<const int> ion_counts);
Json crystal_to_json(const IonCrystal& crystal);

/// {family, n, cycles, convention, target_pair (1-based), counts, times_s}.
Json scheme_to_json(const GateScheme& scheme);
GateScheme scheme_from_json(const Json& value);

/// time_s,direction with one row per pulse pair (or per weighted kick).
void write_train_csv(std::ostream& out, const PulseTrain& train);
void write_trajectory_csv(std::ostream& out, std::span<const PhaseSpacePoint> points);
/// time_s,x_1_m,...,x_L_m
void write_displacement_csv(std::ostream& out, const DrivenDisplacement& displacement);

/// fidelity, infidelity, theta, phi_gg, phi_prime, gate time, pulse pairs and
/// per-state |C_p|.
Json result_to_json(const GateResult& result);

Json problem_to_json(const DesignProblem& problem);
Json anneal_to_json(const AnnealConfig& config);

Json design_manifest(const DesignProblem& problem, const AnnealConfig& config,
                     const Design& design, double wall_time_s);

void write_rate_sweep_csv(std::ostream& out, const RateSweep& sweep);
void write_pulse_sweep_csv(std::ostream& out, const PulseSweep& sweep);
void write_ion_sweep_csv(std::ostream& out, std::span<const IonRow> rows);
void write_gate_time_sweep_csv(std::ostream& out, const GateTimeSweep& sweep);

}  // namespace fastgate::io
