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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fastgate/crystal.hpp"
#include "fastgate/fidelity.hpp"
#include "fastgate/schemes.hpp"

namespace fastgate {

enum class Objective { max_fidelity, min_time };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view text);

struct AnnealConfig {
  double initial_temperature = 0.0;  ///< <= 0 selects the spread of 100 random samples
  double cooling_factor = 0.97;
  int steps_per_temperature = 200;
  int temperature_levels = 40;
  int restarts = 8;
  std::uint64_t seed = 1;
  double timing_scale = 2e-9;       ///< s, width of the Gaussian timing moves
  int n_min = 1;
  int n_max = 0;                    ///< <= 0 picks a range from the repetition rate
  double n_move_probability = 0.1;
  double infidelity_threshold = 1e-8;
  int projection_levels = 40;       ///< min-time stage, each candidate is polished
  int projection_steps = 40;
  bool polish = true;

  void validate() const;

  friend bool operator==(const AnnealConfig&, const AnnealConfig&) = default;
};

struct DesignProblem {
  TrapConfig trap = TrapConfig::calcium40(2);
  IonPair pair{0, 1};
  SchemeFamily family = SchemeFamily::frag;
  KickConvention convention = KickConvention::asymmetric;
  double repetition_rate = 5e9;  ///< Hz, kInstantaneous for ideal kicks
  /// Per-mode occupations; empty means kReferenceMeanOccupation on every mode.
  std::vector<double> mean_occupation;
  Objective objective = Objective::min_time;
  int cycles = 1;           ///< Duan only
  double gate_time = 0.0;   ///< > 0 pins T_G for the six-group families

  void validate() const;
  /// Occupations for a crystal with `modes` modes; a single entry is broadcast.
  ThermalState thermal(int modes) const;
};

struct Design {
  GateScheme scheme;
  GateResult result;
  int restart = 0;
  bool meets_threshold = false;
  long evaluations = 0;
};

/// Metropolis rule on a maximised objective: always accept an improvement,
/// otherwise accept when uniform < exp(delta / temperature).
bool metropolis_accept(double delta, double temperature, double uniform);

/// Evaluates a scheme on a crystal at a repetition rate.
GateResult evaluate_scheme(const GateScheme& scheme, const IonCrystal& crystal,
                           double repetition_rate, const ThermalState& thermal);

/// Two-stage anneal: maximise -log10(infidelity), then, for min-time problems,
/// shorten the gate while keeping the infidelity under the threshold.
/// Throws InfeasibleError when no sampled timing is overlap-free.
Design optimize(const DesignProblem& problem, const AnnealConfig& config);

/// Smallest block size n whose contiguous finite-rate Duan train reaches
/// Theta >= pi/4.
int duan_blocks_for_phase(const GateModel& model, double repetition_rate, int cycles,
                          int n_limit = 20000);

/// tau1 at which an instantaneous Duan scheme reaches Theta = pi/4.
double duan_tau_for_phase(const GateModel& model, int n, int cycles);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

/// Least-squares line through (log x, log y).
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct RateRow {
  double repetition_rate;
  Design design;
};

struct RateSweep {
  std::vector<RateRow> rows;
  PowerLawFit time_vs_rate;
  PowerLawFit time_vs_pulses;
};

RateSweep sweep_repetition_rate(const DesignProblem& problem, const AnnealConfig& config,
                                std::span<const double> rates);

struct PulseRow {
  int n;
  Design design;
};

struct PulseSweep {
  std::vector<PulseRow> rows;
  PowerLawFit time_vs_pulses;
};

/// One optimisation per fixed block size n.
PulseSweep sweep_pulse_number(const DesignProblem& problem, const AnnealConfig& config,
                              std::span<const int> blocks);

enum class SpacingMode { fixed_frequency, fixed_distance };
enum class PairPosition { end, middle };

std::string_view to_string(SpacingMode mode);
std::string_view to_string(PairPosition position);
SpacingMode parse_spacing_mode(std::string_view text);
PairPosition parse_pair_position(std::string_view text);

/// (0, 1) for the end pair; the two central ions, or the centre ion and its
/// right neighbour for odd L.
IonPair target_pair(int ion_count, PairPosition position);

struct IonRow {
  int ion_count;
  double axial_frequency;
  double separation;
  IonPair pair;
  GateScheme scheme;
  GateResult result;
  double max_residual;  ///< max_p,s |C_p(s)|
};

/// Fixed frequency: one optimisation per L. Fixed distance: one two-ion design
/// at problem.trap, re-evaluated with the trap relaxed so the target pair keeps
/// its two-ion separation.
std::vector<IonRow> sweep_ion_number(const DesignProblem& problem, const AnnealConfig& config,
                                     std::span<const int> ion_counts, SpacingMode mode,
                                     PairPosition position);

struct GateTimeRow {
  double gate_time;
  std::optional<Design> design;  ///< empty when the gate time is overlap-infeasible
};

struct GateTimeSweep {
  std::vector<GateTimeRow> rows;
  int peak = -1;  ///< index of the highest-fidelity feasible row
};

/// Max-fidelity optimisation at each pinned gate time.
GateTimeSweep sweep_gate_time_distant(const DesignProblem& problem, const AnnealConfig& config,
                                      std::span<const double> gate_times);

/// Moves every group away from the scheme centre by the shift.
GateScheme dilate_timings(const GateScheme& scheme, double shift);

struct PerturbationRow {
  double shift;
  double fidelity;
};

std::vector<PerturbationRow> perturbation_sweep(const GateScheme& scheme,
                                                const IonCrystal& crystal,
                                                double repetition_rate,
                                                const ThermalState& thermal,
                                                std::span<const double> shifts);

}  // namespace fastgate
