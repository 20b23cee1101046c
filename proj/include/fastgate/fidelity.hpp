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

#include <array>
#include <span>
#include <vector>

#include "fastgate/dynamics.hpp"

namespace fastgate {

/// Thermal product state, one mean occupation per mode.
struct ThermalState {
  std::vector<double> mean_occupation;

  static ThermalState uniform(int modes, double nbar);
  /// Throws InvalidArgument on a size mismatch or a negative occupation.
  void validate(int modes) const;
};

/// Infidelities below this are indistinguishable from zero in double precision.
inline constexpr double kInfidelityFloor = 1e-14;

/// <D(z)> over a thermal state: exp(-|z|^2 (1/2 + nbar)).
double thermal_expectation(Complex z, double nbar);

/// Two-ion state-averaged fidelity with x = C_1(gg), y = C_2(ge) and
/// phase_error = realized relative phase - pi/2.
double fidelity_2(Complex x, Complex y, double phase_error, double nbar);
double fidelity_2(Complex x, Complex y, double phase_error, double nbar_com,
                  double nbar_stretch);

/// Three-ion closed form for the pair (1,2), with c_p = 2 eta_p sum_k z_k exp(i nu_p t_k).
double fidelity_3(Complex c1, Complex c2, Complex c3, double phi_gg,
                  const std::array<double, 3>& nbar);

/// Per-basis-state residual displacements and realized entangling phases.
struct StateResolvedGate {
  std::array<std::vector<Complex>, 4> displacement;  ///< [state][mode]
  std::array<double, 4> phase{};                     ///< realized phi_s, ideal is +-pi/4
};

/// Phase of the ideal unitary on a basis state: +pi/4 on gg, ee and -pi/4 otherwise.
double ideal_phase(BasisState state);

/// Builds the per-state data from mode sums; phases keep only the sigma1 sigma2
/// part, the single-ion parts being removable by local rotations.
StateResolvedGate resolve_states(const ModeSums& sums, const GateModel& model);

/// 1 - F for the average over real internal-state coefficients on the unit
/// 3-sphere (fourth moments 1/8 and 1/24). Evaluated term by term so that small
/// infidelities keep their relative precision.
double infidelity_general(const StateResolvedGate& gate, const ThermalState& thermal);
double fidelity_general(const StateResolvedGate& gate, const ThermalState& thermal);

/// F_1 for one real coefficient vector a (|a| = 1), used to check the averaging.
double fidelity_for_state(const StateResolvedGate& gate, const ThermalState& thermal,
                          const std::array<double, 4>& coefficients);

struct GateResult {
  std::array<std::vector<Complex>, 4> residual_displacement;  ///< C_p per basis state
  std::vector<Complex> restoration;     ///< c_p = 2 eta_p sum_k z_k exp(i nu_p t_k)
  double entangling_phase = 0.0;        ///< Theta, target pi/4
  double phi_gg = 0.0;
  std::vector<double> single_ion_phase;  ///< xi'_p on gg per unit coherent amplitude
  double gate_time = 0.0;                ///< s
  int total_pulse_pairs = 0;
  double fidelity = 0.0;
  double infidelity = 0.0;               ///< floored at kInfidelityFloor
};

GateResult evaluate_gate(const PulseTrain& train, const GateModel& model,
                         const ThermalState& thermal);

/// Monte Carlo estimate of the state-averaged fidelity from uniformly random
/// real unit vectors; returns {mean, standard error}.
std::array<double, 2> fidelity_monte_carlo(const StateResolvedGate& gate,
                                           const ThermalState& thermal, std::size_t samples,
                                           unsigned long long seed);

}  // namespace fastgate
