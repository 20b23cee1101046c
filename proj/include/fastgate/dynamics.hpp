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
#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "fastgate/crystal.hpp"
#include "fastgate/schemes.hpp"

namespace fastgate {

using Complex = std::complex<double>;

/// Computational basis of the addressed pair. sigma^z is +1 on g and -1 on e;
/// under the asymmetric convention g is the kicked state.
enum class BasisState { gg, ge, eg, ee };

inline constexpr std::array<BasisState, 4> kBasisStates{BasisState::gg, BasisState::ge,
                                                        BasisState::eg, BasisState::ee};

std::string_view to_string(BasisState state);

/// sigma^z eigenvalue of the first (which = 0) or second (which = 1) target ion.
int spin(BasisState state, int which);

/// Per-mode couplings of one addressed pair in one crystal.
class GateModel {
 public:
  GateModel(const IonCrystal& crystal, IonPair pair, KickConvention convention);

  const IonCrystal& crystal() const { return crystal_; }
  IonPair pair() const { return pair_; }
  KickConvention convention() const { return convention_; }
  int mode_count() const { return crystal_.size(); }

  double frequency(int mode) const { return crystal_.mode_frequencies()[idx(mode)]; }
  double lamb_dicke(int mode) const { return crystal_.lamb_dicke()[idx(mode)]; }

  /// kappa_p(s) such that c_pk = z_k kappa_p(s).
  double kick_strength(int mode, BasisState state) const;

  /// Weight of P_p = sum_{m>k} z_m z_k sin(nu_p (t_m - t_k)) in the entangling
  /// phase: 8 eta_p^2 b_i b_j (symmetric) or 2 eta_p^2 b_i b_j (asymmetric).
  double phase_weight(int mode) const;

 private:
  static std::size_t idx(int mode) { return static_cast<std::size_t>(mode); }

  IonCrystal crystal_;
  IonPair pair_;
  KickConvention convention_;
};

/// State-independent sums of a train over every mode.
struct ModeSums {
  std::vector<Complex> restoration;  ///< S_p = sum_k z_k exp(i nu_p t_k)
  std::vector<double> phase;         ///< P_p = sum_{m>k} z_m z_k sin(nu_p (t_m - t_k))
};

ModeSums mode_sums(const PulseTrain& train, const GateModel& model);

/// C_p = -i sum_k c_pk exp(i nu_p t_k).
Complex mode_displacement(const PulseTrain& train, const GateModel& model, BasisState state,
                          int mode);

std::vector<Complex> mode_displacements(const PulseTrain& train, const GateModel& model,
                                        BasisState state);

/// Coefficient Theta of sigma_1^z sigma_2^z in the accumulated phase.
double entangling_phase(const PulseTrain& train, const GateModel& model);
double entangling_phase(const ModeSums& sums, const GateModel& model);

/// Two-ion condition set with frequencies nu and sqrt(3) nu.
struct TwoIonConditions {
  double phase = 0.0;   ///< 4 eta^2 sum z_m z_k [sin(nu dt) - sin(sqrt3 nu dt) / sqrt3]
  Complex com{};        ///< sum z_k exp(-i nu t_k)
  Complex stretch{};    ///< sum z_k exp(-i sqrt3 nu t_k)
};

TwoIonConditions two_ion_conditions(const PulseTrain& train, double axial_frequency,
                                    double lamb_dicke);

/// Re[alpha_p sum_k c_pk exp(-i nu_p t_k)] for every mode.
std::vector<double> single_ion_phase(const PulseTrain& train, const GateModel& model,
                                     BasisState state, std::span<const Complex> alpha);

enum class Frame { rotating, lab };

/// Coherent-state centre alpha = position + i momentum.
struct PhaseSpacePoint {
  double time = 0.0;
  double position = 0.0;
  double momentum = 0.0;
};

/// Centre of an initially unexcited coherent state sampled on an ascending
/// time grid. Events at exactly a grid time are already applied there.
std::vector<PhaseSpacePoint> trajectory(const PulseTrain& train, const GateModel& model,
                                        BasisState state, int mode, Frame frame,
                                        std::span<const double> times);

/// Signed shoelace area of the polygon through the points.
double enclosed_area(std::span<const PhaseSpacePoint> points);

/// Uniform grid of `samples` points spanning the train, padded on both sides.
std::vector<double> time_grid(const PulseTrain& train, std::size_t samples,
                              double padding = 0.0);

struct DrivenDisplacement {
  std::vector<double> times;
  std::vector<std::vector<double>> displacement;  ///< [ion][sample], m
  std::vector<double> peak;                       ///< max |x_i(t)| over the grid, m
  std::vector<double> final;                      ///< x_i after the last event, m
};

/// Real-space ion excursion from free evolution, all modes starting at the origin.
DrivenDisplacement driven_displacement(const PulseTrain& train, const GateModel& model,
                                       BasisState state, std::span<const double> times);

/// Event-by-event product of displacement and rotation operators.
struct ComposedEvolution {
  std::vector<Complex> displacement;  ///< C_p in the frame of the ideal free evolution
  std::vector<double> phase;          ///< xi_p, including state-independent parts
};

ComposedEvolution oracle_compose(const PulseTrain& train, const GateModel& model,
                                 BasisState state);

}  // namespace fastgate
