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

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "fastgate/crystal.hpp"

namespace fastgate {

enum class SchemeFamily { gzc, frag, duan, custom };

/// symmetric: equal and opposite kicks on both qubit states.
/// asymmetric: only the ground state is kicked.
enum class KickConvention { symmetric, asymmetric };

enum class SymmetryClass { none, reflected_antisymmetric, doubled_four_block };

std::string_view to_string(SchemeFamily family);
std::string_view to_string(KickConvention convention);
std::string_view to_string(SymmetryClass symmetry);
SchemeFamily parse_family(std::string_view text);
KickConvention parse_convention(std::string_view text);

/// Burst of |count| counter-propagating pi-pulse pairs centred at `time`.
/// The sign of count is the direction of the first pulse in each pair.
struct KickGroup {
  int count = 0;
  double time = 0.0;  ///< s

  friend bool operator==(const KickGroup&, const KickGroup&) = default;
};

/// Ordered kick groups addressed at one ion pair.
class GateScheme {
 public:
  /// Throws InvalidArgument for zero counts, non-increasing times or an
  /// invalid pair.
  explicit GateScheme(std::vector<KickGroup> groups, SchemeFamily family = SchemeFamily::custom,
                      int n = 0, int cycles = 1);

  const std::vector<KickGroup>& groups() const { return groups_; }
  SchemeFamily family() const { return family_; }
  int n() const { return n_; }
  int cycles() const { return cycles_; }
  IonPair target_pair() const { return pair_; }
  KickConvention convention() const { return convention_; }

  GateScheme with_target(IonPair pair) const;
  GateScheme with_convention(KickConvention convention) const;
  GateScheme shifted(double offset) const;

  int total_pulse_pairs() const;

  friend bool operator==(const GateScheme&, const GateScheme&) = default;

 private:
  std::vector<KickGroup> groups_;
  SchemeFamily family_;
  int n_;
  int cycles_;
  IonPair pair_{0, 1};
  KickConvention convention_ = KickConvention::asymmetric;
};

/// z = (-2n, 3n, -2n, 2n, -3n, 2n) at t = (-tau1, -tau2, -tau3, tau3, tau2, tau1).
GateScheme build_gzc(int n, double tau1, double tau2, double tau3);

/// z = (-n, 2n, -2n, 2n, -2n, n) at t = (-tau1, -tau2, -tau3, tau3, tau2, tau1).
GateScheme build_frag(int n, double tau1, double tau2, double tau3);

/// (n, -2n, n) at (0, tau1, 2 tau1). Cycle c carries the sign (-1)^popcount(c),
/// so two cycles are a flipped repeat and four form the doubled four-block. Cycles are separated by `cycle_gap` between the last
/// group of one cycle and the first of the next; a negative value selects
/// 2 tau1 / 3, which makes the expansion contiguous when tau1 = 1.5 n / f_r.
GateScheme build_duan(int n, double tau1, int cycles, double cycle_gap = -1.0);

/// Finite-rate Duan train of back-to-back blocks of n, 2n, n pulse pairs per
/// cycle. The outer-block duration n / f_r is the single timing freedom.
GateScheme build_duan_contiguous(int n, double repetition_rate, int cycles);

inline constexpr double kInstantaneous = std::numeric_limits<double>::infinity();

struct PulseEvent {
  double time = 0.0;  ///< s
  int weight = 0;     ///< +-1 per pulse pair, or the full group count when instantaneous.

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

/// Time-ordered pulse-pair events at a fixed repetition rate.
class PulseTrain {
 public:
  PulseTrain() = default;
  PulseTrain(std::vector<PulseEvent> events, double repetition_rate);

  const std::vector<PulseEvent>& events() const { return events_; }
  double repetition_rate() const { return repetition_rate_; }
  bool instantaneous() const { return !(repetition_rate_ < kInstantaneous); }
  bool empty() const { return events_.empty(); }

  /// Last event time minus first event time; zero for an empty train.
  double gate_time() const;
  int total_pulse_pairs() const;
  PulseTrain shifted(double offset) const;

 private:
  std::vector<PulseEvent> events_;
  double repetition_rate_ = kInstantaneous;
};

/// Minimum centre-to-centre spacing of adjacent groups that avoids overlap.
double required_group_spacing(int count_a, int count_b, double repetition_rate);

/// Spreads each group into |z| pulse pairs tau_r = 1 / f_r apart, centred on the
/// group time. An infinite rate keeps one weighted event per group. Throws
/// OverlapError naming the first colliding pair of groups.
PulseTrain expand(const GateScheme& scheme, double repetition_rate);

/// Matches the group structure against the reflected-antisymmetric and
/// four-block templates (about the scheme's own time centre).
SymmetryClass classify_symmetry(const GateScheme& scheme);

}  // namespace fastgate
