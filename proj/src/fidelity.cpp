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

#include "fastgate/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

std::size_t index(BasisState s) { return static_cast<std::size_t>(s); }

// Overlap term for the pair of states (s, t): returns {1 - Re[...], Re[...]}.
struct PairTerm {
  double loss;
  double value;
};

PairTerm pair_term(const StateResolvedGate& gate, const ThermalState& thermal, std::size_t s,
                   std::size_t t) {
  const auto& a = gate.displacement[s];
  const auto& b = gate.displacement[t];
  double decay = 0.0;
  double product_phase = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    decay += std::norm(b[p] - a[p]) * (0.5 + thermal.mean_occupation[p]);
    // D(a)^dag D(b) = exp(i Im(a* b)) D(b - a)
    product_phase += (std::conj(a[p]) * b[p]).imag();
  }
  const double dphi_s = gate.phase[s] - ideal_phase(kBasisStates[s]);
  const double dphi_t = gate.phase[t] - ideal_phase(kBasisStates[t]);
  const double angle = dphi_t - dphi_s + product_phase;
  const double e = std::exp(-decay);
  const double half_sin = std::sin(0.5 * angle);
  // 1 - e cos(angle) = (1 - e) + 2 e sin^2(angle / 2)
  return {-std::expm1(-decay) + 2.0 * e * half_sin * half_sin, e * std::cos(angle)};
}

void check_shapes(const StateResolvedGate& gate, const ThermalState& thermal) {
  const auto modes = gate.displacement[0].size();
  for (const auto& d : gate.displacement)
    if (d.size() != modes) throw InvalidArgument("inconsistent mode counts across basis states");
  thermal.validate(static_cast<int>(modes));
}

}  // namespace

ThermalState ThermalState::uniform(int modes, double nbar) {
  ThermalState state{std::vector<double>(static_cast<std::size_t>(modes), nbar)};
  state.validate(modes);
  return state;
}

void ThermalState::validate(int modes) const {
  if (mean_occupation.size() != static_cast<std::size_t>(modes))
    throw InvalidArgument("thermal state needs one occupation per mode");
  for (double n : mean_occupation)
    if (!(n >= 0.0) || !std::isfinite(n))
      throw InvalidArgument("mean occupations must be non-negative");
}

double thermal_expectation(Complex z, double nbar) {
  if (!(nbar >= 0.0)) throw InvalidArgument("mean occupation must be non-negative");
  return std::exp(-std::norm(z) * (0.5 + nbar));
}

double fidelity_2(Complex x, Complex y, double phase_error, double nbar) {
  return fidelity_2(x, y, phase_error, nbar, nbar);
}

double fidelity_2(Complex x, Complex y, double phase_error, double nbar_com,
                  double nbar_stretch) {
  const double mx = 0.5 + nbar_com;
  const double my = 0.5 + nbar_stretch;
  const double x2 = std::norm(x);
  const double y2 = std::norm(y);
  return (6.0 + std::exp(-4.0 * mx * x2) + std::exp(-4.0 * my * y2) +
          4.0 * std::exp(-(mx * x2 + my * y2)) * std::cos(phase_error)) /
         12.0;
}

double fidelity_3(Complex c1, Complex c2, Complex c3, double phi_gg,
                  const std::array<double, 3>& nbar) {
  const double a = (0.5 + nbar[0]) * std::norm(c1);
  const double b = (0.5 + nbar[1]) * std::norm(c2);
  const double c = (0.5 + nbar[2]) * std::norm(c3);
  const double s = std::sin(2.0 * phi_gg);
  return (6.0 + std::exp(-2.0 * b - 6.0 * c) +
          std::exp(-16.0 / 3.0 * a - 2.0 * b - 2.0 / 3.0 * c) +
          2.0 * (std::exp(-4.0 / 3.0 * a - 8.0 / 3.0 * c) +
                 std::exp(-4.0 / 3.0 * a - 2.0 * b - 2.0 / 3.0 * c)) *
              s) /
         12.0;
}

double ideal_phase(BasisState state) {
  return spin(state, 0) * spin(state, 1) * kQuarterPi;
}

StateResolvedGate resolve_states(const ModeSums& sums, const GateModel& model) {
  const double theta = entangling_phase(sums, model);
  StateResolvedGate gate;
  for (BasisState s : kBasisStates) {
    auto& d = gate.displacement[index(s)];
    d.resize(sums.restoration.size());
    for (int p = 0; p < model.mode_count(); ++p) {
      const auto i = static_cast<std::size_t>(p);
      d[i] = Complex(0.0, -1.0) * model.kick_strength(p, s) * sums.restoration[i];
    }
    gate.phase[index(s)] = spin(s, 0) * spin(s, 1) * theta;
  }
  return gate;
}

double infidelity_general(const StateResolvedGate& gate, const ThermalState& thermal) {
  check_shapes(gate, thermal);
  double loss = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t t = 0; t < 4; ++t) {
      if (s == t) continue;  // diagonal terms are exactly 1
      loss += pair_term(gate, thermal, s, t).loss / 24.0;
    }
  }
  return loss;
}

double fidelity_general(const StateResolvedGate& gate, const ThermalState& thermal) {
  return 1.0 - infidelity_general(gate, thermal);
}

double fidelity_for_state(const StateResolvedGate& gate, const ThermalState& thermal,
                          const std::array<double, 4>& a) {
  check_shapes(gate, thermal);
  double f = 0.0;
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = 0; t < 4; ++t) {
      const double w = a[s] * a[s] * a[t] * a[t];
      f += w * (s == t ? 1.0 : pair_term(gate, thermal, s, t).value);
    }
  return f;
}

GateResult evaluate_gate(const PulseTrain& train, const GateModel& model,
                         const ThermalState& thermal) {
  const ModeSums sums = mode_sums(train, model);
  const StateResolvedGate gate = resolve_states(sums, model);

  GateResult result;
  result.residual_displacement = gate.displacement;
  result.restoration.resize(sums.restoration.size());
  result.single_ion_phase.resize(sums.restoration.size());
  for (int p = 0; p < model.mode_count(); ++p) {
    const auto i = static_cast<std::size_t>(p);
    result.restoration[i] = 2.0 * model.lamb_dicke(p) * sums.restoration[i];
    result.single_ion_phase[i] =
        model.kick_strength(p, BasisState::gg) * std::conj(sums.restoration[i]).real();
  }
  result.entangling_phase = entangling_phase(sums, model);
  result.phi_gg = gate.phase[index(BasisState::gg)];
  result.gate_time = train.gate_time();
  result.total_pulse_pairs = train.total_pulse_pairs();
  const double loss = infidelity_general(gate, thermal);
  result.infidelity = std::max(loss, kInfidelityFloor);
  result.fidelity = 1.0 - loss;
  return result;
}

std::array<double, 2> fidelity_monte_carlo(const StateResolvedGate& gate,
                                           const ThermalState& thermal, std::size_t samples,
                                           unsigned long long seed) {
  if (samples < 2) throw InvalidArgument("Monte Carlo average needs at least two samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    std::array<double, 4> a{};
    double norm = 0.0;
    for (auto& x : a) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : a) x /= norm;
    const double f = fidelity_for_state(gate, thermal, a);
    const double delta = f - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (f - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

}  // namespace fastgate
