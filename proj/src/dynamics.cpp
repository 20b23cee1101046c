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

#include "fastgate/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_mode(const GateModel& model, int mode) {
  if (mode < 0 || mode >= model.mode_count()) throw InvalidArgument("mode index outside crystal");
}

double weight(KickConvention convention, int sigma) {
  return convention == KickConvention::symmetric ? sigma : 0.5 * (1 + sigma);
}

}  // namespace

std::string_view to_string(BasisState state) {
  switch (state) {
    case BasisState::gg: return "gg";
    case BasisState::ge: return "ge";
    case BasisState::eg: return "eg";
    case BasisState::ee: return "ee";
  }
  return "gg";
}

int spin(BasisState state, int which) {
  const bool first_excited = state == BasisState::eg || state == BasisState::ee;
  const bool second_excited = state == BasisState::ge || state == BasisState::ee;
  return (which == 0 ? first_excited : second_excited) ? -1 : 1;
}

GateModel::GateModel(const IonCrystal& crystal, IonPair pair, KickConvention convention)
    : crystal_(crystal), pair_(pair), convention_(convention) {
  if (pair.first < 0 || pair.first >= pair.second || pair.second >= crystal.size())
    throw InvalidArgument("target pair must satisfy 1 <= i < j <= L");
}

double GateModel::kick_strength(int mode, BasisState state) const {
  const double bi = crystal_.mode_vector(mode, pair_.first);
  const double bj = crystal_.mode_vector(mode, pair_.second);
  return 2.0 * lamb_dicke(mode) *
         (bi * weight(convention_, spin(state, 0)) + bj * weight(convention_, spin(state, 1)));
}

double GateModel::phase_weight(int mode) const {
  const double eta = lamb_dicke(mode);
  const double prefactor = convention_ == KickConvention::symmetric ? 8.0 : 2.0;
  return prefactor * eta * eta * crystal_.mode_vector(mode, pair_.first) *
         crystal_.mode_vector(mode, pair_.second);
}

ModeSums mode_sums(const PulseTrain& train, const GateModel& model) {
  const auto modes = static_cast<std::size_t>(model.mode_count());
  ModeSums sums{std::vector<Complex>(modes), std::vector<double>(modes, 0.0)};
  for (std::size_t p = 0; p < modes; ++p) {
    const double nu = model.frequency(static_cast<int>(p));
    Complex running{};
    double phase = 0.0;
    for (const auto& e : train.events()) {
      const Complex rot = std::polar(1.0, nu * e.time);
      phase += e.weight * (rot * std::conj(running)).imag();
      running += static_cast<double>(e.weight) * rot;
    }
    sums.restoration[p] = running;
    sums.phase[p] = phase;
  }
  return sums;
}

Complex mode_displacement(const PulseTrain& train, const GateModel& model, BasisState state,
                          int mode) {
  check_mode(model, mode);
  const double nu = model.frequency(mode);
  Complex sum{};
  for (const auto& e : train.events())
    sum += static_cast<double>(e.weight) * std::polar(1.0, nu * e.time);
  return -kI * model.kick_strength(mode, state) * sum;
}

std::vector<Complex> mode_displacements(const PulseTrain& train, const GateModel& model,
                                        BasisState state) {
  std::vector<Complex> out(static_cast<std::size_t>(model.mode_count()));
  for (int p = 0; p < model.mode_count(); ++p)
    out[static_cast<std::size_t>(p)] = mode_displacement(train, model, state, p);
  return out;
}

double entangling_phase(const ModeSums& sums, const GateModel& model) {
  double theta = 0.0;
  for (int p = 0; p < model.mode_count(); ++p)
    theta += model.phase_weight(p) * sums.phase[static_cast<std::size_t>(p)];
  return theta;
}

double entangling_phase(const PulseTrain& train, const GateModel& model) {
  return entangling_phase(mode_sums(train, model), model);
}

TwoIonConditions two_ion_conditions(const PulseTrain& train, double axial_frequency,
                                    double lamb_dicke) {
  const double root3 = std::sqrt(3.0);
  const auto& ev = train.events();
  TwoIonConditions out;
  double bracket = 0.0;
  for (std::size_t m = 0; m < ev.size(); ++m) {
    for (std::size_t k = 0; k < m; ++k) {
      const double dt = ev[m].time - ev[k].time;
      bracket += ev[m].weight * ev[k].weight *
                 (std::sin(axial_frequency * dt) - std::sin(root3 * axial_frequency * dt) / root3);
    }
    out.com += static_cast<double>(ev[m].weight) * std::polar(1.0, -axial_frequency * ev[m].time);
    out.stretch +=
        static_cast<double>(ev[m].weight) * std::polar(1.0, -root3 * axial_frequency * ev[m].time);
  }
  out.phase = 4.0 * lamb_dicke * lamb_dicke * bracket;
  return out;
}

std::vector<double> single_ion_phase(const PulseTrain& train, const GateModel& model,
                                     BasisState state, std::span<const Complex> alpha) {
  if (alpha.size() != static_cast<std::size_t>(model.mode_count()))
    throw InvalidArgument("one coherent amplitude per mode required");
  std::vector<double> out(alpha.size());
  for (int p = 0; p < model.mode_count(); ++p) {
    const double nu = model.frequency(p);
    Complex sum{};
    for (const auto& e : train.events())
      sum += static_cast<double>(e.weight) * std::polar(1.0, -nu * e.time);
    const auto i = static_cast<std::size_t>(p);
    out[i] = (alpha[i] * model.kick_strength(p, state) * sum).real();
  }
  return out;
}

std::vector<PhaseSpacePoint> trajectory(const PulseTrain& train, const GateModel& model,
                                        BasisState state, int mode, Frame frame,
                                        std::span<const double> times) {
  check_mode(model, mode);
  if (!std::is_sorted(times.begin(), times.end()))
    throw InvalidArgument("trajectory time grid must be ascending");
  const double nu = model.frequency(mode);
  const double kappa = model.kick_strength(mode, state);
  const auto& ev = train.events();

  std::vector<PhaseSpacePoint> out;
  out.reserve(times.size());
  Complex rotating{};
  std::size_t next = 0;
  for (double t : times) {
    while (next < ev.size() && ev[next].time <= t) {
      rotating += -kI * (kappa * ev[next].weight) * std::polar(1.0, nu * ev[next].time);
      ++next;
    }
    const Complex alpha = frame == Frame::rotating ? rotating : rotating * std::polar(1.0, -nu * t);
    out.push_back({t, alpha.real(), alpha.imag()});
  }
  return out;
}

double enclosed_area(std::span<const PhaseSpacePoint> points) {
  double twice = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    twice += points[k].position * points[k + 1].momentum -
             points[k + 1].position * points[k].momentum;
  return 0.5 * twice;
}

std::vector<double> time_grid(const PulseTrain& train, std::size_t samples, double padding) {
  if (samples < 2) throw InvalidArgument("time grid needs at least two samples");
  const double start = (train.empty() ? 0.0 : train.events().front().time) - padding;
  const double stop = (train.empty() ? 0.0 : train.events().back().time) + padding;
  std::vector<double> grid(samples);
  for (std::size_t i = 0; i < samples; ++i)
    grid[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(samples - 1);
  grid.back() = stop;
  return grid;
}

DrivenDisplacement driven_displacement(const PulseTrain& train, const GateModel& model,
                                       BasisState state, std::span<const double> times) {
  const auto& crystal = model.crystal();
  const auto ions = static_cast<std::size_t>(crystal.size());
  const double k = crystal.config().wavenumber;

  DrivenDisplacement out;
  out.times.assign(times.begin(), times.end());
  out.displacement.assign(ions, std::vector<double>(times.size(), 0.0));
  out.peak.assign(ions, 0.0);
  out.final.assign(ions, 0.0);

  const double t_end = train.empty() ? 0.0 : train.events().back().time;
  for (int p = 0; p < model.mode_count(); ++p) {
    const auto path = trajectory(train, model, state, p, Frame::lab, times);
    const auto end = trajectory(train, model, state, p, Frame::lab, std::span(&t_end, 1));
    const double scale = 2.0 * model.lamb_dicke(p) / k;
    for (std::size_t i = 0; i < ions; ++i) {
      const double b = crystal.mode_vector(p, static_cast<int>(i));
      for (std::size_t s = 0; s < times.size(); ++s)
        out.displacement[i][s] += b * scale * path[s].position;
      out.final[i] += b * scale * end.front().position;
    }
  }
  for (std::size_t i = 0; i < ions; ++i)
    for (double x : out.displacement[i]) out.peak[i] = std::max(out.peak[i], std::abs(x));
  return out;
}

ComposedEvolution oracle_compose(const PulseTrain& train, const GateModel& model,
                                 BasisState state) {
  const auto modes = static_cast<std::size_t>(model.mode_count());
  ComposedEvolution out{std::vector<Complex>(modes), std::vector<double>(modes, 0.0)};
  const auto& ev = train.events();
  if (ev.empty()) return out;

  for (std::size_t p = 0; p < modes; ++p) {
    const int mode = static_cast<int>(p);
    const double nu = model.frequency(mode);
    const double kappa = model.kick_strength(mode, state);
    // U = exp(i phase) D(beta) R(t - t_0), with R the free rotation.
    Complex beta{};
    double phase = 0.0;
    double now = ev.front().time;
    for (const auto& e : ev) {
      beta *= std::polar(1.0, -nu * (e.time - now));
      now = e.time;
      const Complex kick = -kI * (kappa * e.weight);
      // D(a) D(b) = exp((a b* - a* b) / 2) D(a + b)
      phase += (kick * std::conj(beta)).imag();
      beta += kick;
    }
    out.displacement[p] = beta * std::polar(1.0, nu * now);
    out.phase[p] = phase;
  }
  return out;
}

}  // namespace fastgate
