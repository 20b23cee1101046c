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

#include "fastgate/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

constexpr double kOverlapSlack = 1e-9;

void check_taus(int n, double tau1, double tau2, double tau3) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (!(tau1 > tau2 && tau2 > tau3 && tau3 > 0.0))
    throw InvalidArgument("timings must satisfy tau1 > tau2 > tau3 > 0");
}

GateScheme six_group(SchemeFamily family, int n, const int (&counts)[3], double tau1,
                     double tau2, double tau3) {
  check_taus(n, tau1, tau2, tau3);
  std::vector<KickGroup> groups{
      {counts[0] * n, -tau1}, {counts[1] * n, -tau2}, {counts[2] * n, -tau3},
      {-counts[2] * n, tau3}, {-counts[1] * n, tau2}, {-counts[0] * n, tau1},
  };
  return GateScheme(std::move(groups), family, n);
}

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * scale;
}

bool reflected_antisymmetric(std::span<const KickGroup> g, double scale) {
  const std::size_t count = g.size();
  if (count < 2 || count % 2 != 0) return false;
  const double centre = 0.5 * (g.front().time + g.back().time);
  for (std::size_t k = 0; k < count / 2; ++k) {
    const auto& a = g[k];
    const auto& b = g[count - 1 - k];
    if (a.count != -b.count) return false;
    if (!close(a.time + b.time, 2.0 * centre, scale)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(SchemeFamily family) {
  switch (family) {
    case SchemeFamily::gzc: return "gzc";
    case SchemeFamily::frag: return "frag";
    case SchemeFamily::duan: return "duan";
    case SchemeFamily::custom: return "custom";
  }
  return "custom";
}

std::string_view to_string(KickConvention convention) {
  return convention == KickConvention::symmetric ? "symmetric" : "asymmetric";
}

std::string_view to_string(SymmetryClass symmetry) {
  switch (symmetry) {
    case SymmetryClass::none: return "none";
    case SymmetryClass::reflected_antisymmetric: return "reflected-antisymmetric";
    case SymmetryClass::doubled_four_block: return "doubled-4-block";
  }
  return "none";
}

SchemeFamily parse_family(std::string_view text) {
  if (text == "gzc" || text == "GZC") return SchemeFamily::gzc;
  if (text == "frag" || text == "FRAG") return SchemeFamily::frag;
  if (text == "duan" || text == "Duan") return SchemeFamily::duan;
  if (text == "custom") return SchemeFamily::custom;
  throw InvalidArgument("unknown scheme family '" + std::string(text) + "'");
}

KickConvention parse_convention(std::string_view text) {
  if (text == "symmetric") return KickConvention::symmetric;
  if (text == "asymmetric") return KickConvention::asymmetric;
  throw InvalidArgument("unknown kick convention '" + std::string(text) + "'");
}

GateScheme::GateScheme(std::vector<KickGroup> groups, SchemeFamily family, int n, int cycles)
    : groups_(std::move(groups)), family_(family), n_(n), cycles_(cycles) {
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    if (groups_[k].count == 0)
      throw InvalidArgument("kick group " + std::to_string(k + 1) + " has zero count");
    if (!std::isfinite(groups_[k].time))
      throw InvalidArgument("kick group " + std::to_string(k + 1) + " has non-finite time");
    if (k > 0 && !(groups_[k].time > groups_[k - 1].time))
      throw InvalidArgument("kick group times must be strictly increasing");
  }
  if (cycles_ < 1) throw InvalidArgument("cycles must be at least 1");
}

GateScheme GateScheme::with_target(IonPair pair) const {
  if (pair.first < 0 || pair.first >= pair.second)
    throw InvalidArgument("target pair must satisfy 1 <= i < j");
  GateScheme copy = *this;
  copy.pair_ = pair;
  return copy;
}

GateScheme GateScheme::with_convention(KickConvention convention) const {
  GateScheme copy = *this;
  copy.convention_ = convention;
  return copy;
}

GateScheme GateScheme::shifted(double offset) const {
  GateScheme copy = *this;
  for (auto& g : copy.groups_) g.time += offset;
  return copy;
}

int GateScheme::total_pulse_pairs() const {
  return std::accumulate(groups_.begin(), groups_.end(), 0,
                         [](int acc, const KickGroup& g) { return acc + std::abs(g.count); });
}

GateScheme build_gzc(int n, double tau1, double tau2, double tau3) {
  return six_group(SchemeFamily::gzc, n, {-2, 3, -2}, tau1, tau2, tau3);
}

GateScheme build_frag(int n, double tau1, double tau2, double tau3) {
  return six_group(SchemeFamily::frag, n, {-1, 2, -2}, tau1, tau2, tau3);
}

GateScheme build_duan(int n, double tau1, int cycles, double cycle_gap) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (!(tau1 > 0.0)) throw InvalidArgument("tau1 must be positive");
  if (cycles < 1) throw InvalidArgument("cycles must be at least 1");
  if (cycle_gap < 0.0) cycle_gap = 2.0 * tau1 / 3.0;
  if (!(cycle_gap > 0.0)) throw InvalidArgument("cycle gap must be positive");

  std::vector<KickGroup> groups;
  groups.reserve(static_cast<std::size_t>(3 * cycles));
  const double period = 2.0 * tau1 + cycle_gap;
  for (int c = 0; c < cycles; ++c) {
    // Each doubling repeats everything so far with every direction flipped.
    const int sign = std::popcount(static_cast<unsigned>(c)) % 2 == 0 ? 1 : -1;
    const double start = c * period;
    groups.push_back({sign * n, start});
    groups.push_back({-2 * sign * n, start + tau1});
    groups.push_back({sign * n, start + 2.0 * tau1});
  }
  return GateScheme(std::move(groups), SchemeFamily::duan, n, cycles);
}

GateScheme build_duan_contiguous(int n, double repetition_rate, int cycles) {
  if (!(repetition_rate > 0.0) || !std::isfinite(repetition_rate))
    throw InvalidArgument("contiguous Duan trains need a finite repetition rate");
  return build_duan(n, 1.5 * n / repetition_rate, cycles);
}

PulseTrain::PulseTrain(std::vector<PulseEvent> events, double repetition_rate)
    : events_(std::move(events)), repetition_rate_(repetition_rate) {
  if (!(repetition_rate_ > 0.0)) throw InvalidArgument("repetition rate must be positive");
}

double PulseTrain::gate_time() const {
  if (events_.empty()) return 0.0;
  return events_.back().time - events_.front().time;
}

int PulseTrain::total_pulse_pairs() const {
  return std::accumulate(events_.begin(), events_.end(), 0,
                         [](int acc, const PulseEvent& e) { return acc + std::abs(e.weight); });
}

PulseTrain PulseTrain::shifted(double offset) const {
  PulseTrain copy = *this;
  for (auto& e : copy.events_) e.time += offset;
  return copy;
}

double required_group_spacing(int count_a, int count_b, double repetition_rate) {
  if (!(repetition_rate < kInstantaneous)) return 0.0;
  return 0.5 * (std::abs(count_a) + std::abs(count_b)) / repetition_rate;
}

PulseTrain expand(const GateScheme& scheme, double repetition_rate) {
  if (!(repetition_rate > 0.0)) throw InvalidArgument("repetition rate must be positive");
  const auto& groups = scheme.groups();
  std::vector<PulseEvent> events;
  if (!(repetition_rate < kInstantaneous)) {
    events.reserve(groups.size());
    for (const auto& g : groups) events.push_back({g.time, g.count});
    return PulseTrain(std::move(events), repetition_rate);
  }

  const double period = 1.0 / repetition_rate;
  for (std::size_t k = 0; k + 1 < groups.size(); ++k) {
    const double gap = groups[k + 1].time - groups[k].time;
    const double need = required_group_spacing(groups[k].count, groups[k + 1].count,
                                               repetition_rate);
    if (gap < need * (1.0 - kOverlapSlack)) throw OverlapError(k, k + 1, gap - need);
  }
  events.reserve(static_cast<std::size_t>(scheme.total_pulse_pairs()));
  for (const auto& g : groups) {
    const int size = std::abs(g.count);
    const int sign = g.count > 0 ? 1 : -1;
    const double half = 0.5 * (size - 1);
    for (int j = 0; j < size; ++j) events.push_back({g.time + (j - half) * period, sign});
  }
  return PulseTrain(std::move(events), repetition_rate);
}

SymmetryClass classify_symmetry(const GateScheme& scheme) {
  const auto& g = scheme.groups();
  if (g.empty()) return SymmetryClass::none;
  const double scale = std::max({std::abs(g.front().time), std::abs(g.back().time),
                                 g.back().time - g.front().time, 1e-300});
  const std::size_t count = g.size();

  if (count >= 4 && count % 4 == 0) {
    const std::size_t half = count / 2;
    std::span<const KickGroup> first(g.data(), half);
    std::span<const KickGroup> second(g.data() + half, half);
    if (reflected_antisymmetric(first, scale) && reflected_antisymmetric(second, scale)) {
      const double c1 = 0.5 * (first.front().time + first.back().time);
      const double c2 = 0.5 * (second.front().time + second.back().time);
      bool negated_copy = true;
      for (std::size_t k = 0; k < half && negated_copy; ++k) {
        negated_copy = second[k].count == -first[k].count &&
                       close(second[k].time - first[k].time, c2 - c1, scale);
      }
      const double f = 0.5 * (c2 - c1);
      const double tau1 = c1 - first.front().time;
      if (negated_copy && f > tau1) return SymmetryClass::doubled_four_block;
    }
  }
  if (reflected_antisymmetric(g, scale)) return SymmetryClass::reflected_antisymmetric;
  return SymmetryClass::none;
}

}  // namespace fastgate
