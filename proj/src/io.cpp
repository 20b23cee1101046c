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

#include "fastgate/io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fastgate/errors.hpp"

namespace fastgate::io {

namespace {

Json pair_to_json(IonPair pair) { return Json::array({pair.first + 1, pair.second + 1}); }

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

Json rate_to_json(double repetition_rate) {
  if (!(repetition_rate < kInstantaneous)) return "inf";
  return repetition_rate;
}

double rate_from_json(const Json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return kInstantaneous;
    throw InvalidArgument("repetition rate must be a number or \"inf\"");
  }
  if (!value.is_number()) throw InvalidArgument("repetition rate must be a number or \"inf\"");
  return value.get<double>();
}

void write_positions_csv(std::ostream& out, const IonCrystal& crystal) {
  out << "ion_index,u,x_m\n";
  for (int i = 0; i < crystal.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out << i + 1 << ',' << format_number(crystal.scaled_positions()[k]) << ','
        << format_number(crystal.positions()[k]) << '\n';
  }
}

void write_modes_csv(std::ostream& out, const IonCrystal& crystal) {
  out << "mode,eigenvalue,frequency_rad_s,lamb_dicke";
  for (int i = 0; i < crystal.size(); ++i) out << ",b_" << i + 1;
  out << '\n';
  for (int p = 0; p < crystal.size(); ++p) {
    const auto k = static_cast<std::size_t>(p);
    out << p << ',' << format_number(crystal.mode_eigenvalues()[k]) << ','
        << format_number(crystal.mode_frequencies()[k]) << ','
        << format_number(crystal.lamb_dicke()[k]);
    for (int i = 0; i < crystal.size(); ++i) out << ',' << format_number(crystal.mode_vector(p, i));
    out << '\n';
  }
}

void write_radial_ratio_csv(std::ostream& out, std::span<const int> ion_counts) {
  out << "ion_count,min_radial_ratio\n";
  for (int L : ion_counts) out << L << ',' << format_number(min_radial_ratio(L)) << '\n';
}

Json crystal_to_json(const IonCrystal& crystal) {
  Json modes = Json::array();
  for (int p = 0; p < crystal.size(); ++p) {
    const auto k = static_cast<std::size_t>(p);
    Json vector = Json::array();
    for (int i = 0; i < crystal.size(); ++i) vector.push_back(crystal.mode_vector(p, i));
    modes.push_back({{"mode", p},
                     {"eigenvalue", crystal.mode_eigenvalues()[k]},
                     {"frequency_rad_s", crystal.mode_frequencies()[k]},
                     {"lamb_dicke", crystal.lamb_dicke()[k]},
                     {"vector", vector}});
  }
  const TrapConfig& trap = crystal.config();
  return {{"ion_count", crystal.size()},
          {"axial_frequency_rad_s", trap.axial_frequency},
          {"ion_mass_kg", trap.ion_mass},
          {"wavenumber_per_m", trap.wavenumber},
          {"coulomb_length_m", crystal.coulomb_length()},
          {"scaled_positions", crystal.scaled_positions()},
          {"positions_m", crystal.positions()},
          {"modes", modes},
          {"min_radial_ratio", min_radial_ratio(crystal.size())}};
}

Json scheme_to_json(const GateScheme& scheme) {
  Json counts = Json::array();
  Json times = Json::array();
  for (const auto& g : scheme.groups()) {
    counts.push_back(g.count);
    times.push_back(g.time);
  }
  return {{"family", to_string(scheme.family())},
          {"n", scheme.n()},
          {"cycles", scheme.cycles()},
          {"convention", to_string(scheme.convention())},
          {"target_pair", pair_to_json(scheme.target_pair())},
          {"counts", counts},
          {"times_s", times}};
}

GateScheme scheme_from_json(const Json& value) {
  try {
    const auto counts = value.at("counts").get<std::vector<int>>();
    const auto times = value.at("times_s").get<std::vector<double>>();
    if (counts.size() != times.size())
      throw InvalidArgument("scheme counts and times_s differ in length");
    std::vector<KickGroup> groups;
    for (std::size_t k = 0; k < counts.size(); ++k) groups.push_back({counts[k], times[k]});
    const auto family = parse_family(value.value("family", std::string("custom")));
    GateScheme scheme(std::move(groups), family, value.value("n", 0), value.value("cycles", 1));
    if (value.contains("convention"))
      scheme = scheme.with_convention(parse_convention(value.at("convention").get<std::string>()));
    if (value.contains("target_pair")) {
      const auto pair = value.at("target_pair").get<std::vector<int>>();
      if (pair.size() != 2) throw InvalidArgument("target_pair needs two ion indices");
      scheme = scheme.with_target({pair[0] - 1, pair[1] - 1});
    }
    return scheme;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed scheme JSON: ") + e.what());
  }
}

void write_train_csv(std::ostream& out, const PulseTrain& train) {
  out << "time_s,direction\n";
  for (const auto& e : train.events()) out << format_number(e.time) << ',' << e.weight << '\n';
}

void write_trajectory_csv(std::ostream& out, std::span<const PhaseSpacePoint> points) {
  out << "time_s,position,momentum\n";
  for (const auto& p : points)
    out << format_number(p.time) << ',' << format_number(p.position) << ','
        << format_number(p.momentum) << '\n';
}

void write_displacement_csv(std::ostream& out, const DrivenDisplacement& displacement) {
  out << "time_s";
  for (std::size_t i = 0; i < displacement.displacement.size(); ++i) out << ",x_" << i + 1 << "_m";
  out << '\n';
  for (std::size_t t = 0; t < displacement.times.size(); ++t) {
    out << format_number(displacement.times[t]);
    for (const auto& ion : displacement.displacement) out << ',' << format_number(ion[t]);
    out << '\n';
  }
}

Json result_to_json(const GateResult& result) {
  Json residual = Json::object();
  for (BasisState s : kBasisStates) {
    Json modes = Json::array();
    for (Complex c : result.residual_displacement[static_cast<std::size_t>(s)])
      modes.push_back(std::abs(c));
    residual[std::string(to_string(s))] = modes;
  }
  return {{"fidelity", result.fidelity},
          {"infidelity", result.infidelity},
          {"infidelity_at_floor", result.infidelity <= kInfidelityFloor},
          {"entangling_phase", result.entangling_phase},
          {"phi_gg", result.phi_gg},
          {"phi_prime", 2.0 * result.phi_gg - std::numbers::pi / 2.0},
          {"gate_time_s", result.gate_time},
          {"total_pulse_pairs", result.total_pulse_pairs},
          {"residual_displacement_abs", residual}};
}

Json problem_to_json(const DesignProblem& problem) {
  return {{"axial_frequency_rad_s", problem.trap.axial_frequency},
          {"ion_mass_kg", problem.trap.ion_mass},
          {"wavenumber_per_m", problem.trap.wavenumber},
          {"ion_count", problem.trap.ion_count},
          {"target_pair", pair_to_json(problem.pair)},
          {"family", to_string(problem.family)},
          {"convention", to_string(problem.convention)},
          {"repetition_rate_hz", rate_to_json(problem.repetition_rate)},
          {"mean_occupation", problem.mean_occupation},
          {"objective", to_string(problem.objective)},
          {"cycles", problem.cycles},
          {"gate_time_s", problem.gate_time}};
}

Json anneal_to_json(const AnnealConfig& c) {
  return {{"initial_temperature", c.initial_temperature},
          {"cooling_factor", c.cooling_factor},
          {"steps_per_temperature", c.steps_per_temperature},
          {"temperature_levels", c.temperature_levels},
          {"restarts", c.restarts},
          {"seed", c.seed},
          {"timing_scale_s", c.timing_scale},
          {"n_min", c.n_min},
          {"n_max", c.n_max},
          {"n_move_probability", c.n_move_probability},
          {"infidelity_threshold", c.infidelity_threshold},
          {"projection_levels", c.projection_levels},
          {"projection_steps", c.projection_steps},
          {"polish", c.polish}};
}

Json design_manifest(const DesignProblem& problem, const AnnealConfig& config,
                     const Design& design, double wall_time_s) {
  return {{"problem", problem_to_json(problem)},
          {"config", anneal_to_json(config)},
          {"seed", config.seed},
          {"scheme", scheme_to_json(design.scheme)},
          {"symmetry", to_string(classify_symmetry(design.scheme))},
          {"result", result_to_json(design.result)},
          {"restart", design.restart},
          {"meets_threshold", design.meets_threshold},
          {"evaluations", design.evaluations},
          {"wall_time_s", wall_time_s}};
}

void write_rate_sweep_csv(std::ostream& out, const RateSweep& sweep) {
  out << "repetition_rate_hz,n,total_pulse_pairs,gate_time_s,infidelity,fidelity\n";
  for (const auto& row : sweep.rows) {
    const auto& r = row.design.result;
    out << format_number(row.repetition_rate) << ',' << row.design.scheme.n() << ','
        << r.total_pulse_pairs << ',' << format_number(r.gate_time) << ','
        << format_number(r.infidelity) << ',' << format_number(r.fidelity) << '\n';
  }
}

void write_pulse_sweep_csv(std::ostream& out, const PulseSweep& sweep) {
  out << "n,total_pulse_pairs,gate_time_s,infidelity\n";
  for (const auto& row : sweep.rows) {
    const auto& r = row.design.result;
    out << row.n << ',' << r.total_pulse_pairs << ',' << format_number(r.gate_time) << ','
        << format_number(r.infidelity) << '\n';
  }
}

void write_ion_sweep_csv(std::ostream& out, std::span<const IonRow> rows) {
  out << "ion_count,pair_first,pair_second,axial_frequency_rad_s,separation_m,n,gate_time_s,"
         "infidelity,fidelity,max_residual\n";
  for (const auto& row : rows) {
    out << row.ion_count << ',' << row.pair.first + 1 << ',' << row.pair.second + 1 << ','
        << format_number(row.axial_frequency) << ',' << format_number(row.separation) << ','
        << row.scheme.n() << ',' << format_number(row.result.gate_time) << ','
        << format_number(row.result.infidelity) << ',' << format_number(row.result.fidelity)
        << ',' << format_number(row.max_residual) << '\n';
  }
}

void write_gate_time_sweep_csv(std::ostream& out, const GateTimeSweep& sweep) {
  out << "gate_time_s,feasible,n,fidelity,infidelity,peak\n";
  for (std::size_t k = 0; k < sweep.rows.size(); ++k) {
    const auto& row = sweep.rows[k];
    out << format_number(row.gate_time) << ',';
    if (row.design) {
      out << "1," << row.design->scheme.n() << ',' << format_number(row.design->result.fidelity)
          << ',' << format_number(row.design->result.infidelity);
    } else {
      out << "0,0,nan,nan";
    }
    out << ',' << (static_cast<int>(k) == sweep.peak ? 1 : 0) << '\n';
  }
}

}  // namespace fastgate::io
