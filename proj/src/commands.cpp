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

#include "fastgate/commands.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fastgate/errors.hpp"
#include "fastgate/io.hpp"

namespace fastgate::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InvalidArgument("cannot write '" + path.string() + "'");
  return file;
}

void write_json(const fs::path& path, const io::Json& value) {
  auto file = open_output(path);
  file << value.dump(2) << '\n';
}

BasisState parse_state(const std::string& text) {
  for (BasisState s : kBasisStates)
    if (to_string(s) == text) return s;
  throw InvalidArgument("unknown basis state '" + text + "' (gg, ge, eg, ee)");
}

Frame parse_frame(const std::string& text) {
  if (text == "rotating") return Frame::rotating;
  if (text == "lab") return Frame::lab;
  throw InvalidArgument("unknown frame '" + text + "' (rotating, lab)");
}

struct Designed {
  DesignProblem problem;
  Design design;
  double wall_time;
};

Designed run_design(const RunConfig& config) {
  const DesignProblem problem = config.problem();
  const auto start = std::chrono::steady_clock::now();
  Design design = optimize(problem, config.anneal());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {problem, std::move(design), wall};
}

GateScheme scheme_for(const RunConfig& config, const TrajectoryRequest& request) {
  if (!request.scheme_path) return run_design(config).design.scheme;
  std::ifstream in(*request.scheme_path);
  if (!in) throw InvalidArgument("cannot open scheme file '" + *request.scheme_path + "'");
  io::Json value;
  try {
    value = io::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed scheme JSON: ") + e.what());
  }
  return io::scheme_from_json(value.contains("scheme") ? value.at("scheme") : value);
}

std::vector<int> radial_counts(int ions) {
  std::vector<int> counts;
  for (int L = 1; L <= std::max(ions, 20); ++L) counts.push_back(L);
  return counts;
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw InvalidArgument("output.format: must be csv or json");
}

double average_power(double repetition_rate_hz, double pulse_energy_j) {
  if (!(repetition_rate_hz > 0.0) || !std::isfinite(repetition_rate_hz))
    throw InvalidArgument("repetition rate must be positive and finite");
  if (!(pulse_energy_j > 0.0) || !std::isfinite(pulse_energy_j))
    throw InvalidArgument("pulse energy must be positive");
  return repetition_rate_hz * pulse_energy_j;
}

void cmd_crystal(const RunConfig& config, const fs::path& out, Format format) {
  const IonCrystal crystal(config.trap());
  const auto counts = radial_counts(config.ions);
  if (format == Format::json) {
    io::Json value = io::crystal_to_json(crystal);
    io::Json curve = io::Json::array();
    for (int L : counts) curve.push_back({{"ion_count", L}, {"min_radial_ratio", min_radial_ratio(L)}});
    value["radial_ratio_curve"] = curve;
    write_json(out / "crystal.json", value);
    return;
  }
  {
    auto file = open_output(out / "positions.csv");
    io::write_positions_csv(file, crystal);
  }
  {
    auto file = open_output(out / "modes.csv");
    io::write_modes_csv(file, crystal);
  }
  auto file = open_output(out / "radial_ratio.csv");
  io::write_radial_ratio_csv(file, counts);
}

void cmd_design(const RunConfig& config, const fs::path& out, Format format) {
  const Designed run = run_design(config);
  const auto& design = run.design;
  write_json(out / "manifest.json",
             io::design_manifest(run.problem, config.anneal(), design, run.wall_time));
  write_json(out / "scheme.json", io::scheme_to_json(design.scheme));

  const PulseTrain train = expand(design.scheme, run.problem.repetition_rate);
  const IonCrystal crystal(run.problem.trap);
  const GateModel model(crystal, design.scheme.target_pair(), design.scheme.convention());
  const auto grid = time_grid(train, 2000, 0.05 * std::max(train.gate_time(), 1e-12));

  if (format == Format::json) {
    io::Json all = io::Json::object();
    for (BasisState s : kBasisStates) {
      io::Json modes = io::Json::array();
      for (int p = 0; p < model.mode_count(); ++p) {
        io::Json points = io::Json::array();
        for (const auto& pt : trajectory(train, model, s, p, Frame::rotating, grid))
          points.push_back({pt.time, pt.position, pt.momentum});
        modes.push_back(points);
      }
      all[std::string(to_string(s))] = modes;
    }
    write_json(out / "trajectories.json", all);
    return;
  }
  {
    auto file = open_output(out / "train.csv");
    io::write_train_csv(file, train);
  }
  for (BasisState s : kBasisStates) {
    for (int p = 0; p < model.mode_count(); ++p) {
      auto file = open_output(out / ("trajectory_" + std::string(to_string(s)) + "_mode" +
                                     std::to_string(p) + ".csv"));
      io::write_trajectory_csv(file, trajectory(train, model, s, p, Frame::rotating, grid));
    }
  }
}

void cmd_sweep(const RunConfig& config, const fs::path& out, Format format) {
  const DesignProblem problem = config.problem();
  const AnnealConfig anneal = config.anneal();
  io::Json summary = {{"axis", config.sweep_axis}};
  std::ostringstream table;

  if (config.sweep_axis == "repetition-rate") {
    if (config.repetition_rates_ghz.empty())
      throw InvalidArgument("sweep.repetition_rates_ghz: empty repetition-rate list");
    std::vector<double> rates;
    for (double r : config.repetition_rates_ghz)
      rates.push_back(r < kInstantaneous ? r * 1e9 : kInstantaneous);
    const RateSweep sweep = sweep_repetition_rate(problem, anneal, rates);
    io::write_rate_sweep_csv(table, sweep);
    summary["time_vs_rate_exponent"] = sweep.time_vs_rate.exponent;
    summary["time_vs_pulses_exponent"] = sweep.time_vs_pulses.exponent;
  } else if (config.sweep_axis == "pulse-number") {
    if (config.blocks.empty()) throw InvalidArgument("sweep.blocks: empty block-size list");
    const PulseSweep sweep = sweep_pulse_number(problem, anneal, config.blocks);
    io::write_pulse_sweep_csv(table, sweep);
    summary["time_vs_pulses_exponent"] = sweep.time_vs_pulses.exponent;
  } else if (config.sweep_axis == "ion-number") {
    if (config.ion_counts.empty()) throw InvalidArgument("sweep.ion_counts: empty ion-number list");
    const auto rows = sweep_ion_number(problem, anneal, config.ion_counts,
                                       parse_spacing_mode(config.spacing),
                                       parse_pair_position(config.pair_position));
    io::write_ion_sweep_csv(table, rows);
  } else if (config.sweep_axis == "gate-time") {
    if (config.gate_times_ns.empty())
      throw InvalidArgument("sweep.gate_times_ns: empty gate-time list");
    std::vector<double> times;
    for (double t : config.gate_times_ns) times.push_back(t * 1e-9);
    const GateTimeSweep sweep = sweep_gate_time_distant(problem, anneal, times);
    io::write_gate_time_sweep_csv(table, sweep);
    if (sweep.peak >= 0)
      summary["peak_gate_time_s"] = sweep.rows[static_cast<std::size_t>(sweep.peak)].gate_time;
  } else {
    throw InvalidArgument("sweep.axis: unknown sweep axis '" + config.sweep_axis + "'");
  }

  auto file = open_output(out / "sweep.csv");
  file << table.str();
  if (format == Format::json || summary.size() > 1) write_json(out / "sweep_fit.json", summary);
}

void cmd_trajectory(const RunConfig& config, const TrajectoryRequest& request,
                    const fs::path& out, Format format) {
  const GateScheme scheme = scheme_for(config, request);
  const DesignProblem problem = config.problem();
  TrapConfig trap = problem.trap;
  const IonCrystal crystal(trap);
  const GateModel model(crystal, scheme.target_pair(), scheme.convention());
  if (request.mode < 0 || request.mode >= model.mode_count())
    throw InvalidArgument("mode index outside the crystal");
  if (request.samples < 2) throw InvalidArgument("need at least two samples");
  const PulseTrain train = expand(scheme, problem.repetition_rate);
  const auto grid = time_grid(train, static_cast<std::size_t>(request.samples),
                              0.05 * std::max(train.gate_time(), 1e-12));
  const auto points = trajectory(train, model, parse_state(request.state), request.mode,
                                 parse_frame(request.frame), grid);
  if (format == Format::json) {
    io::Json value = io::Json::array();
    for (const auto& p : points) value.push_back({p.time, p.position, p.momentum});
    write_json(out / "trajectory.json",
               {{"state", request.state}, {"mode", request.mode}, {"frame", request.frame},
                {"enclosed_area", enclosed_area(points)}, {"points", value}});
    return;
  }
  auto file = open_output(out / "trajectory.csv");
  io::write_trajectory_csv(file, points);
}

void cmd_displacement(const RunConfig& config, const TrajectoryRequest& request,
                      const fs::path& out, Format format) {
  const GateScheme scheme = scheme_for(config, request);
  const DesignProblem problem = config.problem();
  const IonCrystal crystal(problem.trap);
  const GateModel model(crystal, scheme.target_pair(), scheme.convention());
  if (request.samples < 2) throw InvalidArgument("need at least two samples");
  const PulseTrain train = expand(scheme, problem.repetition_rate);
  const auto grid = time_grid(train, static_cast<std::size_t>(request.samples),
                              0.05 * std::max(train.gate_time(), 1e-12));
  const auto d = driven_displacement(train, model, parse_state(request.state), grid);
  if (format == Format::json) {
    write_json(out / "displacement.json", {{"state", request.state},
                                           {"times_s", d.times},
                                           {"displacement_m", d.displacement},
                                           {"peak_m", d.peak},
                                           {"final_m", d.final}});
    return;
  }
  auto file = open_output(out / "displacement.csv");
  io::write_displacement_csv(file, d);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulsed fast-gate design for trapped-ion crystals"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<unsigned long long> seed;
  std::string out_dir;
  std::string format_text;
  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--seed", seed, "Random seed (overrides optimizer.seed)");
  app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
  app.add_option("--format", format_text, "csv or json (overrides output.format)");

  auto* crystal = app.add_subcommand("crystal", "Equilibrium positions and normal modes");
  auto* design = app.add_subcommand("design", "Optimise one gate");
  auto* sweep = app.add_subcommand("sweep", "Repetition-rate, ion-number, gate-time or pulse-number sweep");
  std::string axis;
  sweep->add_option("--axis", axis, "Overrides sweep.axis");

  auto* power = app.add_subcommand("power", "Average laser power per beam");
  double rate_ghz = 0.0;
  double energy_nj = 0.0;
  power->add_option("--rate-ghz", rate_ghz, "Repetition rate, GHz")->required();
  power->add_option("--energy-nj", energy_nj, "Pi-pulse energy, nJ")->required();

  TrajectoryRequest request;
  auto add_request = [&request](CLI::App* sub) {
    sub->add_option("--scheme", request.scheme_path, "Scheme JSON (designs from the config if absent)");
    sub->add_option("--state", request.state, "gg, ge, eg or ee");
    sub->add_option("--samples", request.samples, "Time samples");
  };
  auto* traj = app.add_subcommand("trajectory", "Phase-space trajectory of one mode");
  add_request(traj);
  traj->add_option("--mode", request.mode, "Mode index, 0 = centre of mass");
  traj->add_option("--frame", request.frame, "rotating or lab");
  auto* disp = app.add_subcommand("displacement", "Driven real-space displacement of every ion");
  add_request(disp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.output_directory = out_dir;
    if (!format_text.empty()) config.output_format = format_text;
    if (!axis.empty()) config.sweep_axis = axis;
    config.validate();
    const Format format = parse_format(config.output_format);
    const fs::path dir(config.output_directory);

    if (*power) {
      const double watts = average_power(rate_ghz * 1e9, energy_nj * 1e-9);
      out << io::format_number(watts) << '\n';
    } else if (*crystal) {
      cmd_crystal(config, dir, format);
    } else if (*design) {
      cmd_design(config, dir, format);
    } else if (*sweep) {
      cmd_sweep(config, dir, format);
    } else if (*traj) {
      cmd_trajectory(config, request, dir, format);
    } else if (*disp) {
      cmd_displacement(config, request, dir, format);
    }
    return kSuccess;
  } catch (const OverlapError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InvalidArgument& e) {
    err << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace fastgate::cli
