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

#include "fastgate/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "fastgate/constants.hpp"
#include "fastgate/errors.hpp"
#include "fastgate/io.hpp"

namespace fastgate {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw InvalidArgument(field + ": " + what);
}

double to_double(const std::string& field, const std::string& text) {
  if (text == "inf") return kInstantaneous;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) field_error(field, "expected a number, got '" + text + "'");
  return value;
}

template <typename T = long long>
T to_integer(const std::string& field, const std::string& text) {
  T value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) field_error(field, "expected an integer, got '" + text + "'");
  return value;
}

int to_int(const std::string& field, const std::string& text) {
  const long long v = to_integer(field, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    field_error(field, "integer out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& field, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  field_error(field, "expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& field, const std::string& text, F convert) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(convert(field, item));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += io::format_number(values[k]);
    } else {
      out += std::to_string(values[k]);
    }
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& field, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"trap.axial_frequency_mhz",
       [](RunConfig& c, auto& f, auto& v) { c.axial_frequency_mhz = to_double(f, v); }},
      {"trap.mass_amu", [](RunConfig& c, auto& f, auto& v) { c.mass_amu = to_double(f, v); }},
      {"trap.wavelength_nm",
       [](RunConfig& c, auto& f, auto& v) { c.wavelength_nm = to_double(f, v); }},
      {"trap.ions", [](RunConfig& c, auto& f, auto& v) { c.ions = to_int(f, v); }},
      {"scheme.family", [](RunConfig& c, auto&, auto& v) { c.family = v; }},
      {"scheme.convention", [](RunConfig& c, auto&, auto& v) { c.convention = v; }},
      {"scheme.target_pair",
       [](RunConfig& c, auto& f, auto& v) {
         const auto items = to_list<int>(f, v, to_int);
         if (items.size() != 2) field_error(f, "expected two ion indices 'i, j'");
         c.pair_first = items[0];
         c.pair_second = items[1];
       }},
      {"scheme.cycles", [](RunConfig& c, auto& f, auto& v) { c.cycles = to_int(f, v); }},
      {"scheme.objective", [](RunConfig& c, auto&, auto& v) { c.objective = v; }},
      {"scheme.gate_time_ns",
       [](RunConfig& c, auto& f, auto& v) { c.gate_time_ns = to_double(f, v); }},
      {"laser.repetition_rate_ghz",
       [](RunConfig& c, auto& f, auto& v) { c.repetition_rate_ghz = to_double(f, v); }},
      {"motional.mean_occupation",
       [](RunConfig& c, auto& f, auto& v) { c.mean_occupation = to_list<double>(f, v, to_double); }},
      {"optimizer.initial_temperature",
       [](RunConfig& c, auto& f, auto& v) { c.initial_temperature = to_double(f, v); }},
      {"optimizer.cooling_factor",
       [](RunConfig& c, auto& f, auto& v) { c.cooling_factor = to_double(f, v); }},
      {"optimizer.steps_per_temperature",
       [](RunConfig& c, auto& f, auto& v) { c.steps_per_temperature = to_int(f, v); }},
      {"optimizer.temperature_levels",
       [](RunConfig& c, auto& f, auto& v) { c.temperature_levels = to_int(f, v); }},
      {"optimizer.restarts", [](RunConfig& c, auto& f, auto& v) { c.restarts = to_int(f, v); }},
      {"optimizer.seed",
       [](RunConfig& c, auto& f, auto& v) {
         if (!v.empty() && v.front() == '-') field_error(f, "seed must be non-negative");
         c.seed = to_integer<unsigned long long>(f, v);
       }},
      {"optimizer.timing_scale_ns",
       [](RunConfig& c, auto& f, auto& v) { c.timing_scale_ns = to_double(f, v); }},
      {"optimizer.n_min", [](RunConfig& c, auto& f, auto& v) { c.n_min = to_int(f, v); }},
      {"optimizer.n_max", [](RunConfig& c, auto& f, auto& v) { c.n_max = to_int(f, v); }},
      {"optimizer.n_move_probability",
       [](RunConfig& c, auto& f, auto& v) { c.n_move_probability = to_double(f, v); }},
      {"optimizer.infidelity_threshold",
       [](RunConfig& c, auto& f, auto& v) { c.infidelity_threshold = to_double(f, v); }},
      {"optimizer.projection_levels",
       [](RunConfig& c, auto& f, auto& v) { c.projection_levels = to_int(f, v); }},
      {"optimizer.projection_steps",
       [](RunConfig& c, auto& f, auto& v) { c.projection_steps = to_int(f, v); }},
      {"optimizer.polish", [](RunConfig& c, auto& f, auto& v) { c.polish = to_bool(f, v); }},
      {"sweep.axis", [](RunConfig& c, auto&, auto& v) { c.sweep_axis = v; }},
      {"sweep.repetition_rates_ghz",
       [](RunConfig& c, auto& f, auto& v) {
         c.repetition_rates_ghz = to_list<double>(f, v, to_double);
       }},
      {"sweep.ion_counts",
       [](RunConfig& c, auto& f, auto& v) { c.ion_counts = to_list<int>(f, v, to_int); }},
      {"sweep.spacing", [](RunConfig& c, auto&, auto& v) { c.spacing = v; }},
      {"sweep.pair_position", [](RunConfig& c, auto&, auto& v) { c.pair_position = v; }},
      {"sweep.gate_times_ns",
       [](RunConfig& c, auto& f, auto& v) { c.gate_times_ns = to_list<double>(f, v, to_double); }},
      {"sweep.blocks",
       [](RunConfig& c, auto& f, auto& v) { c.blocks = to_list<int>(f, v, to_int); }},
      {"output.directory", [](RunConfig& c, auto&, auto& v) { c.output_directory = v; }},
      {"output.format", [](RunConfig& c, auto&, auto& v) { c.output_format = v; }},
  };
  return table;
}

template <typename F>
void check(const std::string& field, F&& body) {
  try {
    body();
  } catch (const InvalidArgument& e) {
    field_error(field, e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(axial_frequency_mhz > 0.0) || !std::isfinite(axial_frequency_mhz))
    field_error("trap.axial_frequency_mhz", "must be positive");
  if (!(mass_amu > 0.0) || !std::isfinite(mass_amu)) field_error("trap.mass_amu", "must be positive");
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm))
    field_error("trap.wavelength_nm", "must be positive");
  if (ions < 1) field_error("trap.ions", "must be at least 1");
  check("scheme.family", [&] { parse_family(family); });
  check("scheme.convention", [&] { parse_convention(convention); });
  check("scheme.objective", [&] { parse_objective(objective); });
  if (pair_first < 1 || pair_second <= pair_first)
    field_error("scheme.target_pair", "must satisfy 1 <= i < j");
  if (cycles < 1) field_error("scheme.cycles", "must be at least 1");
  if (!(gate_time_ns >= 0.0) || !std::isfinite(gate_time_ns))
    field_error("scheme.gate_time_ns", "must be non-negative");
  if (!(repetition_rate_ghz > 0.0)) field_error("laser.repetition_rate_ghz", "must be positive or inf");
  if (mean_occupation.empty()) field_error("motional.mean_occupation", "needs at least one value");
  for (double n : mean_occupation)
    if (!(n >= 0.0) || !std::isfinite(n)) field_error("motional.mean_occupation", "must be >= 0");
  check("optimizer", [&] { anneal().validate(); });
  check("sweep.spacing", [&] { parse_spacing_mode(spacing); });
  check("sweep.pair_position", [&] { parse_pair_position(pair_position); });
  if (sweep_axis != "repetition-rate" && sweep_axis != "ion-number" && sweep_axis != "gate-time" &&
      sweep_axis != "pulse-number")
    field_error("sweep.axis", "unknown sweep axis '" + sweep_axis + "'");
  if (output_format != "csv" && output_format != "json")
    field_error("output.format", "must be csv or json");
  if (output_directory.empty()) field_error("output.directory", "must not be empty");
}

TrapConfig RunConfig::trap() const {
  TrapConfig t;
  t.axial_frequency = constants::kTwoPi * axial_frequency_mhz * 1e6;
  t.ion_mass = mass_amu * constants::kAtomicMassUnit;
  t.wavenumber = constants::kTwoPi / (wavelength_nm / 1e9);
  t.ion_count = ions;
  return t;
}

DesignProblem RunConfig::problem() const {
  DesignProblem p;
  p.trap = trap();
  p.pair = {pair_first - 1, pair_second - 1};
  p.family = parse_family(family);
  p.convention = parse_convention(convention);
  p.repetition_rate =
      repetition_rate_ghz < kInstantaneous ? repetition_rate_ghz * 1e9 : kInstantaneous;
  p.mean_occupation = mean_occupation;
  p.objective = parse_objective(objective);
  p.cycles = cycles;
  p.gate_time = gate_time_ns * 1e-9;
  return p;
}

AnnealConfig RunConfig::anneal() const {
  AnnealConfig a;
  a.initial_temperature = initial_temperature;
  a.cooling_factor = cooling_factor;
  a.steps_per_temperature = steps_per_temperature;
  a.temperature_levels = temperature_levels;
  a.restarts = restarts;
  a.seed = seed;
  a.timing_scale = timing_scale_ns * 1e-9;
  a.n_min = n_min;
  a.n_max = n_max;
  a.n_move_probability = n_move_probability;
  a.infidelity_threshold = infidelity_threshold;
  a.projection_levels = projection_levels;
  a.projection_steps = projection_steps;
  a.polish = polish;
  return a;
}

RunConfig parse_config(std::istream& in) {
  RunConfig config;
  std::string section;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidArgument("line " + std::to_string(number) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(number) + ": expected key = value");
    if (section.empty())
      throw InvalidArgument("line " + std::to_string(number) + ": key outside a [section]");
    const std::string field = section + "." + trim(line.substr(0, eq));
    const auto it = setters().find(field);
    if (it == setters().end()) field_error(field, "unknown field");
    it->second(config, field, trim(line.substr(eq + 1)));
  }
  config.validate();
  return config;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
  using io::format_number;
  std::ostringstream out;
  out << "[trap]\n"
      << "axial_frequency_mhz = " << format_number(c.axial_frequency_mhz) << '\n'
      << "mass_amu = " << format_number(c.mass_amu) << '\n'
      << "wavelength_nm = " << format_number(c.wavelength_nm) << '\n'
      << "ions = " << c.ions << "\n\n"
      << "[scheme]\n"
      << "family = " << c.family << '\n'
      << "convention = " << c.convention << '\n'
      << "target_pair = " << c.pair_first << ", " << c.pair_second << '\n'
      << "cycles = " << c.cycles << '\n'
      << "objective = " << c.objective << '\n'
      << "gate_time_ns = " << format_number(c.gate_time_ns) << "\n\n"
      << "[laser]\n"
      << "repetition_rate_ghz = " << format_number(c.repetition_rate_ghz) << "\n\n"
      << "[motional]\n"
      << "mean_occupation = " << join(c.mean_occupation) << "\n\n"
      << "[optimizer]\n"
      << "initial_temperature = " << format_number(c.initial_temperature) << '\n'
      << "cooling_factor = " << format_number(c.cooling_factor) << '\n'
      << "steps_per_temperature = " << c.steps_per_temperature << '\n'
      << "temperature_levels = " << c.temperature_levels << '\n'
      << "restarts = " << c.restarts << '\n'
      << "seed = " << c.seed << '\n'
      << "timing_scale_ns = " << format_number(c.timing_scale_ns) << '\n'
      << "n_min = " << c.n_min << '\n'
      << "n_max = " << c.n_max << '\n'
      << "n_move_probability = " << format_number(c.n_move_probability) << '\n'
      << "infidelity_threshold = " << format_number(c.infidelity_threshold) << '\n'
      << "projection_levels = " << c.projection_levels << '\n'
      << "projection_steps = " << c.projection_steps << '\n'
      << "polish = " << (c.polish ? "true" : "false") << "\n\n"
      << "[sweep]\n"
      << "axis = " << c.sweep_axis << '\n'
      << "repetition_rates_ghz = " << join(c.repetition_rates_ghz) << '\n'
      << "ion_counts = " << join(c.ion_counts) << '\n'
      << "spacing = " << c.spacing << '\n'
      << "pair_position = " << c.pair_position << '\n'
      << "gate_times_ns = " << join(c.gate_times_ns) << '\n'
      << "blocks = " << join(c.blocks) << "\n\n"
      << "[output]\n"
      << "directory = " << c.output_directory << '\n'
      << "format = " << c.output_format << '\n';
  return out.str();
}

}  // namespace fastgate
