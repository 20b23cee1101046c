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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fastgate/config.hpp"
#include "fastgate/errors.hpp"
#include "fastgate/io.hpp"

using namespace fastgate;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("default configuration is the calcium reference") {
  const RunConfig c;
  CHECK_NOTHROW(c.validate());
  const TrapConfig t = c.trap();
  CHECK(t.axial_frequency == doctest::Approx(2 * std::numbers::pi * 1.2e6));
  CHECK(t.wavenumber == doctest::Approx(2 * std::numbers::pi / 393e-9));
  CHECK(t.ion_count == 2);
  const DesignProblem p = c.problem();
  CHECK(p.repetition_rate == doctest::Approx(5e9));
  CHECK(p.mean_occupation == std::vector<double>{0.1});
  CHECK(p.pair == IonPair{0, 1});
  CHECK(p.convention == KickConvention::asymmetric);
  CHECK(c.anneal().timing_scale == doctest::Approx(2e-9));
}

TEST_CASE("parse, serialize, parse is the identity") {
  const RunConfig defaults;
  CHECK(parse_config_string(serialize_config(defaults)) == defaults);

  const std::string text = R"(# five ions, distant pair
[trap]
axial_frequency_mhz = 1.3
ions = 5

[scheme]
family = gzc
convention = symmetric
target_pair = 1, 5
objective = max-fidelity
gate_time_ns = 240.5

[laser]
repetition_rate_ghz = inf

[motional]
mean_occupation = 0.1, 0.2, 0.3, 0.4, 0.5

[optimizer]
seed = 18446744073709551615
timing_scale_ns = 0.1
n_min = 400
n_max = 400
polish = false

[sweep]
axis = gate-time
gate_times_ns = 60, 90.25, 1e3
ion_counts =
blocks = 1, 2, 3

[output]
directory = results/run 1
format = json
)";
  const RunConfig c = parse_config_string(text);
  CHECK(c.axial_frequency_mhz == 1.3);
  CHECK(c.ions == 5);
  CHECK(c.pair_first == 1);
  CHECK(c.pair_second == 5);
  CHECK(std::isinf(c.repetition_rate_ghz));
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.ion_counts.empty());
  CHECK(c.gate_times_ns == std::vector<double>{60, 90.25, 1000});
  CHECK(c.output_directory == "results/run 1");
  CHECK_FALSE(c.polish);
  const std::string once = serialize_config(c);
  CHECK(parse_config_string(once) == c);
  CHECK(serialize_config(parse_config_string(once)) == once);
  CHECK(c.problem().pair == IonPair{0, 4});
  CHECK(std::isinf(c.problem().repetition_rate));
}

TEST_CASE("awkward doubles survive the round trip") {
  RunConfig c;
  c.axial_frequency_mhz = 0.1 + 0.2;
  c.mass_amu = std::nextafter(40.0, 41.0);
  c.mean_occupation = {1.0 / 3.0, 2e-300};
  CHECK(parse_config_string(serialize_config(c)) == c);
}

TEST_CASE("configuration errors name the field") {
  CHECK(error_of("[trap]\nions = 0\n").find("trap.ions") != std::string::npos);
  CHECK(error_of("[trap]\nions = two\n").find("trap.ions") != std::string::npos);
  CHECK(error_of("[trap]\ncolour = red\n").find("trap.colour") != std::string::npos);
  CHECK(error_of("[nonsense]\nx = 1\n").find("nonsense") != std::string::npos);
  CHECK(error_of("[laser]\nrepetition_rate_ghz = -5\n").find("laser.repetition_rate_ghz") !=
        std::string::npos);
  CHECK(error_of("[scheme]\ntarget_pair = 2, 1\n").find("scheme.target_pair") != std::string::npos);
  CHECK(error_of("[scheme]\nfamily = zigzag\n").find("scheme.family") != std::string::npos);
  CHECK(error_of("[sweep]\naxis = colour\n").find("sweep.axis") != std::string::npos);
  CHECK(error_of("[output]\nformat = xml\n").find("output.format") != std::string::npos);
  CHECK(error_of("[trap]\nions 3\n").find("line 2") != std::string::npos);
  CHECK(error_of("ions = 3\n").find("section") != std::string::npos);
  CHECK(error_of("[motional]\nmean_occupation = 0.1, -1\n").find("motional.mean_occupation") !=
        std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/fastgate.cfg"), InvalidArgument);
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(io::format_number(2.0) == "2");
  CHECK(io::format_number(kInstantaneous) == "inf");
  CHECK(std::stod(io::format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(io::rate_to_json(kInstantaneous) == "inf");
  CHECK(std::isinf(io::rate_from_json(io::rate_to_json(kInstantaneous))));
  CHECK(io::rate_from_json(io::rate_to_json(5e9)) == 5e9);
}

TEST_CASE("scheme JSON round trip") {
  const GateScheme s = build_gzc(7, 1.0 / 3.0 * 1e-6, 0.2e-6, 0.1e-6 + 1e-17)
                           .with_target({1, 4})
                           .with_convention(KickConvention::symmetric);
  const io::Json j = io::scheme_to_json(s);
  CHECK(j["family"] == "gzc");
  CHECK(j["n"] == 7);
  CHECK(j["target_pair"] == io::Json::array({2, 5}));
  CHECK(j["counts"].size() == 6);
  const GateScheme back = io::scheme_from_json(io::Json::parse(j.dump()));
  CHECK(back == s);
  CHECK_THROWS_AS(io::scheme_from_json(io::Json::parse(R"({"family": "gzc"})")), InvalidArgument);
  const GateScheme duan = build_duan(4, 1e-7, 3);
  CHECK(io::scheme_from_json(io::scheme_to_json(duan)) == duan);
}

TEST_CASE("CSV tables") {
  const IonCrystal c(TrapConfig::calcium40(2));
  std::ostringstream positions;
  io::write_positions_csv(positions, c);
  CHECK(positions.str().rfind("ion_index,u,x_m\n1,", 0) == 0);

  std::ostringstream train;
  io::write_train_csv(train, expand(GateScheme({{2, 0.0}}), 1e9));
  CHECK(train.str() == "time_s,direction\n-5.0000000000000003e-10,1\n5.0000000000000003e-10,1\n");

  std::ostringstream ratio;
  const std::vector<int> counts{1, 10};
  io::write_radial_ratio_csv(ratio, counts);
  CHECK(ratio.str().find("\n10,4.61") != std::string::npos);
}

TEST_CASE("gate result JSON") {
  const IonCrystal c(TrapConfig::calcium40(2));
  const GateModel m(c, {0, 1}, KickConvention::asymmetric);
  const GateResult r =
      evaluate_gate(expand(build_frag(2, 6e-7, 4e-7, 2e-7), 1e9), m, ThermalState::uniform(2, 0.1));
  const io::Json j = io::result_to_json(r);
  for (const char* key : {"fidelity", "infidelity", "entangling_phase", "phi_gg", "gate_time_s",
                          "total_pulse_pairs", "residual_displacement_abs"})
    CHECK(j.contains(key));
  CHECK(j["total_pulse_pairs"] == 20);
  CHECK(j["residual_displacement_abs"]["gg"].size() == 2);
}
