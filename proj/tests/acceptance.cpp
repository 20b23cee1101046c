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

// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fastgate/crystal.hpp"
#include "fastgate/dynamics.hpp"
#include "fastgate/fidelity.hpp"
#include "fastgate/optimizer.hpp"
#include "fastgate/schemes.hpp"
#include "oracles.hpp"

using namespace fastgate;

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Timed {
  Design design;
  double seconds;
};

Timed timed_optimize(const DesignProblem& problem, const AnnealConfig& config = {}) {
  const auto start = std::chrono::steady_clock::now();
  Design d = optimize(problem, config);
  return {std::move(d), seconds_since(start)};
}

DesignProblem two_ion(SchemeFamily family, double rate) {
  DesignProblem p;
  p.family = family;
  p.repetition_rate = rate;
  return p;
}

double max_abs_c(const GateResult& r) {
  double m = 0.0;
  for (const auto& state : r.residual_displacement)
    for (auto c : state) m = std::max(m, std::abs(c));
  return m;
}

// Designs shared between criteria, computed once.
struct Shared {
  RateSweep frag_rates;
  double frag_rates_seconds = 0.0;
  Timed gzc5;
  Timed gzc20;
};

const std::vector<double> kRates{0.3e9, 1e9, 5e9, 20e9};

Shared compute_shared() {
  const auto t = std::chrono::steady_clock::now();
  RateSweep rates =
      sweep_repetition_rate(two_ion(SchemeFamily::frag, 5e9), AnnealConfig{}, kRates);
  const double seconds = seconds_since(t);
  Timed gzc5 = timed_optimize(two_ion(SchemeFamily::gzc, 5e9));
  Timed gzc20 = timed_optimize(two_ion(SchemeFamily::gzc, 20e9));
  return {std::move(rates), seconds, std::move(gzc5), std::move(gzc20)};
}

const Design& frag_at(const Shared& s, double rate) {
  for (const auto& row : s.frag_rates.rows)
    if (row.repetition_rate == rate) return row.design;
  throw std::logic_error("rate not in sweep");
}

Outcome criterion_1() {
  std::string detail;
  bool pass = true;
  for (auto family : {SchemeFamily::gzc, SchemeFamily::frag}) {
    AnnealConfig config;
    config.n_min = config.n_max = 10;
    const Timed t = timed_optimize(two_ion(family, kInstantaneous), config);
    const PulseTrain train = expand(t.design.scheme, kInstantaneous);
    const IonCrystal crystal(TrapConfig::calcium40(2));
    const auto cond =
        two_ion_conditions(train, crystal.config().axial_frequency, crystal.lamb_dicke()[0]);
    const double theta = t.design.result.entangling_phase;
    const double c_com = std::abs(cond.com);
    const double c_str = std::abs(cond.stretch);
    const bool ok = std::abs(theta - kQuarterPi) < 1e-10 && c_com < 1e-10 && c_str < 1e-10 &&
                    t.seconds < 60.0;
    pass = pass && ok;
    detail += fmt("%s n=%d |Theta-pi/4|=%.1e |C_c|=%.1e |C_r|=%.1e %.1fs; ",
                  std::string(to_string(family)).c_str(), t.design.scheme.n(),
                  std::abs(theta - kQuarterPi), c_com, c_str, t.seconds);
  }
  return {pass, detail};
}

Outcome criterion_2(const Shared& s) {
  std::string detail;
  bool pass = true;
  auto report = [&](const char* name, double rate, const Design& d, double seconds) {
    const bool ok = d.result.infidelity < 1e-7 && seconds < 600.0;
    pass = pass && ok;
    detail += fmt("%s@%gGHz 1-F=%.1e T_G=%.1fns %.0fs; ", name, rate / 1e9, d.result.infidelity,
                  d.result.gate_time * 1e9, seconds);
  };
  const double per_point = s.frag_rates_seconds / static_cast<double>(kRates.size());
  report("FRAG", 5e9, frag_at(s, 5e9), per_point);
  report("FRAG", 20e9, frag_at(s, 20e9), per_point);
  report("GZC", 5e9, s.gzc5.design, s.gzc5.seconds);
  report("GZC", 20e9, s.gzc20.design, s.gzc20.seconds);
  return {pass, detail};
}

Outcome criterion_3(const Shared& s) {
  const double a = s.frag_rates.time_vs_rate.exponent;
  const double b = s.frag_rates.time_vs_pulses.exponent;
  std::string detail = "T_G(f_r):";
  for (const auto& row : s.frag_rates.rows)
    detail += fmt(" %g->%.1fns/N_p=%d", row.repetition_rate / 1e9,
                  row.design.result.gate_time * 1e9, row.design.result.total_pulse_pairs);
  detail += fmt("; slope f_r %.3f (-0.40+-0.05), slope N_p %.3f (-0.667+-0.05)", a, b);
  return {std::abs(a + 0.40) <= 0.05 && std::abs(b + 2.0 / 3.0) <= 0.05, detail};
}

Outcome criterion_4() {
  const double reference[] = {494e-9, 293e-9, 154e-9, 89e-9};
  const std::vector<int> counts{2, 3, 4, 5};
  std::string detail;
  bool pass = true;
  for (std::size_t i = 0; i < kRates.size(); ++i) {
    const auto rows = sweep_ion_number(two_ion(SchemeFamily::frag, kRates[i]), AnnealConfig{},
                                       counts, SpacingMode::fixed_distance, PairPosition::end);
    const double tg = rows.front().result.gate_time;
    const double rel = tg / reference[i] - 1.0;
    pass = pass && std::abs(rel) <= 0.10;
    detail += fmt("%gGHz %.1fns (%+.1f%%, n=%d, 1-F(L=5)=%.1e); ", kRates[i] / 1e9, tg * 1e9,
                  100.0 * rel, rows.front().scheme.n(), rows.back().result.infidelity);
  }
  return {pass, detail};
}

Outcome criterion_5(const Shared& s) {
  const double rate = 5e9;
  std::vector<double> loss;
  double tg4 = 0.0;
  std::string detail = "Duan@5GHz 1-F:";
  for (int cycles = 1; cycles <= 4; ++cycles) {
    DesignProblem p = two_ion(SchemeFamily::duan, rate);
    p.cycles = cycles;
    p.objective = Objective::max_fidelity;
    const Design d = optimize(p, AnnealConfig{});
    loss.push_back(d.result.infidelity);
    if (cycles == 4) tg4 = d.result.gate_time;
    detail += fmt(" %d:%.3g(n=%d)", cycles, d.result.infidelity, d.scheme.n());
  }
  bool ordered = true;
  for (std::size_t i = 1; i < loss.size(); ++i) ordered = ordered && loss[i] < loss[i - 1];
  const double frag = frag_at(s, rate).result.gate_time;
  detail += fmt("; strictly decreasing=%s; T_G 4 cycles %.1fns vs FRAG %.1fns",
                ordered ? "yes" : "no", tg4 * 1e9, frag * 1e9);
  return {ordered && tg4 > frag, detail};
}

Outcome criterion_6() {
  DesignProblem p;
  p.trap = TrapConfig::calcium40(5);
  p.pair = {0, 4};
  p.repetition_rate = kInstantaneous;
  p.objective = Objective::max_fidelity;
  AnnealConfig config;
  config.n_min = config.n_max = 400;
  const Design d = optimize(p, config);
  const IonCrystal crystal(p.trap);
  const GateModel model(crystal, p.pair, p.convention);
  const PulseTrain train = expand(d.scheme, kInstantaneous);
  const auto grid = time_grid(train, 2001, 0.1 * train.gate_time());
  double final_max = 0.0;
  for (BasisState s : {BasisState::gg, BasisState::ee}) {
    const auto disp = driven_displacement(train, model, s, grid);
    for (double x : disp.final) final_max = std::max(final_max, std::abs(x));
  }
  const bool distant = d.result.fidelity >= 0.99 && final_max < 1e-9;
  std::string detail = fmt("5 ions (1,5) n=400 F=%.5f T_G=%.1fns max final |x_i|=%.3gnm; ",
                           d.result.fidelity, d.result.gate_time * 1e9, final_max * 1e9);

  DesignProblem q;
  q.trap = TrapConfig::calcium40(3);
  q.pair = {0, 2};
  std::vector<double> times;
  for (double t = 60e-9; t <= 600e-9 + 1e-12; t += 30e-9) times.push_back(t);
  struct Peak {
    bool interior;
    double fidelity;
    double time;
  };
  auto peak_of = [&](double rate) {
    q.repetition_rate = rate;
    const GateTimeSweep sweep = sweep_gate_time_distant(q, AnnealConfig{}, times);
    if (sweep.peak < 0) return Peak{false, 0.0, 0.0};
    const auto k = static_cast<std::size_t>(sweep.peak);
    const double best = sweep.rows[k].design->result.fidelity;
    auto fid = [&](std::size_t i) {
      return sweep.rows[i].design ? sweep.rows[i].design->result.fidelity : 0.0;
    };
    const bool interior = k > 0 && k + 1 < sweep.rows.size() && fid(0) < best &&
                          fid(sweep.rows.size() - 1) < best;
    return Peak{interior, best, sweep.rows[k].gate_time};
  };
  const Peak p5 = peak_of(5e9);
  const Peak p20 = peak_of(20e9);
  const bool structure = p5.interior && p20.interior && p20.fidelity > p5.fidelity &&
                         p20.time < p5.time;
  detail += fmt("3 ions (1,3) peak 5GHz F=%.4f at %.0fns, 20GHz F=%.4f at %.0fns", p5.fidelity,
                p5.time * 1e9, p20.fidelity, p20.time * 1e9);
  return {distant && structure, detail};
}

Outcome criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> occupation(0.0, 2.0);
  double worst2 = 0.0;
  double worst3 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Complex x(u(rng), u(rng));
    const Complex y(u(rng), u(rng));
    const double phi = kQuarterPi + u(rng);
    const double nbar = occupation(rng);
    const auto g2 = oracle::two_ion_gate(x, y, phi);
    const double closed2 = fidelity_2(x, y, 2.0 * phi - std::numbers::pi / 2.0, nbar);
    worst2 = std::max(worst2, std::abs(fidelity_general(g2, ThermalState::uniform(2, nbar)) -
                                       closed2));

    const std::array<Complex, 3> c{Complex(u(rng), u(rng)), Complex(u(rng), u(rng)),
                                   Complex(u(rng), u(rng))};
    const std::array<double, 3> n3{occupation(rng), occupation(rng), occupation(rng)};
    const auto g3 = oracle::three_ion_gate(c, phi);
    const double closed3 = fidelity_3(c[0], c[1], c[2], phi, n3);
    worst3 = std::max(worst3, std::abs(fidelity_general(g3, ThermalState{{n3[0], n3[1], n3[2]}}) -
                                       closed3));
  }

  // Non-colinear displacements exercise the product phases.
  const std::vector<double> nbar{0.1, 0.3, 0.05};
  fastgate::StateResolvedGate gate;
  std::mt19937_64 gen(11);
  for (auto& d : gate.displacement) d = {Complex(0.4 * u(gen), 0.4 * u(gen)),
                                         Complex(0.4 * u(gen), 0.4 * u(gen)),
                                         Complex(0.4 * u(gen), 0.4 * u(gen))};
  for (std::size_t s = 0; s < 4; ++s) gate.phase[s] = ideal_phase(kBasisStates[s]) + 0.3 * u(gen);
  const double exact = fidelity_general(gate, ThermalState{nbar});
  const auto mc = oracle::average_fidelity(gate, nbar, 1000000, 2024);
  const double z = std::abs(mc.mean - exact) / mc.standard_error;
  const bool pass = worst2 < 1e-12 && worst3 < 1e-12 && z < 3.0;
  return {pass, fmt("max |F_gen-F2|=%.1e, max |F_gen-F3|=%.1e over 1000 inputs; MC %.6f+-%.1e vs "
                    "%.6f (%.2f sigma)",
                    worst2, worst3, mc.mean, mc.standard_error, exact, z)};
}

Outcome criterion_8() {
  std::mt19937_64 rng(8);
  double worst_c = 0.0;
  double worst_theta = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int ions = 2 + trial % 4;
    const IonCrystal crystal(TrapConfig::calcium40(ions));
    const IonPair pair{0, ions - 1 - trial % (ions - 1)};
    const auto convention = trial % 2 ? KickConvention::symmetric : KickConvention::asymmetric;
    const GateModel model(crystal, pair, convention);
    const PulseTrain train = oracle::random_train(rng, 50, 2e-6);
    double walsh = 0.0;
    for (BasisState s : kBasisStates) {
      const ComposedEvolution composed = oracle_compose(train, model, s);
      double phase = 0.0;
      for (int p = 0; p < ions; ++p) {
        const Complex closed = mode_displacement(train, model, s, p);
        worst_c = std::max(worst_c, std::abs(closed - composed.displacement[std::size_t(p)]));
        phase += composed.phase[std::size_t(p)];
      }
      walsh += spin(s, 0) * spin(s, 1) * phase / 4.0;
    }
    worst_theta = std::max(worst_theta, std::abs(walsh - entangling_phase(train, model)));
  }
  return {worst_c < 1e-12 && worst_theta < 1e-12,
          fmt("max |dC|=%.1e, max |dTheta|=%.1e over 100 trains of 50 events", worst_c,
              worst_theta)};
}

// |S_p| for a scheme with every time scaled by lambda, slope of log|S| vs log lambda.
double residual_order(const GateScheme& unit, const IonCrystal& crystal, int mode) {
  const GateModel model(crystal, {0, 1}, KickConvention::symmetric);
  std::vector<double> lambda;
  std::vector<double> residual;
  for (int i = 0; i <= 10; ++i) {
    const double l = 0.01 * std::pow(10.0, i / 10.0);
    std::vector<KickGroup> groups;
    for (auto g : unit.groups()) groups.push_back({g.count, g.time * l});
    const PulseTrain train = expand(GateScheme(groups), kInstantaneous);
    lambda.push_back(l);
    residual.push_back(std::abs(mode_sums(train, model).restoration[std::size_t(mode)]));
  }
  return fit_power_law(lambda, residual).exponent;
}

Outcome criterion_9() {
  const IonCrystal crystal(TrapConfig::calcium40(2));
  const double unit = 1.0 / crystal.config().axial_frequency;
  // Positive half (2, -2, 1) at (1, 3, 4): sum a_k tau_k = 0.
  const GateScheme reflected({{-1, -4 * unit}, {2, -3 * unit}, {-2, -unit},
                              {2, unit}, {-2, 3 * unit}, {1, 4 * unit}});
  // a = (1, -2), tau = (2, 1), f = 3: sum a_k tau_k = 0.
  const GateScheme four_block({{1, -5 * unit}, {-2, -4 * unit}, {2, -2 * unit}, {-1, -unit},
                               {-1, unit}, {2, 2 * unit}, {-2, 4 * unit}, {1, 5 * unit}});
  const bool classes = classify_symmetry(reflected) == SymmetryClass::reflected_antisymmetric &&
                       classify_symmetry(four_block) == SymmetryClass::doubled_four_block;
  bool pass = classes;
  std::string detail = classes ? "" : "symmetry classes not detected; ";
  for (int p = 0; p < 2; ++p) {
    const double r = residual_order(reflected, crystal, p);
    const double f = residual_order(four_block, crystal, p);
    pass = pass && std::abs(r - 3.0) <= 0.2 && std::abs(f - 4.0) <= 0.3;
    detail += fmt("mode %d: reflected %.3f, four-block %.3f; ", p + 1, r, f);
  }
  return {pass, detail};
}

Outcome criterion_10() {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int ions = 2 + trial % 4;
    const IonCrystal crystal(TrapConfig::calcium40(ions));
    const IonPair pair{0, 1 + trial % (ions - 1)};
    const PulseTrain train = oracle::random_train(rng, 40, 3e-6);
    const double sym = entangling_phase(train, GateModel(crystal, pair, KickConvention::symmetric));
    const double asym =
        entangling_phase(train, GateModel(crystal, pair, KickConvention::asymmetric));
    worst = std::max(worst, std::abs(asym / sym - 0.25));
  }
  return {worst < 1e-12, fmt("max |Theta_asym/Theta_sym - 1/4| = %.1e over 100 trains", worst)};
}

Outcome criterion_11(const Shared& s) {
  std::string detail;
  bool pass = true;
  const IonCrystal crystal(TrapConfig::calcium40(2));
  for (const auto* t : {&s.gzc5, &s.gzc20}) {
    const double rate = t == &s.gzc5 ? 5e9 : 20e9;
    for (double nbar : {0.1, 1.0, 10.0}) {
      const GateResult r = evaluate_scheme(t->design.scheme, crystal, rate,
                                           ThermalState::uniform(2, nbar));
      pass = pass && r.infidelity <= 1e-7;
      detail += fmt("%gGHz nbar=%g 1-F=%.1e; ", rate / 1e9, nbar, r.infidelity);
    }
  }
  return {pass, detail};
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const Shared shared = compute_shared();

  const std::vector<std::function<Outcome()>> criteria{
      criterion_1,
      [&] { return criterion_2(shared); },
      [&] { return criterion_3(shared); },
      criterion_4,
      [&] { return criterion_5(shared); },
      criterion_6,
      criterion_7,
      criterion_8,
      criterion_9,
      criterion_10,
      [&] { return criterion_11(shared); },
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("CRITERION %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed in %.0fs\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), seconds_since(start));
  return failures == 0 ? 0 : 1;
}
