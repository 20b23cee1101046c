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

#include "fastgate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "fastgate/constants.hpp"
#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kGapSlack = 1e-12;

// |z| of the first three groups; the last three mirror them.
std::array<int, 3> outer_counts(SchemeFamily family, int n) {
  if (family == SchemeFamily::gzc) return {2 * n, 3 * n, 2 * n};
  return {n, 2 * n, 2 * n};
}

std::array<int, 6> signed_counts(SchemeFamily family, int n) {
  if (family == SchemeFamily::gzc) return {-2 * n, 3 * n, -2 * n, 2 * n, -3 * n, 2 * n};
  return {-n, 2 * n, -2 * n, 2 * n, -2 * n, n};
}

// tau3 >= centre, tau2 - tau3 >= inner, tau1 - tau2 >= outer.
struct Minima {
  double centre;
  double inner;
  double outer;
};

Minima minima(SchemeFamily family, int n, double rate) {
  const auto c = outer_counts(family, n);
  return {0.5 * required_group_spacing(c[2], c[2], rate), required_group_spacing(c[1], c[2], rate),
          required_group_spacing(c[0], c[1], rate)};
}

double edge_time(SchemeFamily family, int n, double rate) {
  if (!(rate < kInstantaneous)) return 0.0;
  return (outer_counts(family, n)[0] - 1) / rate;
}

// Expansion without the overlap check, sorted by time.
std::vector<PulseEvent> spread(SchemeFamily family, int n, const std::array<double, 3>& tau,
                               double rate) {
  const auto z = signed_counts(family, n);
  const std::array<double, 6> t{-tau[0], -tau[1], -tau[2], tau[2], tau[1], tau[0]};
  std::vector<PulseEvent> events;
  if (!(rate < kInstantaneous)) {
    for (std::size_t k = 0; k < 6; ++k) events.push_back({t[k], z[k]});
  } else {
    const double period = 1.0 / rate;
    for (std::size_t k = 0; k < 6; ++k) {
      const int size = std::abs(z[k]);
      const int sign = z[k] > 0 ? 1 : -1;
      const double half = 0.5 * (size - 1);
      for (int j = 0; j < size; ++j) events.push_back({t[k] + (j - half) * period, sign});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const PulseEvent& a, const PulseEvent& b) { return a.time < b.time; });
  return events;
}

GateScheme build_six(SchemeFamily family, int n, const std::array<double, 3>& tau) {
  return family == SchemeFamily::gzc ? build_gzc(n, tau[0], tau[1], tau[2])
                                     : build_frag(n, tau[0], tau[1], tau[2]);
}

std::mt19937_64 stream(std::uint64_t seed, int index, int stage) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(stage)};
  return std::mt19937_64(seq);
}

// gap[0]: tau1 - tau2 above its minimum, gap[1]: tau2 - tau3, gap[2]: tau3.
struct Point {
  int n = 1;
  std::array<double, 3> gap{};
};

struct Scored {
  Point point;
  double loss = std::numeric_limits<double>::infinity();
  double gate_time = std::numeric_limits<double>::infinity();
  int restart = 0;
  bool valid = false;
};

double stage_one_objective(double loss) {
  return -std::log10(std::max(loss, kInfidelityFloor));
}

// Best objective wins, then the shorter gate, then the lower restart index.
bool better_stage_one(const Scored& a, const Scored& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  const double oa = stage_one_objective(a.loss);
  const double ob = stage_one_objective(b.loss);
  if (oa != ob) return oa > ob;
  if (a.gate_time != b.gate_time) return a.gate_time < b.gate_time;
  return a.restart < b.restart;
}

class Search {
 public:
  Search(const DesignProblem& problem, const AnnealConfig& config)
      : problem_(problem),
        config_(config),
        crystal_(problem.trap),
        model_(crystal_, problem.pair, problem.convention),
        thermal_(problem.thermal(crystal_.size())),
        rate_(problem.repetition_rate) {
    period_ = 2.0 * std::numbers::pi / problem.trap.axial_frequency;
    n_lo_ = config.n_min;
    if (config.n_max > 0) {
      n_hi_ = config.n_max;
    } else if (!(rate_ < kInstantaneous)) {
      n_hi_ = n_lo_;
    } else {
      const Minima m = minima(problem.family, 1, rate_);
      const double unit = 2.0 * (m.centre + m.inner + m.outer) + edge_time(problem.family, 1, rate_);
      n_hi_ = std::max(n_lo_, static_cast<int>(0.6 * period_ / unit));
    }
    for (int p = 0; p < model_.mode_count(); ++p) {
      double kappa = 0.0;
      for (BasisState s : kBasisStates) kappa = std::max(kappa, std::abs(model_.kick_strength(p, s)));
      weights_.push_back(kappa * std::sqrt(0.5 + thermal_.mean_occupation[static_cast<std::size_t>(p)]));
    }
  }

  long evaluations() const { return evaluations_; }
  bool pinned() const { return problem_.gate_time > 0.0; }

  double pinned_tau1(int n) const {
    return 0.5 * (problem_.gate_time - edge_time(problem_.family, n, rate_));
  }

  // Fills tau and returns false when the point violates ordering or overlap.
  bool taus(Point& p, std::array<double, 3>& tau) const {
    const Minima m = minima(problem_.family, p.n, rate_);
    tau[2] = m.centre + p.gap[2];
    tau[1] = tau[2] + m.inner + p.gap[1];
    if (pinned()) {
      tau[0] = pinned_tau1(p.n);
      p.gap[0] = tau[0] - tau[1] - m.outer;
    } else {
      tau[0] = tau[1] + m.outer + p.gap[0];
    }
    const double scale = kGapSlack * std::max(tau[0], 1e-300);
    for (double g : p.gap)
      if (g < -scale) return false;
    return tau[2] > 0.0 && tau[1] > tau[2] && tau[0] > tau[1];
  }

  double gate_time(int n, const std::array<double, 3>& tau) const {
    return 2.0 * tau[0] + edge_time(problem_.family, n, rate_);
  }

  double loss(const std::vector<PulseEvent>& events) const {
    ++evaluations_;
    const ModeSums sums = mode_sums(PulseTrain(events, rate_), model_);
    return infidelity_general(resolve_states(sums, model_), thermal_);
  }

  Scored score(Point p, int restart) const {
    Scored s;
    s.restart = restart;
    std::array<double, 3> tau{};
    if (!taus(p, tau)) return s;
    s.point = p;
    s.loss = loss(spread(problem_.family, p.n, tau, rate_));
    s.gate_time = gate_time(p.n, tau);
    s.valid = true;
    return s;
  }

  std::optional<Point> random_point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Point p;
      const double lo = std::log(static_cast<double>(n_lo_));
      const double hi = std::log(static_cast<double>(n_hi_) + 1.0);
      p.n = std::clamp(static_cast<int>(std::exp(lo + (hi - lo) * unit(rng))), n_lo_, n_hi_);
      const double span = rate_ < kInstantaneous ? 0.1 * period_ : phase_scale(p.n);
      if (pinned()) {
        const Minima m = minima(problem_.family, p.n, rate_);
        const double room = pinned_tau1(p.n) - m.centre - m.inner - m.outer;
        if (!(room > 0.0)) continue;
        double a = unit(rng);
        double b = unit(rng);
        if (a > b) std::swap(a, b);
        p.gap = {(1.0 - b) * room, (b - a) * room, a * room};
      } else {
        for (auto& g : p.gap) g = span * unit(rng);
      }
      std::array<double, 3> tau{};
      if (taus(p, tau)) return p;
    }
    return std::nullopt;
  }

  // Ideal kicks have no minimum spacing, so gaps are drawn up to the time
  // scale at which evenly spaced groups first reach a phase of pi/4.
  double phase_scale(int n) const {
    constexpr int kSamples = 400;
    for (int k = 1; k <= kSamples; ++k) {
      const double s = period_ * k / kSamples;
      const std::array<double, 3> tau{s, 2.0 * s / 3.0, s / 3.0};
      const ModeSums sums =
          mode_sums(PulseTrain(spread(problem_.family, n, tau, rate_), rate_), model_);
      if (std::abs(entangling_phase(sums, model_)) >= kQuarterPi) return s / 3.0;
    }
    return period_ / 3.0;
  }

  Point move(const Point& from, double scale, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Point p = from;
    if (n_hi_ > n_lo_ && unit(rng) < config_.n_move_probability) {
      const int step =
          std::max(1, static_cast<int>(std::lround(std::abs(normal(rng)) * 0.05 * p.n)));
      int next = unit(rng) < 0.5 ? p.n - step : p.n + step;
      if (next < n_lo_ || next > n_hi_) next = p.n < next ? p.n - step : p.n + step;
      p.n = std::clamp(next, n_lo_, n_hi_);
      return p;
    }
    const std::size_t first = pinned() ? 1 : 0;
    for (std::size_t k = first; k < 3; ++k) p.gap[k] = std::abs(p.gap[k] + scale * normal(rng));
    return p;
  }

  struct Residual {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const Search* search;
    int n;
    int free;
    double tau1;

    int inputs() const { return free; }
    int values() const { return 2 * search->model_.mode_count() + 1; }

    std::array<double, 3> unpack(const Eigen::VectorXd& x) const {
      const double inv = 1.0 / search->problem_.trap.axial_frequency;
      if (free == 2) return {tau1, x[0] * inv, x[1] * inv};
      return {x[0] * inv, x[1] * inv, x[2] * inv};
    }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
      const auto events = spread(search->problem_.family, n, unpack(x), search->rate_);
      ++search->evaluations_;
      const ModeSums sums = mode_sums(PulseTrain(events, search->rate_), search->model_);
      for (int p = 0; p < search->model_.mode_count(); ++p) {
        const auto i = static_cast<std::size_t>(p);
        r[2 * p] = search->weights_[i] * sums.restoration[i].real();
        r[2 * p + 1] = search->weights_[i] * sums.restoration[i].imag();
      }
      r[values() - 1] = entangling_phase(sums, search->model_) - kQuarterPi;
      return 0;
    }
  };

  // Levenberg-Marquardt on the restoration and phase residuals at fixed n.
  std::optional<Point> polish(Point p) const {
    std::array<double, 3> tau{};
    if (!taus(p, tau)) return std::nullopt;
    const double nu = problem_.trap.axial_frequency;
    Residual functor{this, p.n, pinned() ? 2 : 3, tau[0]};
    Eigen::VectorXd x(functor.free);
    if (functor.free == 2) {
      x << tau[1] * nu, tau[2] * nu;
    } else {
      x << tau[0] * nu, tau[1] * nu, tau[2] * nu;
    }
    Eigen::NumericalDiff<Residual, Eigen::Central> numeric(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residual, Eigen::Central>> lm(numeric);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 200;
    lm.minimize(x);
    if (!x.allFinite()) return std::nullopt;
    tau = functor.unpack(x);
    const Minima m = minima(problem_.family, p.n, rate_);
    p.gap = {tau[0] - tau[1] - m.outer, tau[1] - tau[2] - m.inner, tau[2] - m.centre};
    const double scale = kGapSlack * std::abs(tau[0]);
    for (auto& g : p.gap) {
      if (g < -scale) return std::nullopt;
      g = std::max(g, 0.0);
    }
    std::array<double, 3> check{};
    if (!taus(p, check)) return std::nullopt;
    return p;
  }

  double initial_temperature() const {
    if (config_.initial_temperature > 0.0) return config_.initial_temperature;
    auto rng = stream(config_.seed, config_.restarts, 9);
    double mean = 0.0;
    double m2 = 0.0;
    int count = 0;
    for (int k = 0; k < 100; ++k) {
      auto p = random_point(rng);
      if (!p) continue;
      const double f = stage_one_objective(score(*p, 0).loss);
      ++count;
      const double d = f - mean;
      mean += d / count;
      m2 += d * (f - mean);
    }
    const double spread_value = count > 1 ? std::sqrt(m2 / (count - 1)) : 0.0;
    return spread_value > 1e-3 ? spread_value : 1.0;
  }

  Scored anneal(int restart, double t0) const {
    auto rng = stream(config_.seed, restart, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto start = random_point(rng);
    if (!start) return {};
    Scored current = score(*start, restart);
    Scored best = current;
    double temperature = t0;
    for (int level = 0; level < config_.temperature_levels; ++level) {
      const double scale = config_.timing_scale * std::max(std::sqrt(temperature / t0), 1e-3);
      for (int step = 0; step < config_.steps_per_temperature; ++step) {
        Scored next = score(move(current.point, scale, rng), restart);
        if (!next.valid) continue;
        const double delta = stage_one_objective(next.loss) - stage_one_objective(current.loss);
        if (delta >= 0.0 || metropolis_accept(delta, temperature, unit(rng))) current = next;
        if (better_stage_one(current, best)) best = current;
      }
      temperature *= config_.cooling_factor;
    }
    if (config_.polish) {
      if (auto polished = polish(best.point)) {
        Scored candidate = score(*polished, restart);
        if (candidate.valid && candidate.loss < best.loss) best = candidate;
      }
    }
    return best;
  }

  Scored shorten(const Scored& seed_point, int restart) const {
    const double threshold = config_.infidelity_threshold;
    Scored current = seed_point;
    if (!current.valid) return {};
    if (current.loss > threshold) {
      auto projected = polish(current.point);
      if (!projected) return {};
      current = score(*projected, restart);
      if (!current.valid || current.loss > threshold) return {};
    }
    auto rng = stream(config_.seed, restart, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Scored best = current;
    const double t0 = std::max(0.02 * current.gate_time, 1e-12);
    double temperature = t0;
    const int stride = std::max(1, config_.temperature_levels / std::max(1, config_.projection_levels));
    const double cooling = std::pow(config_.cooling_factor, stride);
    for (int level = 0; level < config_.projection_levels; ++level) {
      const double scale = config_.timing_scale * (1.0 + 2.0 * temperature / t0);
      for (int step = 0; step < config_.projection_steps; ++step) {
        auto projected = polish(move(current.point, scale, rng));
        if (!projected) continue;
        Scored next = score(*projected, restart);
        if (!next.valid || next.loss > threshold) continue;
        const double delta = current.gate_time - next.gate_time;
        if (delta >= 0.0 || metropolis_accept(delta, temperature, unit(rng))) current = next;
        if (current.gate_time < best.gate_time) best = current;
      }
      temperature *= cooling;
    }
    return best;
  }

  Design finish(const Scored& s) const {
    Point p = s.point;
    std::array<double, 3> tau{};
    taus(p, tau);
    GateScheme scheme = build_six(problem_.family, p.n, tau)
                            .with_target(problem_.pair)
                            .with_convention(problem_.convention);
    GateResult result = evaluate_scheme(scheme, crystal_, rate_, thermal_);
    const bool meets = result.infidelity <= config_.infidelity_threshold;
    return {std::move(scheme), std::move(result), s.restart, meets, evaluations_};
  }

  Design run() const {
    const double t0 = initial_temperature();
    std::vector<Scored> firsts;
    for (int r = 0; r < config_.restarts; ++r) firsts.push_back(anneal(r, t0));
    Scored best;
    for (const auto& s : firsts)
      if (better_stage_one(s, best)) best = s;
    if (!best.valid)
      throw InfeasibleError("no overlap-free timing found for the requested scheme");

    if (problem_.objective == Objective::min_time && !pinned()) {
      Scored fastest;
      for (int r = 0; r < config_.restarts; ++r) {
        Scored s = shorten(firsts[static_cast<std::size_t>(r)], r);
        if (!s.valid) continue;
        if (!fastest.valid || s.gate_time < fastest.gate_time ||
            (s.gate_time == fastest.gate_time && s.restart < fastest.restart))
          fastest = s;
      }
      if (fastest.valid) best = fastest;
    }
    return finish(best);
  }

  const IonCrystal& crystal() const { return crystal_; }
  const GateModel& model() const { return model_; }
  const ThermalState& thermal() const { return thermal_; }

 private:
  const DesignProblem& problem_;
  const AnnealConfig& config_;
  IonCrystal crystal_;
  GateModel model_;
  ThermalState thermal_;
  double rate_;
  double period_ = 0.0;
  int n_lo_ = 1;
  int n_hi_ = 1;
  std::vector<double> weights_;
  mutable long evaluations_ = 0;
};

double duan_phase(const GateModel& model, const GateScheme& scheme, double rate) {
  return entangling_phase(expand(scheme, rate), model);
}

Design optimize_duan(const DesignProblem& problem, const AnnealConfig& config) {
  const IonCrystal crystal(problem.trap);
  const GateModel model(crystal, problem.pair, problem.convention);
  const ThermalState thermal = problem.thermal(crystal.size());
  const double rate = problem.repetition_rate;

  auto make = [&](int n) {
    GateScheme scheme = rate < kInstantaneous
                            ? build_duan_contiguous(n, rate, problem.cycles)
                            : build_duan(n, duan_tau_for_phase(model, n, problem.cycles),
                                         problem.cycles);
    return scheme.with_target(problem.pair).with_convention(problem.convention);
  };

  std::vector<int> candidates;
  if (rate < kInstantaneous) {
    const int centre = duan_blocks_for_phase(model, rate, problem.cycles);
    for (int n = std::max(1, centre / 2); n <= centre + 2; ++n) {
      if (n < config.n_min || (config.n_max > 0 && n > config.n_max)) continue;
      candidates.push_back(n);
    }
    if (candidates.empty()) throw InfeasibleError("Duan phase solution lies outside the n range");
  } else {
    candidates.push_back(config.n_min);
  }

  std::optional<Design> best;
  long evaluations = 0;
  for (int n : candidates) {
    GateScheme scheme = make(n);
    GateResult result = evaluate_scheme(scheme, crystal, rate, thermal);
    ++evaluations;
    const bool meets = result.infidelity <= config.infidelity_threshold;
    Design design{std::move(scheme), std::move(result), 0, meets, evaluations};
    if (!best) {
      best = std::move(design);
      continue;
    }
    bool take;
    if (problem.objective == Objective::min_time && (design.meets_threshold || best->meets_threshold)) {
      take = design.meets_threshold &&
             (!best->meets_threshold || design.result.gate_time < best->result.gate_time);
    } else {
      take = design.result.infidelity < best->result.infidelity;
    }
    if (take) best = std::move(design);
  }
  best->evaluations = evaluations;
  return std::move(*best);
}

}  // namespace

std::string_view to_string(Objective objective) {
  return objective == Objective::max_fidelity ? "max-fidelity" : "min-time";
}

Objective parse_objective(std::string_view text) {
  if (text == "max-fidelity") return Objective::max_fidelity;
  if (text == "min-time") return Objective::min_time;
  throw InvalidArgument("unknown objective '" + std::string(text) + "'");
}

void AnnealConfig::validate() const {
  if (!(cooling_factor > 0.0 && cooling_factor < 1.0))
    throw InvalidArgument("cooling_factor must lie in (0, 1)");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (steps_per_temperature < 1 || temperature_levels < 1)
    throw InvalidArgument("anneal schedule must have at least one step");
  if (projection_levels < 0 || projection_steps < 0)
    throw InvalidArgument("projection schedule must be non-negative");
  if (!(timing_scale > 0.0)) throw InvalidArgument("timing_scale must be positive");
  if (n_min < 1) throw InvalidArgument("n_min must be at least 1");
  if (n_max != 0 && n_max < n_min) throw InvalidArgument("n_max must be 0 or >= n_min");
  if (!(n_move_probability >= 0.0 && n_move_probability <= 1.0))
    throw InvalidArgument("n_move_probability must lie in [0, 1]");
  if (!(infidelity_threshold > 0.0)) throw InvalidArgument("infidelity_threshold must be positive");
  if (!(initial_temperature >= 0.0)) throw InvalidArgument("initial_temperature must be >= 0");
}

void DesignProblem::validate() const {
  trap.validate();
  if (pair.first < 0 || pair.first >= pair.second || pair.second >= trap.ion_count)
    throw InvalidArgument("target pair lies outside the crystal");
  if (!(repetition_rate > 0.0)) throw InvalidArgument("repetition rate must be positive");
  if (family == SchemeFamily::custom) throw InvalidArgument("custom schemes cannot be optimised");
  if (cycles < 1) throw InvalidArgument("cycles must be at least 1");
  if (!(gate_time >= 0.0) || !std::isfinite(gate_time))
    throw InvalidArgument("gate_time must be non-negative");
  for (double n : mean_occupation)
    if (!(n >= 0.0)) throw InvalidArgument("mean occupations must be non-negative");
}

ThermalState DesignProblem::thermal(int modes) const {
  if (mean_occupation.empty())
    return ThermalState::uniform(modes, constants::kReferenceMeanOccupation);
  if (mean_occupation.size() == 1) return ThermalState::uniform(modes, mean_occupation.front());
  ThermalState state{mean_occupation};
  state.validate(modes);
  return state;
}

bool metropolis_accept(double delta, double temperature, double uniform) {
  return delta >= 0.0 || uniform < std::exp(delta / temperature);
}

GateResult evaluate_scheme(const GateScheme& scheme, const IonCrystal& crystal,
                           double repetition_rate, const ThermalState& thermal) {
  const GateModel model(crystal, scheme.target_pair(), scheme.convention());
  return evaluate_gate(expand(scheme, repetition_rate), model, thermal);
}

Design optimize(const DesignProblem& problem, const AnnealConfig& config) {
  problem.validate();
  config.validate();
  if (problem.family == SchemeFamily::duan) return optimize_duan(problem, config);
  Search search(problem, config);
  return search.run();
}

int duan_blocks_for_phase(const GateModel& model, double repetition_rate, int cycles,
                          int n_limit) {
  if (!(repetition_rate > 0.0 && repetition_rate < kInstantaneous))
    throw InvalidArgument("Duan block search needs a finite repetition rate");
  const double period = 2.0 * std::numbers::pi / model.frequency(0);
  for (int n = 1; n <= n_limit; ++n) {
    const GateScheme scheme = build_duan_contiguous(n, repetition_rate, cycles);
    if (4.0 * n * cycles / repetition_rate > 4.0 * period) break;
    if (duan_phase(model, scheme, repetition_rate) >= kQuarterPi) return n;
  }
  throw InfeasibleError("Duan scheme cannot reach the target phase at this repetition rate");
}

double duan_tau_for_phase(const GateModel& model, int n, int cycles) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const double period = 2.0 * std::numbers::pi / model.frequency(0);
  auto phase = [&](double tau) {
    return duan_phase(model, build_duan(n, tau, cycles), kInstantaneous) - kQuarterPi;
  };
  const double step = period / 2000.0;
  double lo = step;
  if (phase(lo) >= 0.0) {
    double a = 0.0;
    double b = lo;
    for (int k = 0; k < 200; ++k) {
      const double m = 0.5 * (a + b);
      if (m <= 0.0) break;
      (phase(m) >= 0.0 ? b : a) = m;
    }
    return b;
  }
  for (double hi = 2.0 * step; hi <= 2.0 * period; hi += step) {
    if (phase(hi) >= 0.0) {
      for (int k = 0; k < 200 && hi - lo > 1e-16 * hi; ++k) {
        const double m = 0.5 * (lo + hi);
        (phase(m) >= 0.0 ? hi : lo) = m;
      }
      return hi;
    }
    lo = hi;
  }
  throw InfeasibleError("Duan scheme cannot reach the target phase");
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("power-law fit needs at least two matched points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw InvalidArgument("power-law fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(x.size());
  const double denom = k * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw InvalidArgument("power-law fit needs distinct x values");
  const double slope = (k * sxy - sx * sy) / denom;
  return {slope, std::exp((sy - slope * sx) / k)};
}

RateSweep sweep_repetition_rate(const DesignProblem& problem, const AnnealConfig& config,
                                std::span<const double> rates) {
  if (rates.empty()) throw InvalidArgument("repetition-rate list is empty");
  RateSweep sweep;
  std::vector<double> f, t, np;
  for (double rate : rates) {
    DesignProblem point = problem;
    point.repetition_rate = rate;
    Design design = optimize(point, config);
    f.push_back(rate);
    t.push_back(design.result.gate_time);
    np.push_back(design.result.total_pulse_pairs);
    sweep.rows.push_back({rate, std::move(design)});
  }
  if (rates.size() >= 2) {
    bool finite = std::all_of(f.begin(), f.end(), [](double r) { return r < kInstantaneous; });
    if (finite) sweep.time_vs_rate = fit_power_law(f, t);
    sweep.time_vs_pulses = fit_power_law(np, t);
  }
  return sweep;
}

PulseSweep sweep_pulse_number(const DesignProblem& problem, const AnnealConfig& config,
                              std::span<const int> blocks) {
  if (blocks.empty()) throw InvalidArgument("block-size list is empty");
  PulseSweep sweep;
  std::vector<double> np, t;
  for (int n : blocks) {
    AnnealConfig fixed = config;
    fixed.n_min = n;
    fixed.n_max = n;
    Design design = optimize(problem, fixed);
    np.push_back(design.result.total_pulse_pairs);
    t.push_back(design.result.gate_time);
    sweep.rows.push_back({n, std::move(design)});
  }
  if (blocks.size() >= 2) sweep.time_vs_pulses = fit_power_law(np, t);
  return sweep;
}

std::string_view to_string(SpacingMode mode) {
  return mode == SpacingMode::fixed_frequency ? "fixed-frequency" : "fixed-distance";
}

std::string_view to_string(PairPosition position) {
  return position == PairPosition::end ? "end" : "middle";
}

SpacingMode parse_spacing_mode(std::string_view text) {
  if (text == "fixed-frequency" || text == "fixed-nu") return SpacingMode::fixed_frequency;
  if (text == "fixed-distance") return SpacingMode::fixed_distance;
  throw InvalidArgument("unknown spacing mode '" + std::string(text) + "'");
}

PairPosition parse_pair_position(std::string_view text) {
  if (text == "end") return PairPosition::end;
  if (text == "middle") return PairPosition::middle;
  throw InvalidArgument("unknown pair position '" + std::string(text) + "'");
}

IonPair target_pair(int ion_count, PairPosition position) {
  if (ion_count < 2) throw InvalidArgument("a gate needs at least two ions");
  if (position == PairPosition::end) return {0, 1};
  const int left = (ion_count - 1) / 2;
  return {left, left + 1};
}

namespace {

double max_residual(const GateResult& result) {
  double worst = 0.0;
  for (const auto& state : result.residual_displacement)
    for (Complex c : state) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace

std::vector<IonRow> sweep_ion_number(const DesignProblem& problem, const AnnealConfig& config,
                                     std::span<const int> ion_counts, SpacingMode mode,
                                     PairPosition position) {
  if (ion_counts.empty()) throw InvalidArgument("ion-number list is empty");
  for (int L : ion_counts)
    if (L < 2) throw InvalidArgument("ion numbers must be at least 2");
  std::vector<IonRow> rows;

  if (mode == SpacingMode::fixed_frequency) {
    for (int L : ion_counts) {
      DesignProblem point = problem;
      point.trap.ion_count = L;
      point.pair = target_pair(L, position);
      Design design = optimize(point, config);
      const IonCrystal crystal(point.trap);
      const double residual = max_residual(design.result);
      rows.push_back({L, point.trap.axial_frequency, crystal.separation(point.pair), point.pair,
                      std::move(design.scheme), std::move(design.result), residual});
    }
    return rows;
  }

  DesignProblem base = problem;
  base.trap.ion_count = 2;
  base.pair = {0, 1};
  const Design design = optimize(base, config);
  const double distance = IonCrystal(base.trap).separation(base.pair);
  for (int L : ion_counts) {
    const IonPair pair = target_pair(L, position);
    TrapConfig trap = base.trap;
    trap.ion_count = L;
    trap.axial_frequency = trap_frequency_for_separation(distance, base.trap, L, pair);
    const IonCrystal crystal(trap);
    GateScheme scheme = design.scheme.with_target(pair);
    GateResult result =
        evaluate_scheme(scheme, crystal, problem.repetition_rate, problem.thermal(L));
    const double residual = max_residual(result);
    rows.push_back({L, trap.axial_frequency, crystal.separation(pair), pair, std::move(scheme),
                    std::move(result), residual});
  }
  return rows;
}

GateTimeSweep sweep_gate_time_distant(const DesignProblem& problem, const AnnealConfig& config,
                                      std::span<const double> gate_times) {
  if (gate_times.empty()) throw InvalidArgument("gate-time list is empty");
  if (problem.pair.second - problem.pair.first < 2)
    throw InvalidArgument("distant-pair sweep needs |i - j| >= 2");
  GateTimeSweep sweep;
  double best = -std::numeric_limits<double>::infinity();
  for (double t : gate_times) {
    if (!(t > 0.0)) throw InvalidArgument("gate times must be positive");
    DesignProblem point = problem;
    point.gate_time = t;
    point.objective = Objective::max_fidelity;
    GateTimeRow row{t, std::nullopt};
    try {
      row.design = optimize(point, config);
    } catch (const InfeasibleError&) {
    }
    if (row.design && row.design->result.fidelity > best) {
      best = row.design->result.fidelity;
      sweep.peak = static_cast<int>(sweep.rows.size());
    }
    sweep.rows.push_back(std::move(row));
  }
  return sweep;
}

GateScheme dilate_timings(const GateScheme& scheme, double shift) {
  const auto& groups = scheme.groups();
  const double centre = 0.5 * (groups.front().time + groups.back().time);
  std::vector<KickGroup> moved = groups;
  for (auto& g : moved) {
    if (g.time > centre) g.time += shift;
    if (g.time < centre) g.time -= shift;
  }
  return GateScheme(std::move(moved), scheme.family(), scheme.n(), scheme.cycles())
      .with_target(scheme.target_pair())
      .with_convention(scheme.convention());
}

std::vector<PerturbationRow> perturbation_sweep(const GateScheme& scheme,
                                                const IonCrystal& crystal,
                                                double repetition_rate,
                                                const ThermalState& thermal,
                                                std::span<const double> shifts) {
  const GateModel model(crystal, scheme.target_pair(), scheme.convention());
  std::vector<PerturbationRow> rows;
  for (double s : shifts) {
    // Shrinking shifts may push groups closer than the repetition period; the
    // kicks are still applied where they fall.
    const GateScheme moved = dilate_timings(scheme, s);
    std::vector<PulseEvent> events;
    if (!(repetition_rate < kInstantaneous)) {
      for (const auto& g : moved.groups()) events.push_back({g.time, g.count});
    } else {
      const double period = 1.0 / repetition_rate;
      for (const auto& g : moved.groups()) {
        const int size = std::abs(g.count);
        const int sign = g.count > 0 ? 1 : -1;
        for (int j = 0; j < size; ++j)
          events.push_back({g.time + (j - 0.5 * (size - 1)) * period, sign});
      }
      std::stable_sort(events.begin(), events.end(),
                       [](const PulseEvent& a, const PulseEvent& b) { return a.time < b.time; });
    }
    const GateResult result =
        evaluate_gate(PulseTrain(std::move(events), repetition_rate), model, thermal);
    rows.push_back({s, result.fidelity});
  }
  return rows;
}

}  // namespace fastgate
