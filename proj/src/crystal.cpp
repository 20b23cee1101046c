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

#include "fastgate/crystal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fastgate/constants.hpp"
#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

constexpr double kResidualTolerance = 1e-13;
constexpr int kMaxNewtonIterations = 200;

double potential(std::span<const double> u) {
  double v = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    v += 0.5 * u[m] * u[m];
    for (std::size_t n = m + 1; n < u.size(); ++n) v += 1.0 / std::abs(u[m] - u[n]);
  }
  return v;
}

Eigen::VectorXd gradient(std::span<const double> u) {
  const auto count = static_cast<Eigen::Index>(u.size());
  Eigen::VectorXd g(count);
  for (Eigen::Index m = 0; m < count; ++m) {
    double coulomb = 0.0;
    for (Eigen::Index n = 0; n < count; ++n) {
      if (n == m) continue;
      const double d = u[m] - u[n];
      coulomb += std::copysign(1.0 / (d * d), d);
    }
    g[m] = u[m] - coulomb;
  }
  return g;
}

Eigen::MatrixXd hessian_matrix(std::span<const double> u) {
  const auto count = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(count, count);
  for (Eigen::Index m = 0; m < count; ++m) {
    for (Eigen::Index n = 0; n < count; ++n) {
      if (n == m) continue;
      const double w = 2.0 / std::pow(std::abs(u[m] - u[n]), 3);
      h(m, n) = -w;
      h(m, m) += w;
    }
  }
  return h;
}

bool strictly_increasing(std::span<const double> u) {
  return std::adjacent_find(u.begin(), u.end(), std::greater_equal<>()) == u.end();
}

}  // namespace

void TrapConfig::validate() const {
  if (!(axial_frequency > 0.0) || !std::isfinite(axial_frequency))
    throw InvalidArgument("trap.axial_frequency must be positive");
  if (!(ion_mass > 0.0) || !std::isfinite(ion_mass))
    throw InvalidArgument("trap.ion_mass must be positive");
  if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
    throw InvalidArgument("trap.wavenumber must be positive");
  if (ion_count < 1) throw InvalidArgument("trap.ion_count must be at least 1");
}

TrapConfig TrapConfig::calcium40(int ion_count) {
  return TrapConfig{constants::kReferenceAxialFrequency,
                    constants::kCalciumMassAmu * constants::kAtomicMassUnit,
                    constants::kTwoPi / constants::kCalciumWavelength, ion_count};
}

double coulomb_length(double axial_frequency, double ion_mass) {
  return std::cbrt(constants::kCoulombConstantE2 /
                   (ion_mass * axial_frequency * axial_frequency));
}

std::vector<double> solve_equilibrium(int ion_count) {
  if (ion_count < 1) throw InvalidArgument("ion_count must be at least 1");
  const auto count = static_cast<std::size_t>(ion_count);
  std::vector<double> u(count, 0.0);
  if (count == 1) return u;

  // Uniform guess at roughly the central spacing of a long chain.
  const double spacing = 2.018 / std::pow(static_cast<double>(count), 0.559);
  for (std::size_t i = 0; i < count; ++i)
    u[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(count - 1)) * spacing;

  double residual = gradient(u).lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < kMaxNewtonIterations && residual > kResidualTolerance; ++iter) {
    const Eigen::VectorXd g = gradient(u);
    // Hessian is identity plus a weighted graph Laplacian, hence positive definite.
    const Eigen::VectorXd step = hessian_matrix(u).ldlt().solve(-g);
    const double v0 = potential(u);
    double damping = 1.0;
    std::vector<double> trial(count);
    for (;;) {
      for (std::size_t i = 0; i < count; ++i)
        trial[i] = u[i] + damping * step[static_cast<Eigen::Index>(i)];
      if (strictly_increasing(trial) && potential(trial) <= v0 + 1e-15 * std::abs(v0)) break;
      damping *= 0.5;
      if (damping < 1e-12) break;
    }
    if (damping < 1e-12) break;
    const double centre = std::accumulate(trial.begin(), trial.end(), 0.0) /
                          static_cast<double>(count);
    for (auto& x : trial) x -= centre;
    u = trial;
    residual = gradient(u).lpNorm<Eigen::Infinity>();
  }
  if (!(residual <= 1e-12)) {
    std::ostringstream msg;
    msg << "equilibrium solve for " << ion_count << " ions stalled at residual " << residual;
    throw NumericalError(msg.str());
  }
  // Exact mirror symmetry of the chain.
  for (std::size_t i = 0; i < count / 2; ++i) {
    const double a = 0.5 * (u[count - 1 - i] - u[i]);
    u[i] = -a;
    u[count - 1 - i] = a;
  }
  if (count % 2 == 1) u[count / 2] = 0.0;
  return u;
}

std::vector<double> axial_hessian(std::span<const double> scaled_positions) {
  const Eigen::MatrixXd h = hessian_matrix(scaled_positions);
  std::vector<double> out(static_cast<std::size_t>(h.size()));
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      out[static_cast<std::size_t>(r * h.cols() + c)] = h(r, c);
  return out;
}

NormalModes normal_modes(std::span<const double> scaled_positions) {
  const Eigen::MatrixXd h = hessian_matrix(scaled_positions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("axial Hessian eigen-decomposition failed");

  const auto count = static_cast<std::size_t>(h.rows());
  NormalModes modes;
  modes.eigenvalues.resize(count);
  modes.vectors.resize(count * count);
  for (std::size_t p = 0; p < count; ++p) {
    const auto col = static_cast<Eigen::Index>(p);
    modes.eigenvalues[p] = solver.eigenvalues()[col];
    Eigen::VectorXd b = solver.eigenvectors().col(col);
    // Sign convention: first non-negligible component positive.
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      if (std::abs(b[i]) > 1e-12) {
        if (b[i] < 0.0) b = -b;
        break;
      }
    }
    for (std::size_t i = 0; i < count; ++i)
      modes.vectors[p * count + i] = b[static_cast<Eigen::Index>(i)];
  }
  return modes;
}

IonCrystal::IonCrystal(const TrapConfig& config) : config_(config) {
  config_.validate();
  length_scale_ = fastgate::coulomb_length(config_.axial_frequency, config_.ion_mass);
  scaled_ = solve_equilibrium(config_.ion_count);
  metric_.resize(scaled_.size());
  std::transform(scaled_.begin(), scaled_.end(), metric_.begin(),
                 [this](double u) { return u * length_scale_; });

  NormalModes modes = normal_modes(scaled_);
  eigenvalues_ = std::move(modes.eigenvalues);
  vectors_ = std::move(modes.vectors);
  frequencies_.resize(eigenvalues_.size());
  lamb_dicke_.resize(eigenvalues_.size());
  for (std::size_t p = 0; p < eigenvalues_.size(); ++p) {
    frequencies_[p] = config_.axial_frequency * std::sqrt(eigenvalues_[p]);
    lamb_dicke_[p] = config_.wavenumber *
                     std::sqrt(constants::kHbar / (2.0 * config_.ion_mass * frequencies_[p]));
  }
}

double IonCrystal::separation(IonPair pair) const {
  if (pair.first < 0 || pair.second >= size() || pair.first >= pair.second)
    throw InvalidArgument("ion pair outside crystal");
  return metric_[static_cast<std::size_t>(pair.second)] -
         metric_[static_cast<std::size_t>(pair.first)];
}

double min_radial_ratio(int ion_count) {
  if (ion_count < 1) throw InvalidArgument("ion_count must be at least 1");
  return 0.63 * std::pow(static_cast<double>(ion_count), 0.865);
}

double trap_frequency_for_separation(double separation, const TrapConfig& base,
                                     int ion_count, IonPair pair) {
  if (!(separation > 0.0) || !std::isfinite(separation))
    throw InvalidArgument("target separation must be positive");
  if (!(base.ion_mass > 0.0)) throw InvalidArgument("trap.ion_mass must be positive");
  if (pair.first < 0 || pair.first >= pair.second || pair.second >= ion_count)
    throw InvalidArgument("ion pair outside crystal");
  const auto u = solve_equilibrium(ion_count);
  const double scaled_gap = u[static_cast<std::size_t>(pair.second)] -
                            u[static_cast<std::size_t>(pair.first)];
  const double length = separation / scaled_gap;
  const double nu =
      std::sqrt(constants::kCoulombConstantE2 / (base.ion_mass * length * length * length));
  if (!std::isfinite(nu) || nu <= 0.0)
    throw InvalidArgument("separation not reachable by any axial frequency");
  return nu;
}

double local_oscillation_period(const IonCrystal& crystal, int ion) {
  if (ion < 0 || ion >= crystal.size()) throw InvalidArgument("ion index outside crystal");
  const auto h = axial_hessian(crystal.scaled_positions());
  const auto i = static_cast<std::size_t>(ion);
  const double curvature = h[i * static_cast<std::size_t>(crystal.size()) + i];
  return constants::kTwoPi / (crystal.config().axial_frequency * std::sqrt(curvature));
}

}  // namespace fastgate
