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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fastgate {

/// Harmonic linear trap holding identical singly charged ions.
struct TrapConfig {
  double axial_frequency = 0.0;  ///< COM angular frequency nu, rad/s.
  double ion_mass = 0.0;         ///< kg.
  double wavenumber = 0.0;       ///< Kick laser k = 2 pi / lambda, 1/m.
  int ion_count = 0;

  /// Throws InvalidArgument when any field is out of range.
  void validate() const;

  /// 40Ca+ at nu = 2 pi x 1.2 MHz, lambda = 393 nm.
  static TrapConfig calcium40(int ion_count = 2);
};

/// Pair of addressed ions, zero-based, first < second.
struct IonPair {
  int first = 0;
  int second = 1;

  friend bool operator==(const IonPair&, const IonPair&) = default;
};

/// Coulomb length (e^2 / (4 pi eps0 M nu^2))^(1/3) in metres.
double coulomb_length(double axial_frequency, double ion_mass);

/// Dimensionless axial equilibrium of L ions, sorted ascending.
///
/// Solves u_m = sum_{n != m} sign(u_m - u_n) / (u_m - u_n)^2 by damped Newton
/// iteration on the dimensionless potential. Throws NumericalError with the
/// final residual when the iteration stalls.
std::vector<double> solve_equilibrium(int ion_count);

/// Axial Hessian of the dimensionless potential at positions u (row-major L x L).
std::vector<double> axial_hessian(std::span<const double> scaled_positions);

/// Eigenpairs of the axial Hessian, eigenvalues ascending.
struct NormalModes {
  std::vector<double> eigenvalues;  ///< mu_p; nu_p = nu sqrt(mu_p).
  std::vector<double> vectors;      ///< b_i^(p) stored at [p * L + i].
};

/// Normal modes at the given equilibrium; each vector has a nonnegative
/// component on ion 0.
NormalModes normal_modes(std::span<const double> scaled_positions);

/// Equilibrium structure, axial modes and Lamb-Dicke factors of a crystal.
/// Immutable once built.
class IonCrystal {
 public:
  explicit IonCrystal(const TrapConfig& config);

  const TrapConfig& config() const { return config_; }
  int size() const { return config_.ion_count; }
  double coulomb_length() const { return length_scale_; }

  std::span<const double> scaled_positions() const { return scaled_; }
  std::span<const double> positions() const { return metric_; }
  std::span<const double> mode_eigenvalues() const { return eigenvalues_; }
  std::span<const double> mode_frequencies() const { return frequencies_; }
  std::span<const double> lamb_dicke() const { return lamb_dicke_; }

  /// b_i^(p): participation of ion i in mode p.
  double mode_vector(int mode, int ion) const {
    return vectors_[static_cast<std::size_t>(mode) * static_cast<std::size_t>(size()) +
                    static_cast<std::size_t>(ion)];
  }

  /// Metric distance between two ions, m.
  double separation(IonPair pair) const;

 private:
  TrapConfig config_;
  double length_scale_ = 0.0;
  std::vector<double> scaled_;
  std::vector<double> metric_;
  std::vector<double> eigenvalues_;
  std::vector<double> vectors_;
  std::vector<double> frequencies_;
  std::vector<double> lamb_dicke_;
};

/// Lower bound 0.63 L^0.865 on omega_radial / omega_axial for a linear chain.
double min_radial_ratio(int ion_count);

/// Axial frequency that places the addressed pair a distance d apart.
///
/// Uses the nu^(-2/3) scaling of every metric separation; only the base
/// config's mass is read. Throws InvalidArgument for d <= 0 or a pair outside
/// the crystal.
double trap_frequency_for_separation(double separation, const TrapConfig& base,
                                     int ion_count, IonPair pair);

/// Period 2 pi / (nu sqrt(H_ii)) of one ion oscillating with its neighbours
/// clamped at equilibrium.
double local_oscillation_period(const IonCrystal& crystal, int ion);

}  // namespace fastgate
