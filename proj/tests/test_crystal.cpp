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
#include <numeric>

#include "fastgate/constants.hpp"
#include "fastgate/crystal.hpp"
#include "fastgate/errors.hpp"

using namespace fastgate;

namespace {

// u_m - sum_{n != m} sign(u_m - u_n) / (u_m - u_n)^2
double force_residual(std::span<const double> u) {
  double worst = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    double f = u[m];
    for (std::size_t n = 0; n < u.size(); ++n) {
      if (n == m) continue;
      const double d = u[m] - u[n];
      f -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
    worst = std::max(worst, std::abs(f));
  }
  return worst;
}

}  // namespace

TEST_CASE("two and three ion equilibria match the analytic roots") {
  const auto u1 = solve_equilibrium(1);
  REQUIRE(u1.size() == 1);
  CHECK(u1[0] == doctest::Approx(0.0));

  const auto u2 = solve_equilibrium(2);
  CHECK(u2[0] == doctest::Approx(-std::cbrt(0.25)).epsilon(1e-13));
  CHECK(u2[1] == doctest::Approx(std::cbrt(0.25)).epsilon(1e-13));

  const auto u3 = solve_equilibrium(3);
  CHECK(u3[0] == doctest::Approx(-std::cbrt(1.25)).epsilon(1e-13));
  CHECK(std::abs(u3[1]) < 1e-14);
  CHECK(u3[2] == doctest::Approx(std::cbrt(1.25)).epsilon(1e-13));
}

TEST_CASE("equilibria balance forces and stay centred") {
  for (int L = 1; L <= 30; ++L) {
    CAPTURE(L);
    const auto u = solve_equilibrium(L);
    CHECK(force_residual(u) < 1e-12);
    CHECK(std::abs(std::accumulate(u.begin(), u.end(), 0.0)) < 1e-12);
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] > u[i - 1]);
  }
}

TEST_CASE("mode eigenvalues for small crystals") {
  CHECK(normal_modes(solve_equilibrium(1)).eigenvalues[0] == doctest::Approx(1.0));
  const auto m2 = normal_modes(solve_equilibrium(2)).eigenvalues;
  CHECK(m2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2[1] == doctest::Approx(3.0).epsilon(1e-12));
  const auto m3 = normal_modes(solve_equilibrium(3)).eigenvalues;
  CHECK(m3[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m3[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m3[2] == doctest::Approx(29.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("mode vectors are complete, orthonormal and sign fixed") {
  for (int L : {1, 2, 3, 5, 8, 13, 20}) {
    CAPTURE(L);
    const IonCrystal c(TrapConfig::calcium40(L));
    CHECK(c.mode_eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < L; ++i) {
      CHECK(c.mode_vector(0, i) == doctest::Approx(1.0 / std::sqrt(double(L))).epsilon(1e-10));
      for (int j = 0; j < L; ++j) {
        double completeness = 0.0;
        double orthonormal = 0.0;
        for (int p = 0; p < L; ++p) completeness += c.mode_vector(p, i) * c.mode_vector(p, j);
        for (int k = 0; k < L; ++k) orthonormal += c.mode_vector(i, k) * c.mode_vector(j, k);
        CHECK(completeness == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
        CHECK(std::abs(orthonormal - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
    for (int p = 0; p < L; ++p) CHECK(c.mode_vector(p, 0) >= 0.0);
    for (int p = 1; p < L; ++p) CHECK(c.mode_frequencies()[p] >= c.mode_frequencies()[p - 1]);
  }
}

TEST_CASE("default two-ion crystal uses the calcium parameters") {
  const IonCrystal c(TrapConfig::calcium40(2));
  const double nu = c.config().axial_frequency;
  CHECK(nu == doctest::Approx(2.0 * std::numbers::pi * 1.2e6));
  CHECK(c.mode_frequencies()[1] == doctest::Approx(std::sqrt(3.0) * nu));
  for (int p = 0; p < 2; ++p) {
    const double expected = c.config().wavenumber *
                            std::sqrt(constants::kHbar / (2.0 * c.config().ion_mass *
                                                          c.mode_frequencies()[p]));
    CHECK(c.lamb_dicke()[p] == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(c.lamb_dicke()[0] == doctest::Approx(0.16).epsilon(0.05));
  CHECK(c.positions()[1] - c.positions()[0] ==
        doctest::Approx(2.0 * std::cbrt(0.25) * c.coulomb_length()).epsilon(1e-12));
}

TEST_CASE("metric separations scale as nu^(-2/3)") {
  for (int L : {2, 4, 7}) {
    TrapConfig a = TrapConfig::calcium40(L);
    TrapConfig b = a;
    b.axial_frequency *= 2.0;
    const IonCrystal ca(a);
    const IonCrystal cb(b);
    for (int i = 0; i < L; ++i)
      CHECK(cb.positions()[i] == doctest::Approx(ca.positions()[i] * std::pow(2.0, -2.0 / 3.0))
                                     .epsilon(1e-10));
  }
}

TEST_CASE("outer pairs spread and central pairs tighten as ions are added") {
  double outer = 0.0;
  double central = 1e9;
  for (int L = 2; L <= 20; ++L) {
    const auto u = solve_equilibrium(L);
    const double c = u[std::size_t(L / 2)] - u[std::size_t(L / 2 - 1)];
    if (L > 2) {
      CHECK(u.back() - u.front() > outer);
      CHECK(c < central);
    }
    outer = u.back() - u.front();
    central = c;
  }
}

TEST_CASE("radial ratio bound") {
  CHECK(min_radial_ratio(1) == doctest::Approx(0.63));
  CHECK(min_radial_ratio(10) == doctest::Approx(4.617).epsilon(1e-3));
  CHECK(min_radial_ratio(20) == doctest::Approx(8.41).epsilon(1e-3));
  CHECK_THROWS_AS(min_radial_ratio(0), InvalidArgument);
}

TEST_CASE("trap frequency for a target separation") {
  const TrapConfig base = TrapConfig::calcium40(2);
  const IonCrystal c(base);
  const double d = c.separation({0, 1});
  CHECK(trap_frequency_for_separation(d, base, 2, {0, 1}) ==
        doctest::Approx(base.axial_frequency).epsilon(1e-12));
  CHECK(trap_frequency_for_separation(d / 2, base, 2, {0, 1}) ==
        doctest::Approx(base.axial_frequency * std::pow(2.0, 1.5)).epsilon(1e-12));

  double previous = 1e300;
  for (int L = 4; L <= 12; ++L) {
    const double nu = trap_frequency_for_separation(d, base, L, {1, 2});
    TrapConfig t = TrapConfig::calcium40(L);
    t.axial_frequency = nu;
    CHECK(IonCrystal(t).separation({1, 2}) == doctest::Approx(d).epsilon(1e-9));
    CHECK(nu < previous);
    previous = nu;
  }
  CHECK_THROWS_AS(trap_frequency_for_separation(-1.0, base, 2, {0, 1}), InvalidArgument);
  CHECK_THROWS_AS(trap_frequency_for_separation(d, base, 2, {0, 2}), InvalidArgument);
}

TEST_CASE("five-ion crystal: local period of the third ion") {
  TrapConfig t = TrapConfig::calcium40(5);
  const IonCrystal c(t);
  // Period with neighbours clamped, 2 pi / (nu sqrt(H_33)).
  const auto u = c.scaled_positions();
  double h = 1.0;
  for (int n = 0; n < 5; ++n)
    if (n != 2) h += 2.0 / std::pow(std::abs(u[2] - u[std::size_t(n)]), 3);
  CHECK(local_oscillation_period(c, 2) ==
        doctest::Approx(2.0 * std::numbers::pi / (t.axial_frequency * std::sqrt(h))).epsilon(1e-12));
}

TEST_CASE("invalid traps are rejected") {
  TrapConfig t = TrapConfig::calcium40(2);
  t.axial_frequency = -1.0;
  CHECK_THROWS_AS(IonCrystal{t}, InvalidArgument);
  t = TrapConfig::calcium40(0);
  CHECK_THROWS_AS(IonCrystal{t}, InvalidArgument);
}

TEST_CASE("third ion of five oscillates locally in about 280 ns") {
  const IonCrystal c(TrapConfig::calcium40(5));
  CHECK(local_oscillation_period(c, 2) == doctest::Approx(280e-9).epsilon(0.02));
}
