// Copyright 2026 The holoqutrit Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "holoqutrit/error.hpp"
#include "holoqutrit/operators.hpp"
#include "holoqutrit/pulses.hpp"

using namespace holo;

namespace {

// Composite Simpson with a million panels.
double simpson_area(const Envelope& env) {
  const int n = 1'000'000;
  const double d = env.duration();
  const double h = d / n;
  double s = sample(env, 0.0) + sample(env, d);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * sample(env, i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("sampling") {
  const Envelope c = Envelope::constant(50e-9, 3.0e7);
  CHECK(sample(c, 17e-9) == 3.0e7);
  const Envelope sq = Envelope::square(100e-9, 10e-9, 2.0);
  CHECK(sample(sq, 5e-9) == doctest::Approx(1.0).epsilon(1e-14));
  const Envelope g = Envelope::gaussian(30e-9, 5.0);
  CHECK(g.duration() == doctest::Approx(120e-9));
  CHECK(sample(g, 60e-9) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(std::abs(sample(g, 0.0)) < 1e-14);
  CHECK(std::abs(sample(g, 120e-9)) < 1e-14);
  CHECK_THROWS_AS(sample(g, 121e-9), Error);
  CHECK_THROWS_AS(sample(g, -1e-9), Error);
}

TEST_CASE("square pulse is continuous at the joints") {
  const Envelope sq = Envelope::square(100e-9, 10e-9, 2.0);
  for (double joint : {10e-9, 110e-9}) {
    const double eps = 1e-21;
    CHECK(std::abs(sample(sq, joint - eps) - sample(sq, joint + eps)) < 1e-12);
  }
}

TEST_CASE("area") {
  CHECK(area(Envelope::constant(2.0, 1.5)) == doctest::Approx(3.0).epsilon(1e-12));
  const Envelope sq = Envelope::square(700e-9, 10e-9, 4.0e6);
  CHECK(area(sq) == doctest::Approx(4.0e6 * 710e-9).epsilon(1e-12));
  const Envelope g = Envelope::gaussian(30e-9, 1.0e8);
  CHECK(area(g) == doctest::Approx(simpson_area(g)).epsilon(1e-9));
  // symmetric envelope: each half carries half of the area
  CHECK(area(g, 0.0, 60e-9) == doctest::Approx(0.5 * area(g)).epsilon(1e-12));
}

TEST_CASE("normalize_to_area") {
  const Envelope c = normalize_to_area(Envelope::constant(kPi, 1.0), kPi);
  CHECK(c.peak == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(normalize_to_area(Envelope::constant(1.0, 1.0), kPi / 2).peak ==
        doctest::Approx(kPi / 2).epsilon(1e-14));
  const Envelope g = normalize_to_area(Envelope::gaussian(30e-9, 1.0), kPi / 2);
  CHECK(std::abs(area(g) - kPi / 2) < 1e-9);
  CHECK_THROWS_AS(normalize_to_area(Envelope::constant(1.0, 0.0), 1.0), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int i = 0; i < 50; ++i) {
    Envelope e = (i % 3 == 0)   ? Envelope::gaussian(u(rng) * 40e-9, u(rng) * 1e8)
                 : (i % 3 == 1) ? Envelope::square(u(rng) * 1e-6, u(rng) * 20e-9, u(rng) * 1e7)
                                : Envelope::constant(u(rng) * 1e-6, u(rng) * 1e7);
    const double target = u(rng) * 4.0;
    CHECK(std::abs(area(normalize_to_area(e, target)) - target) < 1e-9);
  }
}

TEST_CASE("DRAG quadrature") {
  DragSetting drag{true, 1.0, -2.0 * kPi * 254e6};
  const Envelope c = Envelope::constant(100e-9, 1e7);
  CHECK(drag_quadrature(c, drag, 50e-9) == 0.0);
  const Envelope g = Envelope::gaussian(30e-9, 1e8);
  CHECK(std::abs(drag_quadrature(g, drag, 60e-9)) < 1e-12);
  const double t = 30e-9;
  const double h = 1e-13;
  const double fd = (sample(g, t + h) - sample(g, t - h)) / (2.0 * h);
  CHECK(drag_quadrature(g, drag, t) == doctest::Approx(-fd / drag.anharmonicity).epsilon(1e-6));
  // antisymmetric derivative integrates to zero over a symmetric pulse
  double s = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) s += drag_quadrature(g, drag, (i + 0.5) * 120e-9 / n);
  CHECK(std::abs(s * 120e-9 / n) < 1e-12);
  CHECK(drag_quadrature(g, DragSetting{}, 30e-9) == 0.0);
}
