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

#include <cmath>
#include <random>
#include <sstream>

#include "holoqutrit/calibration.hpp"
#include "holoqutrit/error.hpp"
#include "holoqutrit/model.hpp"
#include "holoqutrit/operators.hpp"

using namespace holo;

namespace {

constexpr double kTwoPiHz = 2.0 * kPi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

// closed-form cascade f -> e -> g with no direct f -> g decay
Eigen::Vector3d cascade(double geg, double gfe, double t) {
  const double pf = std::exp(-gfe * t);
  const double pe = gfe / (geg - gfe) * (std::exp(-gfe * t) - std::exp(-geg * t));
  return {1.0 - pf - pe, pe, pf};
}

Trace sampled(const std::vector<double>& t, const std::function<double(double)>& f) {
  std::vector<double> v;
  for (double x : t) v.push_back(f(x));
  return Trace(t, v);
}

}  // namespace

TEST_CASE("trace invariants and CSV import") {
  CHECK_THROWS_AS(Trace({0, 1, 2}, {0, 0, 0}), Error);
  CHECK_THROWS_AS(Trace({0, 1, 2, 3, 4, 5, 6, 6}, std::vector<double>(8, 0.0)), Error);
  std::istringstream csv("time_s,value\n0,1\n1,3\n2,5\n3,7\n4,9\n5,11\n6,13\n7,15\n");
  const Trace raw = read_trace_csv(csv);
  CHECK(raw.size() == 8);
  CHECK(raw.values[3] == 7.0);
  std::istringstream csv2("time_s,value\n0,1\n1,3\n2,5\n3,7\n4,9\n5,11\n6,13\n7,15\n");
  const Trace flat = read_trace_csv(csv2, "lin", 1);
  for (double v : flat.values) CHECK(v == doctest::Approx(8.0));
  std::istringstream bad("time_s,value\n0,1\n1,x\n");
  CHECK_THROWS_AS(read_trace_csv(bad), Error);
}

TEST_CASE("rate equation model matches the closed-form cascade") {
  const double geg = 1.0 / 45.6e-6, gfe = 1.0 / 20.3e-6;
  for (double t : {0.0, 5e-6, 30e-6, 100e-6}) {
    const Eigen::Vector3d a = rate_equation_populations(geg, gfe, 0.0, {0, 0, 1}, t);
    const Eigen::Vector3d b = cascade(geg, gfe, t);
    CHECK((a - b).norm() < 1e-12);
  }
}

TEST_CASE("rate equation fit recovers device rates") {
  const double geg = 1.0 / 45.6e-6, gfe = 1.0 / 20.3e-6;
  const std::vector<double> t = linspace(0.0, 150e-6, 76);
  auto comp = [&](int k) { return sampled(t, [&](double x) { return cascade(geg, gfe, x)(k); }); };
  const RateFit fit = fit_rate_equation(comp(0), comp(1), comp(2));
  CHECK(std::abs(fit.gamma_eg / geg - 1.0) < 0.02);
  CHECK(std::abs(fit.gamma_fe / gfe - 1.0) < 0.02);
  CHECK(fit.gamma_fg < 1e-3 * fit.gamma_fe);
  const Eigen::Vector3d tail =
      rate_equation_populations(fit.gamma_eg, fit.gamma_fe, fit.gamma_fg, fit.p0, 5e-3);
  CHECK(tail(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(to_json(fit).find("covariance") != std::string::npos);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::normal_distribution<double> noise(0.0, 2e-3);
  for (int draw = 0; draw < 10; ++draw) {
    const double a = geg * u(rng), b = gfe * u(rng), c = 0.2 * gfe * u(rng);
    std::vector<Trace> tr;
    for (int k = 0; k < 3; ++k) {
      tr.push_back(sampled(t, [&](double x) {
        return rate_equation_populations(a, b, c, {0, 0, 1}, x)(k) + noise(rng);
      }));
    }
    const RateFit f = fit_rate_equation(tr[0], tr[1], tr[2]);
    CHECK(std::abs(f.gamma_eg / a - 1.0) < 0.02);
    CHECK(std::abs(f.gamma_fe / b - 1.0) < 0.02);
  }
}

TEST_CASE("spectral peaks order by magnitude") {
  const std::vector<double> t = linspace(0.0, 20e-6, 401);
  const Trace tr = sampled(t, [](double x) {
    return 0.2 * std::cos(kTwoPiHz * 0.3e6 * x) + 0.5 * std::cos(kTwoPiHz * 0.8e6 * x);
  });
  const std::vector<double> p = spectral_peaks(tr, 2);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(0.8e6).epsilon(0.01));
  CHECK(p[1] == doctest::Approx(0.3e6).epsilon(0.01));
}

TEST_CASE("Ramsey fits") {
  const std::vector<double> t = linspace(0.0, 50e-6, 501);
  SUBCASE("single tone falls back to A2 = 0") {
    const Trace tr = sampled(t, [](double x) {
      return 0.5 + 0.45 * std::exp(-x / 24.4e-6) * std::cos(kTwoPiHz * 0.25e6 * x + 0.3);
    });
    const RamseyFit f = fit_ramsey(tr);
    CHECK(f.single_tone);
    CHECK(f.a2 == 0.0);
    CHECK(std::abs(f.t2 / 24.4e-6 - 1.0) < 0.02);
    CHECK(f.f1 == doctest::Approx(0.25e6).epsilon(1e-6));
  }
  SUBCASE("double tone") {
    const Trace tr = sampled(t, [](double x) {
      return 0.5 + std::exp(-x / 24.4e-6) * (0.3 * std::cos(kTwoPiHz * 0.21e6 * x + 0.4) +
                                              0.15 * std::cos(kTwoPiHz * 0.57e6 * x - 1.0));
    });
    const RamseyFit f = fit_ramsey(tr);
    CHECK_FALSE(f.single_tone);
    CHECK(std::abs(f.t2 / 24.4e-6 - 1.0) < 0.02);
    CHECK(f.f1 == doctest::Approx(0.21e6).epsilon(1e-6));
    CHECK(f.f2 == doctest::Approx(0.57e6).epsilon(1e-6));
    CHECK(f.a2 == doctest::Approx(0.15).epsilon(1e-5));
    CHECK(ramsey_model(f, 13e-6) == doctest::Approx(tr.values[130]).epsilon(1e-8));
  }
  SUBCASE("no decay") {
    const Trace tr = sampled(t, [](double x) { return 0.5 + 0.4 * std::cos(kTwoPiHz * 0.3e6 * x); });
    const RamseyFit f = fit_ramsey(tr);
    CHECK(f.decay_rate < 1e-3 * f.f1);
  }
  SUBCASE("randomized noisy draws") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 2e-3);
    for (int draw = 0; draw < 10; ++draw) {
      const double t2 = 24.4e-6 * (0.7 + 0.6 * u(rng));
      const double f1 = 0.1e6 + 0.3e6 * u(rng), f2 = f1 + 0.15e6 + 0.4e6 * u(rng);
      const double p1 = kTwoPiHz * u(rng), p2 = kTwoPiHz * u(rng);
      const Trace tr = sampled(t, [&](double x) {
        return 0.5 + std::exp(-x / t2) * (0.3 * std::cos(kTwoPiHz * f1 * x + p1) +
                                          0.2 * std::cos(kTwoPiHz * f2 * x + p2)) + noise(rng);
      });
      const RamseyFit f = fit_ramsey(tr);
      CHECK(std::abs(f.t2 / t2 - 1.0) < 0.02);
    }
  }
}

TEST_CASE("Rabi fits") {
  const std::vector<double> t = linspace(0.0, 4e-6, 201);
  const double w = kTwoPiHz * 1.3e6;
  const RabiFit exact = fit_rabi(sampled(t, [&](double x) { return std::cos(w * x); }));
  CHECK(std::abs(exact.omega / w - 1.0) < 1e-6);

  const RabiFit damped = fit_rabi(sampled(t, [&](double x) {
    return 0.5 + 0.5 * std::exp(-x / 15e-6) * std::cos(w * x);
  }));
  CHECK(std::abs(damped.omega / w - 1.0) < 0.01);

  // |0f> <-> |1g> exchange under the Raman coupling alone
  const double g = kTwoPiHz * 0.845e6;
  CavityModel model;
  model.g2 = g;
  const Envelope env = Envelope::constant(3e-6, g);
  const std::vector<double> ts = linspace(0.0, 3e-6, 151);
  const ComplexMatrix h = cavity_effective_hamiltonian(model, 1e-6, env);
  const Trace osc = sampled(ts, [&](double x) { return std::norm(matrix_exp(h, x)(2, 2)); });
  const RabiFit cav = fit_rabi(osc);
  CHECK(std::abs(cav.omega / (2.0 * g) - 1.0) < 0.01);

  const std::vector<double> short_t = linspace(0.0, 0.5e-6, 50);
  CHECK_THROWS_AS(fit_rabi(sampled(short_t, [&](double x) { return std::cos(w * x); })), Error);
  CHECK(to_json(exact).find("omega_rad_per_s") != std::string::npos);
}

TEST_CASE("chevron fits") {
  const double g = kTwoPiHz * 0.845e6, center = kTwoPiHz * 0.12e6;
  CHECK(chevron_rate(center, center, g) == 2.0 * g);
  CHECK(chevron_rate(center + 40.0 * g, center, g) / (40.0 * g) == doctest::Approx(1.0).epsilon(0.01));
  std::vector<ChevronPoint> pts;
  for (double d : linspace(-kTwoPiHz * 4e6, kTwoPiHz * 4e6, 17)) pts.push_back({d, chevron_rate(d, center, g)});
  const ChevronFit f = fit_chevron(pts);
  CHECK(std::abs(f.coupling / g - 1.0) < 0.01);
  CHECK(std::abs(f.center - center) < 0.01 * g);

  std::vector<ChevronPoint> one_side;
  for (const auto& p : pts) {
    if (p.detuning > 0.0) one_side.push_back(p);
  }
  CHECK_THROWS_AS(fit_chevron(one_side), Error);
  CHECK_THROWS_AS(fit_chevron({pts[0], pts[1], pts[16]}), Error);
  pts[3].omega_r = 0.0;
  CHECK_THROWS_AS(fit_chevron(pts), Error);
}
