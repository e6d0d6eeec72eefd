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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holo {

/// Ordered (time in seconds, value) samples.
struct Trace {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;

  Trace() = default;
  Trace(std::vector<double> t, std::vector<double> v, std::string label = {});
  std::size_t size() const { return times.size(); }
  /// Strictly increasing times and at least 8 samples.
  void validate() const;
};

/// Reads `time_s,value` rows (header optional). A nonnegative `detrend_degree`
/// subtracts a least-squares polynomial of that degree and restores the mean.
Trace read_trace_csv(std::istream& in, const std::string& label = {}, int detrend_degree = -1);

/// Spectral peaks of the mean-removed trace, strongest first, in Hz. Equal
/// magnitudes order by lower frequency.
std::vector<double> spectral_peaks(const Trace& trace, std::size_t count);

struct RateFit {
  double gamma_eg = 0.0;  // 1/s
  double gamma_fe = 0.0;
  double gamma_fg = 0.0;
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();  // (P_g, P_e, P_f) at the first sample
  double ssr = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // rates, 1/s^2
};

/// exp(Gamma t) p0 with only downward rates.
Eigen::Vector3d rate_equation_populations(double gamma_eg, double gamma_fe, double gamma_fg,
                                          const Eigen::Vector3d& p0, double t);

/// Global fit of the three population traces (aligned times, decay from |f>).
RateFit fit_rate_equation(const Trace& pg, const Trace& pe, const Trace& pf);

/// y0 + exp(-t/T2) [A1 cos(2 pi f1 t + phi1) + A2 cos(2 pi f2 t + phi2)].
struct RamseyFit {
  double y0 = 0.0;
  double t2 = 0.0;          // seconds, infinite for no decay
  double decay_rate = 0.0;  // 1/T2
  double f1 = 0.0;          // Hz
  double f2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  bool single_tone = false;  // second spectral peak below the noise floor: A2 = 0
  double ssr = 0.0;
  Eigen::MatrixXd covariance;  // (y0, 1/T2, f1, f2, c1, s1, c2, s2) or the single-tone subset
};

double ramsey_model(const RamseyFit& fit, double t);
RamseyFit fit_ramsey(const Trace& trace);

/// y0 + exp(-r t) [a cos(Omega t) + b sin(Omega t)].
struct RabiFit {
  double omega = 0.0;  // rad/s
  double amplitude = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double decay_rate = 0.0;  // 1/s
  double ssr = 0.0;
  Eigen::MatrixXd covariance;  // (y0, r, Omega, a, b)
};

RabiFit fit_rabi(const Trace& trace);

struct ChevronPoint {
  double detuning = 0.0;  // drive offset, rad/s
  double omega_r = 0.0;   // rad/s, > 0
};

struct ChevronFit {
  double center = 0.0;    // resonance offset omega_p, rad/s
  double coupling = 0.0;  // g, rad/s
  double ssr = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
};

/// sqrt((detuning - center)^2 + (2 g)^2).
double chevron_rate(double detuning, double center, double coupling);
ChevronFit fit_chevron(const std::vector<ChevronPoint>& points);

std::string to_json(const RateFit& fit);
std::string to_json(const RamseyFit& fit);
std::string to_json(const RabiFit& fit);
std::string to_json(const ChevronFit& fit);

}  // namespace holo
