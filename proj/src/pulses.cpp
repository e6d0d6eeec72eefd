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

#include "holoqutrit/pulses.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "holoqutrit/error.hpp"
#include "holoqutrit/operators.hpp"

namespace holo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

// Composite 8-point Gauss-Legendre on a smooth piece.
template <class F>
double integrate_smooth(F&& f, double a, double b, int panels) {
  if (b <= a) return 0.0;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    double s = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      s += kGlWeights[k] * (f(mid - half * kGlNodes[k]) + f(mid + half * kGlNodes[k]));
    }
    sum += half * s;
  }
  return sum;
}

double gaussian_edge(const TruncatedGaussian& g) {
  const double half = 0.5 * g.total;
  return std::exp(-half * half / (2.0 * g.sigma * g.sigma));
}

void check_range(const Envelope& env, double t) {
  const double d = env.duration();
  const double slack = 1e-12 * std::max(d, 1e-15);
  if (!(t >= -slack && t <= d + slack)) {
    throw Error(ErrorCode::OutOfRange, "envelope sampled outside [0, duration]");
  }
}

}  // namespace

std::string to_string(Transition t) {
  switch (t) {
    case Transition::ge: return "ge";
    case Transition::ef: return "ef";
    case Transition::two_photon: return "two_photon";
    case Transition::raman: return "raman";
  }
  return "unknown";
}

Envelope Envelope::gaussian(double sigma, double peak) {
  return gaussian(sigma, 4.0 * sigma, peak);
}

Envelope Envelope::gaussian(double sigma, double total, double peak) {
  if (!(sigma > 0.0) || !(total > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Gaussian needs sigma > 0 and total > 0");
  }
  return {TruncatedGaussian{sigma, total}, peak};
}

Envelope Envelope::square(double flat, double ramp, double peak) {
  if (flat < 0.0 || ramp < 0.0 || flat + ramp <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "square pulse needs flat, ramp >= 0 and a positive duration");
  }
  return {SquareWithRamps{flat, ramp}, peak};
}

Envelope Envelope::constant(double duration, double peak) {
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "constant pulse needs duration > 0");
  return {Constant{duration}, peak};
}

double Envelope::duration() const {
  return std::visit(Overloaded{
                        [](const TruncatedGaussian& g) { return g.total; },
                        [](const SquareWithRamps& s) { return s.flat + 2.0 * s.ramp; },
                        [](const Constant& c) { return c.duration; },
                    },
                    shape);
}

double sample(const Envelope& env, double t) {
  check_range(env, t);
  t = std::clamp(t, 0.0, env.duration());
  return std::visit(
      Overloaded{
          [&](const TruncatedGaussian& g) {
            const double edge = gaussian_edge(g);
            const double x = t - 0.5 * g.total;
            const double raw = std::exp(-x * x / (2.0 * g.sigma * g.sigma));
            return env.peak * (raw - edge) / (1.0 - edge);
          },
          [&](const SquareWithRamps& s) {
            if (s.ramp > 0.0 && t < s.ramp) {
              const double v = std::sin(0.5 * kPi * t / s.ramp);
              return env.peak * v * v;
            }
            const double fall = s.ramp + s.flat;
            if (s.ramp > 0.0 && t > fall) {
              const double v = std::sin(0.5 * kPi * (s.flat + 2.0 * s.ramp - t) / s.ramp);
              return env.peak * v * v;
            }
            return env.peak;
          },
          [&](const Constant&) { return env.peak; },
      },
      env.shape);
}

double sample_derivative(const Envelope& env, double t) {
  check_range(env, t);
  t = std::clamp(t, 0.0, env.duration());
  return std::visit(
      Overloaded{
          [&](const TruncatedGaussian& g) {
            const double edge = gaussian_edge(g);
            const double x = t - 0.5 * g.total;
            const double s2 = g.sigma * g.sigma;
            const double raw = std::exp(-x * x / (2.0 * s2));
            return env.peak * (-x / s2) * raw / (1.0 - edge);
          },
          [&](const SquareWithRamps& s) {
            // d/dt sin^2(a t) = a sin(2 a t)
            const double a = s.ramp > 0.0 ? 0.5 * kPi / s.ramp : 0.0;
            if (s.ramp > 0.0 && t < s.ramp) return env.peak * a * std::sin(2.0 * a * t);
            const double fall = s.ramp + s.flat;
            if (s.ramp > 0.0 && t > fall) {
              return -env.peak * a * std::sin(2.0 * a * (s.flat + 2.0 * s.ramp - t));
            }
            return 0.0;
          },
          [&](const Constant&) { return 0.0; },
      },
      env.shape);
}

double area(const Envelope& env) { return area(env, 0.0, env.duration()); }

double area(const Envelope& env, double a, double b) {
  const double d = env.duration();
  a = std::clamp(a, 0.0, d);
  b = std::clamp(b, 0.0, d);
  if (b <= a) return 0.0;
  std::vector<double> cuts = {a, b};
  if (const auto* s = std::get_if<SquareWithRamps>(&env.shape)) {
    for (double joint : {s->ramp, s->ramp + s->flat}) {
      if (joint > a && joint < b) cuts.push_back(joint);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double t) { return sample(env, t); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_smooth(f, cuts[i], cuts[i + 1], 64);
  }
  return total;
}

Envelope normalize_to_area(const Envelope& env, double target) {
  const double current = area(env);
  if (!(std::abs(current) > 0.0)) {
    throw Error(ErrorCode::ZeroArea, "cannot normalize an envelope with zero area");
  }
  Envelope out = env;
  out.peak = env.peak * target / current;
  return out;
}

double drag_quadrature(const Envelope& env, const DragSetting& drag, double t) {
  if (!drag.enabled) return 0.0;
  if (drag.anharmonicity == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "DRAG needs a nonzero anharmonicity");
  }
  return -drag.coefficient * sample_derivative(env, t) / drag.anharmonicity;
}

}  // namespace holo
