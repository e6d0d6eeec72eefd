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

#include <string>
#include <variant>
#include <vector>

namespace holo {

/// Truncated Gaussian of width `total` centered at total/2. The edge value is
/// subtracted and the result rescaled so the pulse starts and ends at zero
/// while still reaching `peak` at the center.
struct TruncatedGaussian {
  double sigma = 30e-9;
  double total = 120e-9;
};

/// Flat top with sine-squared rising and falling edges of length `ramp` each.
struct SquareWithRamps {
  double flat = 0.0;
  double ramp = 10e-9;
};

struct Constant {
  double duration = 0.0;
};

struct Envelope {
  std::variant<TruncatedGaussian, SquareWithRamps, Constant> shape;
  double peak = 0.0;  // rad/s

  static Envelope gaussian(double sigma, double peak);
  static Envelope gaussian(double sigma, double total, double peak);
  static Envelope square(double flat, double ramp, double peak);
  static Envelope constant(double duration, double peak);

  double duration() const;
};

struct DragSetting {
  bool enabled = false;
  double coefficient = 1.0;
  double anharmonicity = 0.0;  // rad/s
};

enum class Transition { ge, ef, two_photon, raman };

std::string to_string(Transition t);

/// One tone on one transition. The segment occupies [start, start + length)
/// and reads the envelope at window_offset + (t - start); `weight` scales the
/// amplitude (the bright-state mixing factor of a two-tone gate).
struct PulseSegment {
  Envelope envelope;
  Transition transition = Transition::ge;
  double phase = 0.0;
  double start = 0.0;
  double weight = 1.0;
  double window_offset = 0.0;
  double length = -1.0;  // negative: the full envelope

  double window_length() const { return length < 0.0 ? envelope.duration() : length; }
  double end() const { return start + window_length(); }
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  double duration = 0.0;
  DragSetting drag;
};

double sample(const Envelope& env, double t);
double sample_derivative(const Envelope& env, double t);

/// Integral of the envelope over [0, duration].
double area(const Envelope& env);
/// Integral of the envelope over [a, b] within its support.
double area(const Envelope& env, double a, double b);

Envelope normalize_to_area(const Envelope& env, double target);

/// -coefficient * d/dt sample(env, t) / anharmonicity.
double drag_quadrature(const Envelope& env, const DragSetting& drag, double t);

}  // namespace holo
