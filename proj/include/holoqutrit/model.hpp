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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "holoqutrit/operators.hpp"
#include "holoqutrit/pulses.hpp"

namespace holo {

using TimeDependentOperator = std::function<ComplexMatrix(double)>;

struct QutritDevice {
  double omega_ge = 0.0;  // rad/s
  double omega_ef = 0.0;  // rad/s
  std::string label;

  double anharmonicity() const { return omega_ef - omega_ge; }
};

/// Effective two-drive coupling of the cavity-assisted gate. g1 drives
/// |0g> <-> |0f> (two-photon), g2 drives |1g> <-> |0f> (Raman); both peak
/// values in rad/s and non-negative, phase is the relative drive phase.
struct CavityModel {
  double g1 = 0.0;
  double g2 = 0.0;
  double phase = 0.0;

  double coupling() const;
  /// theta with tan(theta/2) = g1 / g2.
  double mixing_angle() const;
};

/// Downward rates of the decay matrix and per-transition pure dephasing, all
/// in 1/s.
struct NoiseModel {
  double gamma_eg = 0.0;
  double gamma_fe = 0.0;
  double gamma_fg = 0.0;
  double dephasing_ge = 0.0;
  double dephasing_ef = 0.0;

  /// T1/T2* per transition (seconds); Gamma_fg = 0. Pure dephasing is
  /// 1/T2* minus the population-decay contribution to that coherence.
  static NoiseModel from_coherence_times(double t1_ge, double t1_ef, double t2_ge,
                                         double t2_ef);
  bool empty() const;
  void validate() const;
};

struct ControlError {
  double rabi_offset = 0.0;  // relative, > -1
  double detuning = 0.0;     // rad/s
};

struct CollapseOperator {
  ComplexMatrix op;  // unit-weight jump operator
  double rate = 0.0; // the Lindblad term uses sqrt(rate) * op
  std::string label;

  ComplexMatrix scaled() const;
};

/// Measured parameters of the two-qubit reference device ("paper-device" preset).
namespace paper_device {
QutritDevice qubit1();
QutritDevice qubit2();
NoiseModel qubit1_noise();
NoiseModel qubit2_noise();
/// Storage cavity T1 and T2* in seconds.
inline constexpr double kCavityT1 = 135e-6;
inline constexpr double kCavityT2 = 193e-6;
}  // namespace paper_device

/// Rotating-frame two-tone qutrit Hamiltonian at time t (3x3, rad/s).
/// ge segments couple |g><e|, ef segments |f><e|; the Rabi offset scales
/// both tones and the detuning enters as Delta |e><e| + 2 Delta |f><f|.
ComplexMatrix qutrit_drive_hamiltonian(const PulseSchedule& schedule, const ControlError& err,
                                       double t);

/// Bright and dark states for mixing angle theta and relative phase phi.
std::pair<QutritKet, QutritKet> bright_dark(double theta, double phi);

/// Effective cavity Hamiltonian over {|0g>, |1g>, |0f>}:
/// s(t) [g1 e^{i phi} |0g><0f| - g2 |1g><0f|] + h.c. with s the envelope
/// shape normalized to unit peak.
ComplexMatrix cavity_effective_hamiltonian(const CavityModel& m, double t, const Envelope& env);

/// Photon-number-selective drive over {|0g>,|0e>,|0f>,|1g>,|1e>,|1f>}:
/// the qutrit Hamiltonian on n = 0, zero on n = 1.
ComplexMatrix two_qubit_hamiltonian(const PulseSchedule& schedule, const ControlError& err,
                                    double t);

/// Relaxation jumps |g><e|, |e><f|, |g><f| and projector dephasing. Zero
/// rates are omitted.
std::vector<CollapseOperator> collapse_operators(const NoiseModel& noise);

/// Level dephasing rates (g, e, f) realizing the transition rates.
struct LevelDephasing {
  double g = 0.0;
  double e = 0.0;
  double f = 0.0;
};
LevelDephasing level_dephasing(const NoiseModel& noise);

}  // namespace holo
