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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holoqutrit/model.hpp"
#include "holoqutrit/operators.hpp"
#include "holoqutrit/pulses.hpp"

namespace holo {

/// Rotation by gamma about the axis set by (theta, phi).
struct HolonomicParams {
  double theta = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
};

/// Ideal gate on span{|g>,|f>}:
/// cos(gamma/2) I - i sin(gamma/2) [[cos th, sin th e^{i phi}], [sin th e^{-i phi}, -cos th]].
ComplexMatrix target_u1(const HolonomicParams& p);

/// [[cos th, sin th e^{i phi}], [sin th e^{-i phi}, -cos th]]; equals i * target_u1(th, pi, phi).
ComplexMatrix target_u2(double theta, double phi);

/// How the base envelope maps onto the two halves of the loop.
enum class EnvelopeSplit {
  single,    // one envelope across the whole gate, phase set switched at its midpoint
  per_half,  // one full envelope per half
};

struct GateSchedule {
  HolonomicParams params;
  PulseSchedule pulses;
  double switch_time = 0.0;

  double duration() const { return pulses.duration; }
};

/// 120 ns truncated Gaussian with sigma = 30 ns.
Envelope default_qubit_envelope();

/// Two-tone schedule with amplitudes Omega sin(theta/2) on ge and Omega cos(theta/2) on ef.
/// Half one uses phases (phi, pi), half two (phi + gamma - pi, gamma); Omega integrates to
/// pi/2 over each half.
GateSchedule synthesize_qubit_gate(const HolonomicParams& p,
                                   const Envelope& base = default_qubit_envelope(),
                                   EnvelopeSplit split = EnvelopeSplit::single,
                                   const DragSetting& drag = {});

/// Cavity-assisted gate over {|0g>, |1g>, |0f>}.
struct CavityGate {
  HolonomicParams params;
  CavityModel model;   // peak couplings g1 = g sin(theta/2), g2 = g cos(theta/2)
  Envelope envelope;   // square with ramps, peak = g
  double switch_time;  // second-half phase shift e^{i(gamma - pi)} applies from here on

  double duration() const { return envelope.duration(); }
};

/// Square pulse with `ramp` edges whose total coupling area is pi.
CavityGate synthesize_cavity_gate(double theta, double gamma, double phi, double g_peak,
                                  double ramp = 10e-9);

ComplexMatrix cavity_gate_hamiltonian(const CavityGate& gate, double t);

/// Unitary of the cavity gate on {|0g>, |1g>, |0f>}.
ComplexMatrix propagate_cavity_gate(const CavityGate& gate, int steps = 4096);

/// Resonant single-tone pulse on one transition. Rotation angle is twice the envelope area.
struct RotationPulse {
  Transition transition;
  double angle;
  double phase;
};

/// Sequential single-tone Gaussians; `rotations` are listed in time order.
GateSchedule dynamic_schedule(const std::vector<RotationPulse>& rotations,
                              const Envelope& base = default_qubit_envelope(),
                              const DragSetting& drag = {});

/// X_pi^ge, X_pi/2^ef, X_pi^ge in time order.
GateSchedule dynamic_hadamard_schedule(const Envelope& base = default_qubit_envelope(),
                                       const DragSetting& drag = {});
/// X_pi^ge, R_pi^ef(-pi/8), Y_pi^ef, X_pi^ge in time order.
GateSchedule dynamic_t_schedule(const Envelope& base = default_qubit_envelope(),
                                const DragSetting& drag = {});

/// Propagator of a qutrit schedule with optional control error.
ComplexMatrix propagate_schedule(const PulseSchedule& s, const ControlError& err = {},
                                 int steps = 4096);

/// |Tr(V^dagger P U P)|^2 / 4 over the {g,f} block.
double gf_gate_fidelity(const ComplexMatrix& u3, const ComplexMatrix& target2);

/// Leakage out of {g,f}: mean of |<e|U|g>|^2 + |<e|U|f>|^2 over the two inputs.
double gf_leakage(const ComplexMatrix& u3);

/// Canonical (theta, gamma, phi) with target_u1 equal to u up to global phase:
/// gamma in [0, pi], theta <= pi/2 when gamma = pi, values snapped to multiples of pi/4.
HolonomicParams params_from_unitary(const ComplexMatrix& u2);

/// The 24-element single-qubit Clifford group as holonomic parameters with its
/// multiplication table (mod global phase). Element 0 is the identity.
class CliffordGroup {
 public:
  static const CliffordGroup& instance();

  std::size_t size() const { return params_.size(); }
  const HolonomicParams& params(std::size_t i) const { return params_[i]; }
  const ComplexMatrix& unitary(std::size_t i) const { return unitaries_[i]; }
  /// Index of unitary(a) * unitary(b).
  std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  /// Index of the element equal to u up to phase, if any.
  std::optional<std::size_t> find(const ComplexMatrix& u2, double tol = 1e-8) const;

 private:
  CliffordGroup();

  std::vector<HolonomicParams> params_;
  std::vector<ComplexMatrix> unitaries_;
  std::vector<std::array<std::size_t, 24>> table_;
  std::vector<std::size_t> inverse_;
};

std::vector<HolonomicParams> clifford_table();

/// Named single-qutrit gates: I, X_pi, X_pi_2, Y_pi, Z_pi, H, T.
HolonomicParams named_qubit_gate(std::string_view name);
/// Named cavity gates (theta, phi) of U2: X_pi, Y_pi, H1, H2, I (identity is theta = 0, gamma = 0).
HolonomicParams named_cavity_gate(std::string_view name);

}  // namespace holo
