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

#include "holoqutrit/holonomic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "holoqutrit/error.hpp"
#include "holoqutrit/evolution.hpp"

namespace holo {

namespace {

double snap(double x) {
  const double q = kPi / 4.0;
  const double r = std::round(x / q) * q;
  return std::abs(x - r) < 1e-9 ? r : x;
}

ComplexMatrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

ComplexMatrix target_u1(const HolonomicParams& p) {
  const double c = std::cos(0.5 * p.gamma);
  const double s = std::sin(0.5 * p.gamma);
  const Complex off = std::sin(p.theta) * std::polar(1.0, p.phi);
  return two_by_two(c - kI * s * std::cos(p.theta), -kI * s * off, -kI * s * std::conj(off),
                    c + kI * s * std::cos(p.theta));
}

ComplexMatrix target_u2(double theta, double phi) {
  const Complex off = std::sin(theta) * std::polar(1.0, phi);
  return two_by_two(std::cos(theta), off, std::conj(off), -std::cos(theta));
}

Envelope default_qubit_envelope() { return Envelope::gaussian(30e-9, 120e-9, 1.0); }

GateSchedule synthesize_qubit_gate(const HolonomicParams& p, const Envelope& base,
                                   EnvelopeSplit split, const DragSetting& drag) {
  if (!(p.theta >= 0.0 && p.theta <= kPi)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, pi]");
  }
  const double w_ge = std::sin(0.5 * p.theta);
  const double w_ef = std::cos(0.5 * p.theta);
  const double phases[2][2] = {{p.phi, kPi}, {p.phi + p.gamma - kPi, p.gamma}};

  GateSchedule g;
  g.params = p;
  g.pulses.drag = drag;
  const double d = base.duration();
  if (split == EnvelopeSplit::single) {
    const Envelope env = normalize_to_area(base, kPi);
    g.switch_time = 0.5 * d;
    g.pulses.duration = d;
    for (int half = 0; half < 2; ++half) {
      const double start = half * g.switch_time;
      g.pulses.segments.push_back(
          {env, Transition::ge, phases[half][0], start, w_ge, start, g.switch_time});
      g.pulses.segments.push_back(
          {env, Transition::ef, phases[half][1], start, w_ef, start, g.switch_time});
    }
  } else {
    const Envelope env = normalize_to_area(base, kPi / 2.0);
    g.switch_time = d;
    g.pulses.duration = 2.0 * d;
    for (int half = 0; half < 2; ++half) {
      const double start = half * d;
      g.pulses.segments.push_back({env, Transition::ge, phases[half][0], start, w_ge});
      g.pulses.segments.push_back({env, Transition::ef, phases[half][1], start, w_ef});
    }
  }
  return g;
}

CavityGate synthesize_cavity_gate(double theta, double gamma, double phi, double g_peak,
                                  double ramp) {
  if (!(g_peak > 0.0)) throw Error(ErrorCode::ZeroCoupling, "cavity gate needs g > 0");
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, pi]");
  }
  // area of a sin^2-ramped square pulse is peak * (flat + ramp)
  const double span = kPi / g_peak;
  ramp = std::min(ramp, span);
  CavityGate gate{{theta, gamma, phi},
                  {g_peak * std::sin(0.5 * theta), g_peak * std::cos(0.5 * theta), phi},
                  Envelope::square(span - ramp, ramp, g_peak),
                  0.0};
  gate.switch_time = 0.5 * gate.envelope.duration();
  return gate;
}

ComplexMatrix cavity_gate_hamiltonian(const CavityGate& gate, double t) {
  ComplexMatrix h = cavity_effective_hamiltonian(gate.model, t, gate.envelope);
  if (t >= gate.switch_time) {
    const Complex shift = std::polar(1.0, gate.params.gamma - kPi);
    h(0, 2) *= shift;
    h(1, 2) *= shift;
    h(2, 0) = std::conj(h(0, 2));
    h(2, 1) = std::conj(h(1, 2));
  }
  return h;
}

ComplexMatrix propagate_cavity_gate(const CavityGate& gate, int steps) {
  return propagate_unitary([&](double t) { return cavity_gate_hamiltonian(gate, t); },
                           TimeGrid::over(gate.duration(), steps));
}

GateSchedule dynamic_schedule(const std::vector<RotationPulse>& rotations, const Envelope& base,
                              const DragSetting& drag) {
  GateSchedule g;
  g.pulses.drag = drag;
  double t = 0.0;
  for (const RotationPulse& r : rotations) {
    if (r.transition != Transition::ge && r.transition != Transition::ef) {
      throw Error(ErrorCode::BadTransition, "dynamic pulses drive ge or ef");
    }
    if (r.angle == 0.0) continue;
    g.pulses.segments.push_back(
        {normalize_to_area(base, 0.5 * r.angle), r.transition, r.phase, t});
    t += base.duration();
  }
  g.pulses.duration = t;
  g.switch_time = t;
  return g;
}

GateSchedule dynamic_hadamard_schedule(const Envelope& base, const DragSetting& drag) {
  return dynamic_schedule({{Transition::ge, kPi, 0.0},
                           {Transition::ef, kPi / 2.0, 0.0},
                           {Transition::ge, kPi, 0.0}},
                          base, drag);
}

GateSchedule dynamic_t_schedule(const Envelope& base, const DragSetting& drag) {
  return dynamic_schedule({{Transition::ge, kPi, 0.0},
                           {Transition::ef, kPi, -kPi / 8.0},
                           {Transition::ef, kPi, kPi / 2.0},
                           {Transition::ge, kPi, 0.0}},
                          base, drag);
}

ComplexMatrix propagate_schedule(const PulseSchedule& s, const ControlError& err, int steps) {
  if (s.duration <= 0.0) return ComplexMatrix::Identity(3, 3);
  return propagate_unitary([&](double t) { return qutrit_drive_hamiltonian(s, err, t); },
                           TimeGrid::over(s.duration, steps));
}

double gf_gate_fidelity(const ComplexMatrix& u3, const ComplexMatrix& target2) {
  return gate_process_fidelity(gf_block(u3), target2);
}

double gf_leakage(const ComplexMatrix& u3) {
  return 0.5 * (std::norm(u3(kE, kG)) + std::norm(u3(kE, kF)));
}

HolonomicParams params_from_unitary(const ComplexMatrix& u2) {
  if (u2.rows() != 2 || u2.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "params_from_unitary expects a 2x2 matrix");
  }
  if (unitarity_error(u2) > 1e-8) throw Error(ErrorCode::NonUnitaryInput, "input is not unitary");
  const ComplexMatrix v = u2 / std::sqrt(u2.determinant());
  double a0 = (0.5 * (v(0, 0) + v(1, 1))).real();
  // v = a0 I - i (s n) . sigma
  double nx = (0.5 * kI * (v(0, 1) + v(1, 0))).real();
  double ny = (0.5 * kI * (kI * v(0, 1) - kI * v(1, 0))).real();
  double nz = (0.5 * kI * (v(0, 0) - v(1, 1))).real();
  if (a0 < 0.0) {
    a0 = -a0;
    nx = -nx;
    ny = -ny;
    nz = -nz;
  }
  const double s = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (s < 1e-12) return {0.0, 0.0, 0.0};
  nx /= s;
  ny /= s;
  nz /= s;
  const double gamma = snap(2.0 * std::atan2(s, a0));
  if (std::abs(gamma - kPi) < 1e-9) {
    // rotation by pi: the axis sign is free
    const bool flip = nz < -1e-12 || (std::abs(nz) <= 1e-12 &&
                                      (nx < -1e-12 || (std::abs(nx) <= 1e-12 && ny < 0.0)));
    if (flip) {
      nx = -nx;
      ny = -ny;
      nz = -nz;
    }
  }
  const double theta = snap(std::acos(std::clamp(nz, -1.0, 1.0)));
  double phi = 0.0;
  if (theta > 1e-12 && theta < kPi - 1e-12) phi = snap(std::atan2(-ny, nx));
  // elementwise convention: n = (sin th cos phi, -sin th sin phi, cos th)
  return {theta, gamma, phi};
}

const CliffordGroup& CliffordGroup::instance() {
  static const CliffordGroup group;
  return group;
}

CliffordGroup::CliffordGroup() {
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix h = two_by_two(r, r, r, -r);
  const ComplexMatrix s = two_by_two(1.0, 0.0, 0.0, kI);
  std::vector<ComplexMatrix> found = {ComplexMatrix::Identity(2, 2)};
  std::deque<ComplexMatrix> frontier = {found.front()};
  auto known = [&](const ComplexMatrix& u) {
    return std::any_of(found.begin(), found.end(),
                       [&](const ComplexMatrix& f) { return equal_up_to_phase(u, f, 1e-9); });
  };
  while (!frontier.empty()) {
    const ComplexMatrix u = frontier.front();
    frontier.pop_front();
    for (const ComplexMatrix* gen : {&h, &s}) {
      const ComplexMatrix next = *gen * u;
      if (!known(next)) {
        found.push_back(next);
        frontier.push_back(next);
      }
    }
  }
  if (found.size() != 24) throw Error(ErrorCode::InvalidArgument, "Clifford closure failed");
  for (const ComplexMatrix& u : found) {
    params_.push_back(params_from_unitary(u));
    unitaries_.push_back(target_u1(params_.back()));
    if (!equal_up_to_phase(unitaries_.back(), u, 1e-9)) {
      throw Error(ErrorCode::InvalidArgument, "Clifford parameterization mismatch");
    }
  }
  table_.resize(24);
  inverse_.resize(24);
  for (std::size_t a = 0; a < 24; ++a) {
    for (std::size_t b = 0; b < 24; ++b) {
      table_[a][b] = *find(unitaries_[a] * unitaries_[b]);
      if (table_[a][b] == 0) inverse_[a] = b;
    }
  }
}

std::optional<std::size_t> CliffordGroup::find(const ComplexMatrix& u2, double tol) const {
  for (std::size_t i = 0; i < unitaries_.size(); ++i) {
    if (equal_up_to_phase(u2, unitaries_[i], tol)) return i;
  }
  return std::nullopt;
}

std::vector<HolonomicParams> clifford_table() {
  const CliffordGroup& g = CliffordGroup::instance();
  std::vector<HolonomicParams> out;
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g.params(i));
  return out;
}

HolonomicParams named_qubit_gate(std::string_view name) {
  if (name == "I") return {0.0, 0.0, 0.0};
  if (name == "X_pi") return {kPi / 2, kPi, 0.0};
  if (name == "X_pi_2") return {kPi / 2, kPi / 2, 0.0};
  if (name == "Y_pi") return {kPi / 2, kPi, -kPi / 2};
  if (name == "Z_pi") return {0.0, kPi, 0.0};
  if (name == "H") return {kPi / 4, kPi, 0.0};
  if (name == "T") return {0.0, kPi / 4, 0.0};
  throw Error(ErrorCode::InvalidArgument, "unknown qubit gate: " + std::string(name));
}

HolonomicParams named_cavity_gate(std::string_view name) {
  if (name == "I") return {0.0, 0.0, 0.0};
  if (name == "X_pi") return {kPi / 2, kPi, 0.0};
  if (name == "Y_pi") return {kPi / 2, kPi, kPi / 2};
  if (name == "H1") return {kPi / 4, kPi, 0.0};
  if (name == "H2") return {kPi / 4, kPi, kPi / 2};
  throw Error(ErrorCode::InvalidArgument, "unknown cavity gate: " + std::string(name));
}

}  // namespace holo
