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

#include "holoqutrit/model.hpp"

#include <algorithm>
#include <cmath>

#include "holoqutrit/error.hpp"

namespace holo {

double CavityModel::coupling() const { return std::hypot(g1, g2); }

double CavityModel::mixing_angle() const { return 2.0 * std::atan2(g1, g2); }

NoiseModel NoiseModel::from_coherence_times(double t1_ge, double t1_ef, double t2_ge,
                                            double t2_ef) {
  auto inv = [](double t) { return std::isfinite(t) && t > 0.0 ? 1.0 / t : 0.0; };
  NoiseModel n;
  n.gamma_eg = inv(t1_ge);
  n.gamma_fe = inv(t1_ef);
  n.gamma_fg = 0.0;
  n.dephasing_ge = std::max(0.0, inv(t2_ge) - 0.5 * n.gamma_eg);
  n.dephasing_ef =
      std::max(0.0, inv(t2_ef) - 0.5 * (n.gamma_eg + n.gamma_fe + n.gamma_fg));
  return n;
}

bool NoiseModel::empty() const {
  return gamma_eg == 0.0 && gamma_fe == 0.0 && gamma_fg == 0.0 && dephasing_ge == 0.0 &&
         dephasing_ef == 0.0;
}

void NoiseModel::validate() const {
  for (double r : {gamma_eg, gamma_fe, gamma_fg, dephasing_ge, dephasing_ef}) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::NegativeRate, "noise rates must be finite and >= 0");
    }
  }
}

ComplexMatrix CollapseOperator::scaled() const { return std::sqrt(rate) * op; }

namespace paper_device {

QutritDevice qubit1() { return {2.0 * kPi * 5.036e9, 2.0 * kPi * 4.782e9, "Q1"}; }
QutritDevice qubit2() { return {2.0 * kPi * 5.605e9, 2.0 * kPi * 5.367e9, "Q2"}; }

NoiseModel qubit1_noise() {
  return NoiseModel::from_coherence_times(45.6e-6, 20.3e-6, 24.4e-6, 8.3e-6);
}

NoiseModel qubit2_noise() {
  return NoiseModel::from_coherence_times(42.2e-6, 24.9e-6, 44.0e-6, 13.6e-6);
}

}  // namespace paper_device

ComplexMatrix qutrit_drive_hamiltonian(const PulseSchedule& schedule, const ControlError& err,
                                       double t) {
  if (!(err.rabi_offset > -1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Rabi offset must be > -1");
  }
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  const double scale = 1.0 + err.rabi_offset;
  for (const PulseSegment& seg : schedule.segments) {
    int row = 0;
    switch (seg.transition) {
      case Transition::ge: row = kG; break;
      case Transition::ef: row = kF; break;
      default:
        throw Error(ErrorCode::BadTransition,
                    "qutrit drive accepts ge/ef segments, got " + to_string(seg.transition));
    }
    if (t < seg.start || t >= seg.end()) continue;  // half-open: [start, end)
    const double local = seg.window_offset + (t - seg.start);
    Complex amp = sample(seg.envelope, local);
    if (schedule.drag.enabled) amp += kI * drag_quadrature(seg.envelope, schedule.drag, local);
    h(row, kE) += seg.weight * scale * amp * std::polar(1.0, seg.phase);
  }
  h(kE, kG) = std::conj(h(kG, kE));
  h(kE, kF) = std::conj(h(kF, kE));
  h(kE, kE) += err.detuning;
  h(kF, kF) += 2.0 * err.detuning;
  return h;
}

std::pair<QutritKet, QutritKet> bright_dark(double theta, double phi) {
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  QutritKet bright(s * std::polar(1.0, phi), 0.0, -c);
  QutritKet dark(c, 0.0, s * std::polar(1.0, -phi));
  return {bright, dark};
}

ComplexMatrix cavity_effective_hamiltonian(const CavityModel& m, double t, const Envelope& env) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  if (env.peak == 0.0) return h;
  const double s = sample(env, t) / env.peak;
  // basis {|0g>, |1g>, |0f>}
  h(0, 2) = s * m.g1 * std::polar(1.0, m.phase);
  h(1, 2) = -s * m.g2;
  h(2, 0) = std::conj(h(0, 2));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

ComplexMatrix two_qubit_hamiltonian(const PulseSchedule& schedule, const ControlError& err,
                                    double t) {
  ComplexMatrix h = ComplexMatrix::Zero(6, 6);
  h.topLeftCorner(3, 3) = qutrit_drive_hamiltonian(schedule, err, t);
  return h;
}

LevelDephasing level_dephasing(const NoiseModel& noise) {
  LevelDephasing d;
  d.e = std::min(noise.dephasing_ge, noise.dephasing_ef);
  d.g = noise.dephasing_ge - d.e;
  d.f = noise.dephasing_ef - d.e;
  return d;
}

std::vector<CollapseOperator> collapse_operators(const NoiseModel& noise) {
  noise.validate();
  std::vector<CollapseOperator> out;
  auto jump = [&](int to, int from, double rate, const char* label) {
    if (rate <= 0.0) return;
    ComplexMatrix op = ComplexMatrix::Zero(3, 3);
    op(to, from) = 1.0;
    out.push_back({op, rate, label});
  };
  jump(kG, kE, noise.gamma_eg, "decay_eg");
  jump(kE, kF, noise.gamma_fe, "decay_fe");
  jump(kG, kF, noise.gamma_fg, "decay_fg");
  // A projector jump sqrt(2 gamma)|k><k| damps every coherence touching k at gamma.
  const LevelDephasing d = level_dephasing(noise);
  jump(kG, kG, 2.0 * d.g, "dephase_g");
  jump(kE, kE, 2.0 * d.e, "dephase_e");
  jump(kF, kF, 2.0 * d.f, "dephase_f");
  return out;
}

}  // namespace holo
