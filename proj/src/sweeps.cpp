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

#include "holoqutrit/sweeps.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "holoqutrit/error.hpp"
#include "holoqutrit/evolution.hpp"
#include "holoqutrit/parallel.hpp"
#include "holoqutrit/seeding.hpp"

namespace holo {

std::string to_string(GateFamily f) { return f == GateFamily::holonomic ? "holonomic" : "dynamic"; }

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

void check_grid(const std::vector<double>& g, const char* what) {
  if (g.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " grid is empty");
  for (double x : g) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " grid is not finite");
  }
}

// ---- cavity pipeline model: cavity (0, 1) x Q1 x Q2 ----

constexpr std::array<Eigen::Index, 3> kDims = {2, 3, 3};
constexpr Eigen::Index kDim = 18;

constexpr Eigen::Index idx(int c, int q1, int q2) { return c * 9 + q1 * 3 + q2; }

// Real rotation between |f, n=0> and |g, n=1> of Q2 and the cavity. The encode
// (sign +1) maps |f, 0> to +|g, 1>; decode uses the opposite drive phase.
ComplexMatrix swap_hamiltonian(const Envelope& env, double sign, double t) {
  ComplexMatrix h = ComplexMatrix::Zero(kDim, kDim);
  const double s = sign * sample(env, t);
  if (s == 0.0) return h;
  for (int q1 = 0; q1 < 3; ++q1) {
    const Eigen::Index a = idx(1, q1, kG), b = idx(0, q1, kF);
    h(a, b) = Complex(0.0, s);
    h(b, a) = Complex(0.0, -s);
  }
  return h;
}

ComplexMatrix gate_hamiltonian(const CavityGate& gate, double t) {
  const ComplexMatrix h3 = cavity_gate_hamiltonian(gate, t);
  ComplexMatrix h = ComplexMatrix::Zero(kDim, kDim);
  for (int q2 = 0; q2 < 3; ++q2) {
    const Eigen::Index map[3] = {idx(0, kG, q2), idx(1, kG, q2), idx(0, kF, q2)};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) h(map[r], map[c]) = h3(r, c);
    }
  }
  return h;
}

std::vector<CollapseOperator> pipeline_collapse(const CavityPipelineConfig& cfg) {
  std::vector<CollapseOperator> out;
  auto add = [&](const NoiseModel& noise, std::size_t which) {
    for (const CollapseOperator& c : collapse_operators(noise)) {
      out.push_back({lift(c.op, kDims, which), c.rate, c.label});
    }
  };
  add(cfg.q1_noise, 1);
  add(cfg.q2_noise, 2);
  if (cfg.cavity_t1 > 0.0) {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    out.push_back({lift(a, kDims, 0), 1.0 / cfg.cavity_t1, "cavity_decay"});
    const double pure = 1.0 / cfg.cavity_t2 - 0.5 / cfg.cavity_t1;
    if (cfg.cavity_t2 > 0.0 && pure > 0.0) {
      ComplexMatrix n = ComplexMatrix::Zero(2, 2);
      n(1, 1) = 1.0;
      out.push_back({lift(n, kDims, 0), 2.0 * pure, "cavity_dephasing"});
    }
  }
  return out;
}

struct Stage {
  TimeDependentOperator h;
  double duration;
};

ComplexMatrix reduce_to_q2(const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(3, 3);
  for (int c = 0; c < 2; ++c) {
    for (int q1 = 0; q1 < 3; ++q1) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) out(a, b) += rho(idx(c, q1, a), idx(c, q1, b));
      }
    }
  }
  return out;
}

std::vector<QutritKet> q2_inputs() {
  const double r = 1.0 / std::sqrt(2.0);
  return {QutritKet(1, 0, 0), QutritKet(0, 0, 1), QutritKet(r, 0, r), QutritKet(r, 0, Complex(0, -r))};
}

ComplexMatrix qubit_density(const QutritKet& k) {
  return gf_block(k.projector());
}

// Q2 states after all stages, before the decode frame rotation.
std::vector<ComplexMatrix> run_stages(const std::vector<Stage>& stages, const CavityPipelineConfig& cfg) {
  const std::vector<QutritKet> inputs = q2_inputs();
  std::vector<ComplexMatrix> out(inputs.size());
  const std::vector<CollapseOperator> collapse =
      cfg.include_decoherence ? pipeline_collapse(cfg) : std::vector<CollapseOperator>{};
  ComplexMatrix u = ComplexMatrix::Identity(kDim, kDim);
  if (collapse.empty()) {
    for (const Stage& s : stages) u = propagate_unitary(s.h, TimeGrid::over(s.duration, cfg.steps)) * u;
  }
  parallel_for(inputs.size(), cfg.threads, [&](std::size_t i) {
    ComplexVector psi = ComplexVector::Zero(kDim);
    for (int q = 0; q < 3; ++q) psi(idx(0, kG, q)) = inputs[i].amplitudes()(q);
    ComplexMatrix rho = psi * psi.adjoint();
    if (collapse.empty()) {
      rho = u * rho * u.adjoint();
    } else {
      for (const Stage& s : stages) {
        rho = evolve_density(s.h, collapse, rho, TimeGrid::over(s.duration, cfg.steps));
      }
    }
    out[i] = reduce_to_q2(rho);
  });
  return out;
}

ComplexMatrix frame_rotated(const ComplexMatrix& rho, double alpha) {
  ComplexMatrix z = ComplexMatrix::Identity(3, 3);
  z(kF, kF) = std::polar(1.0, alpha);
  return z * rho * z.adjoint();
}

ComplexMatrix chi_from_states(const std::vector<ComplexMatrix>& q2_states) {
  std::vector<ComplexMatrix> in, out;
  for (const QutritKet& k : q2_inputs()) in.push_back(qubit_density(k));
  for (const ComplexMatrix& r : q2_states) out.push_back(gf_block(r));
  return extract_chi(in, out, pauli_basis_reduced()).chi;
}

// Decode frame angle maximizing the identity-pipeline overlap.
double calibrate_decode_phase(const std::vector<ComplexMatrix>& raw) {
  const ComplexMatrix ideal = reduced_chi_of_unitary(ComplexMatrix::Identity(2, 2));
  auto score = [&](double a) {
    std::vector<ComplexMatrix> s;
    for (const ComplexMatrix& r : raw) s.push_back(frame_rotated(r, a));
    return fidelity_att(chi_from_states(s), ideal);
  };
  const int n = 72;
  double best = -kPi, best_f = -1.0;
  for (int i = 0; i < n; ++i) {
    const double a = -kPi + 2.0 * kPi * i / n;
    const double f = score(a);
    if (f > best_f) best_f = f, best = a;
  }
  // golden-section refinement inside the neighbouring grid cells
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best - 2.0 * kPi / n, hi = best + 2.0 * kPi / n;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = score(x1), f2 = score(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 > f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = score(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = score(x2);
    }
  }
  return std::remainder(0.5 * (lo + hi), 2.0 * kPi);
}

PipelineRun tomography_run(const std::vector<ComplexMatrix>& raw, double alpha,
                           const ComplexMatrix& target, const Sampling& sampling) {
  std::vector<ComplexMatrix> rotated;
  for (const ComplexMatrix& r : raw) rotated.push_back(frame_rotated(r, alpha));
  const MeasurementModel mm = measurement_coefficients();
  const TomographyRecord rec = simulate_record(rotated, mm, sampling);
  PipelineRun run;
  for (Eigen::Index i = 0; i < rec.values.rows(); ++i) {
    run.q2_states.push_back(mle_density(rec.values.row(i).transpose(), mm).rho);
  }
  run.chi = chi_from_states(run.q2_states);
  const ComplexMatrix ideal = reduced_chi_of_unitary(target);
  run.f_att = fidelity_att(run.chi, ideal);
  run.f_unatt = fidelity_unatt(run.chi, ideal);
  run.trace = run.chi.trace().real();
  return run;
}

}  // namespace

std::vector<double> default_epsilon_grid() { return linspace(-0.1, 0.1, 21); }

std::vector<double> default_detuning_grid() { return linspace(-2.0 * kPi * 1e6, 2.0 * kPi * 1e6, 21); }

GateSchedule crosstalk_schedule(GateFamily family, const std::string& gate, const Envelope& base) {
  if (family == GateFamily::holonomic) return synthesize_qubit_gate(named_qubit_gate(gate), base);
  if (gate == "H") return dynamic_hadamard_schedule(base);
  if (gate == "T") return dynamic_t_schedule(base);
  throw Error(ErrorCode::InvalidArgument, "dynamic schedules exist for H and T, not " + gate);
}

FidelityGrid crosstalk_sweep(const CrosstalkConfig& cfg) {
  check_grid(cfg.epsilons, "epsilon");
  check_grid(cfg.detunings, "detuning");
  const GateSchedule schedule = crosstalk_schedule(cfg.family, cfg.gate, cfg.envelope);
  const ComplexMatrix target = target_u1(named_qubit_gate(cfg.gate));
  FidelityGrid grid{cfg.epsilons, cfg.detunings,
                    Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cfg.epsilons.size()),
                                          static_cast<Eigen::Index>(cfg.detunings.size()))};
  const std::size_t cols = cfg.detunings.size();
  parallel_for(cfg.epsilons.size() * cols, cfg.threads, [&](std::size_t k) {
    const std::size_t i = k / cols, j = k % cols;
    const ComplexMatrix u =
        propagate_schedule(schedule.pulses, ControlError{cfg.epsilons[i], cfg.detunings[j]}, cfg.steps);
    grid.fidelity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gf_gate_fidelity(u, target);
  });
  return grid;
}

void write_grid_csv(std::ostream& out, const FidelityGrid& grid) {
  out << std::setprecision(17) << "epsilon";
  for (double d : grid.detunings) out << ',' << d / (2.0 * kPi);
  out << '\n';
  for (std::size_t i = 0; i < grid.epsilons.size(); ++i) {
    out << grid.epsilons[i];
    for (std::size_t j = 0; j < grid.detunings.size(); ++j) {
      out << ',' << grid.fidelity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    out << '\n';
  }
}

std::string crosstalk_settings_json(const CrosstalkConfig& cfg) {
  nlohmann::json j;
  j["family"] = to_string(cfg.family);
  j["gate"] = cfg.gate;
  j["epsilon"] = cfg.epsilons;
  std::vector<double> hz;
  for (double d : cfg.detunings) hz.push_back(d / (2.0 * kPi));
  j["detuning_hz"] = hz;
  j["envelope_duration_s"] = cfg.envelope.duration();
  j["envelope_area"] = area(cfg.envelope);
  j["steps"] = cfg.steps;
  return j.dump();
}

std::uint64_t crosstalk_settings_hash(const CrosstalkConfig& cfg) {
  return fnv1a(crosstalk_settings_json(cfg));
}

double default_cavity_coupling(double theta) {
  const double s = std::sin(0.5 * theta);
  if (!(s > 1e-9)) throw Error(ErrorCode::ZeroCoupling, "theta = 0 needs an explicit coupling");
  return 2.0 * kPi * 0.25e6 / s;
}

std::vector<std::string> cavity_input_labels() { return {"g", "f", "g+f", "g-if"}; }

CavityPipelineResult cavity_pipeline(const CavityPipelineConfig& cfg) {
  if (!(cfg.swap_coupling > 0.0)) throw Error(ErrorCode::ZeroCoupling, "swap coupling must be positive");
  if (cfg.include_decoherence) {
    cfg.q1_noise.validate();
    cfg.q2_noise.validate();
  }
  CavityPipelineResult res;
  const double flat = kPi / (2.0 * cfg.swap_coupling) - cfg.ramp;
  const Envelope swap = Envelope::square(flat, cfg.ramp, cfg.swap_coupling);
  res.swap_duration = swap.duration();
  const Stage encode{[swap](double t) { return swap_hamiltonian(swap, 1.0, t); }, swap.duration()};
  const Stage decode{[swap](double t) { return swap_hamiltonian(swap, -1.0, t); }, swap.duration()};

  const std::vector<ComplexMatrix> raw_ref = run_stages({encode, decode}, cfg);
  res.decode_phase = calibrate_decode_phase(raw_ref);

  const Sampling ref_sampling{cfg.sampling.shots, sub_seed(cfg.sampling.seed, 0)};
  const Sampling gate_sampling{cfg.sampling.shots, sub_seed(cfg.sampling.seed, 1)};
  res.reference = tomography_run(raw_ref, res.decode_phase, ComplexMatrix::Identity(2, 2), ref_sampling);

  res.target = target_u1(cfg.gate);
  res.chi_target = reduced_chi_of_unitary(res.target);
  std::vector<ComplexMatrix> raw_gate = raw_ref;
  if (cfg.gate.gamma != 0.0) {
    const double g = cfg.coupling ? *cfg.coupling : default_cavity_coupling(cfg.gate.theta);
    const CavityGate gate = synthesize_cavity_gate(cfg.gate.theta, cfg.gate.gamma, cfg.gate.phi, g, cfg.ramp);
    res.gate_duration = gate.duration();
    const Stage gate_stage{[gate](double t) { return gate_hamiltonian(gate, t); }, gate.duration()};
    raw_gate = run_stages({encode, gate_stage, decode}, cfg);
  }
  res.gate = tomography_run(raw_gate, res.decode_phase, res.target, gate_sampling);
  res.loss = res.reference.f_att - res.gate.f_att;
  return res;
}

}  // namespace holo
