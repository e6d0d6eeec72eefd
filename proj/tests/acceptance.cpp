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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "holoqutrit/benchmarking.hpp"
#include "holoqutrit/calibration.hpp"
#include "holoqutrit/evolution.hpp"
#include "holoqutrit/holonomic.hpp"
#include "holoqutrit/model.hpp"
#include "holoqutrit/operators.hpp"
#include "holoqutrit/sweeps.hpp"
#include "holoqutrit/tomography.hpp"

using namespace holo;

namespace {

constexpr double kTwoPiHz = 2.0 * kPi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

Trace sampled(const std::vector<double>& t, const std::function<double(double)>& f) {
  std::vector<double> v;
  for (double x : t) v.push_back(f(x));
  return Trace(t, v);
}

bool within(double value, double lo, double hi) { return value >= lo && value <= hi; }

void ideal_synthesis(Outcome& o) {
  double worst = 0.0, leak = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      for (int k = 0; k < 5; ++k) {
        const HolonomicParams p{kPi * i / 4.0, 2.0 * kPi * j / 5.0, 2.0 * kPi * k / 5.0 - kPi};
        const ComplexMatrix u = propagate_schedule(synthesize_qubit_gate(p).pulses);
        worst = std::max(worst, 1.0 - gf_gate_fidelity(u, target_u1(p)));
        leak = std::max(leak, gf_leakage(u));
      }
    }
  }
  o.detail << "max infidelity " << worst << ", max leakage " << leak;
  o.require(worst < 1e-6, "infidelity < 1e-6");
  o.require(leak < 1e-6, "leakage < 1e-6");
}

void qpt_pipeline(Outcome& o) {
  const char* gates[] = {"X_pi", "X_pi_2", "H", "Z_pi"};
  double sum_f = 0.0, sum_tr = 0.0;
  for (const char* name : gates) {
    const HolonomicParams p = named_qubit_gate(name);
    const GateSchedule g = synthesize_qubit_gate(p);
    const QptResult ideal = run_qpt(qutrit_channel(g.pulses, NoiseModel{}), target_u1(p));
    o.require(std::abs(ideal.f_unatt - 1.0) < 1e-5, std::string(name) + " noiseless F_unatt");
    o.require(std::abs(ideal.reduced.trace - 1.0) < 1e-5, std::string(name) + " noiseless trace");

    const QptResult noisy =
        run_qpt(qutrit_channel(g.pulses, paper_device::qubit1_noise()), target_u1(p));
    o.detail << name << " F_unatt " << noisy.f_unatt << " F_att " << noisy.f_att << " Tr "
             << noisy.reduced.trace << "; ";
    o.require(within(noisy.f_unatt, 0.990, 0.9995), std::string(name) + " F_unatt in [0.990, 0.9995]");
    sum_f += noisy.f_unatt;
    sum_tr += noisy.reduced.trace;
  }
  const double mean_f = sum_f / 4.0, mean_tr = sum_tr / 4.0;
  o.detail << "mean F_unatt " << mean_f << ", mean Tr " << mean_tr;
  o.require(std::abs(mean_f - 0.996) <= 0.004, "mean F_unatt within 0.004 of 0.996");
  o.require(mean_tr >= 0.985, "mean Tr >= 0.985");
}

void randomized_benchmarking(Outcome& o) {
  std::vector<int> lengths;
  for (int m = 1; m <= 20; ++m) lengths.push_back(m);

  RbConfig ideal;
  ideal.lengths = lengths;
  ideal.randomizations = 20;
  ideal.seed = 7;
  const RbResult clean = run_rb(ideal);
  o.detail << "noiseless p " << clean.reference.fit.p << "; ";
  o.require(std::abs(clean.reference.fit.p - 1.0) < 1e-4, "noiseless p = 1");

  double f_avg = 0.0;
  for (const char* gate : {"X_pi", "X_pi_2", "H", "Z_pi"}) {
    RbConfig cfg;
    cfg.lengths = lengths;
    cfg.randomizations = 100;
    cfg.seed = 7;
    cfg.noise = paper_device::qubit1_noise();
    cfg.interleaved = gate;
    const RbResult r = run_rb(cfg);
    f_avg = r.reference.fit.f_avg;
    if (!r.f_gate) {
      o.require(false, std::string(gate) + " F_gate undefined: " + r.note);
      continue;
    }
    o.detail << gate << " F_gate " << *r.f_gate << "; ";
    o.require(within(*r.f_gate, 0.992, 0.9995), std::string(gate) + " F_gate in [0.992, 0.9995]");
  }
  o.detail << "F_avg " << f_avg;
  o.require(within(f_avg, 0.992, 0.999), "F_avg in [0.992, 0.999]");
}

void cavity_gates(Outcome& o) {
  const double mhz = kTwoPiHz * 1e6;
  const CavityGate x = synthesize_cavity_gate(kPi / 2, kPi, 0.0, std::sqrt(2.0) * 0.25 * mhz);
  const ComplexMatrix u = propagate_cavity_gate(x);
  const double infid = 1.0 - gate_process_fidelity(u.topLeftCorner(2, 2), target_u2(kPi / 2, 0.0));
  o.detail << "g1 " << x.model.g1 / mhz << " MHz, g2 " << x.model.g2 / mhz << " MHz, duration "
           << x.duration() * 1e9 << " ns, infidelity " << infid << "; ";
  o.require(infid < 1e-5, "noiseless infidelity < 1e-5");

  CavityPipelineConfig cfg;
  cfg.gate = named_cavity_gate("X_pi");
  cfg.include_decoherence = true;
  const CavityPipelineResult r = cavity_pipeline(cfg);
  o.detail << "reference F_att " << r.reference.f_att << ", gate F_att " << r.gate.f_att << ", loss "
           << r.loss;
  o.require(within(r.loss, 0.02, 0.09), "loss in [0.02, 0.09]");
}

void robustness_ordering(Outcome& o) {
  const std::vector<double> eps = default_epsilon_grid();
  const std::vector<double> det = default_detuning_grid();
  Eigen::Index zero = -1;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(det.size()); ++j) {
    if (det[j] == 0.0) zero = j;
  }
  o.require(zero >= 0, "detuning grid contains 0");
  if (zero < 0) return;

  for (const char* gate : {"H", "T"}) {
    CrosstalkConfig h;
    h.gate = gate;
    h.epsilons = eps;
    h.detunings = det;
    CrosstalkConfig d = h;
    d.family = GateFamily::dynamic;
    const FidelityGrid gh = crosstalk_sweep(h);
    const FidelityGrid gd = crosstalk_sweep(d);
    o.detail << gate << " mean holonomic " << gh.mean() << " dynamic " << gd.mean() << "; ";
    o.require(gh.mean() > gd.mean(), std::string(gate) + " grid mean holonomic > dynamic");
    if (std::string(gate) != "H") continue;
    int violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (std::abs(eps[i]) < 0.02 - 1e-12) continue;
      const double gap = gh.fidelity(i, zero) - gd.fidelity(i, zero);
      if (gap < 0.0) {
        ++violations;
        worst = std::min(worst, gap);
      }
    }
    o.detail << "H zero-detuning cut: " << violations << " points with dynamic ahead, worst gap "
             << worst << "; ";
    o.require(violations == 0, "H zero-detuning cut holonomic >= dynamic");
  }
}

void fit_round_trips(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 2e-3);
  const int draws = 100;
  int fails[4] = {0, 0, 0, 0};
  double worst[4] = {0, 0, 0, 0};
  auto record = [&](int which, double rel) {
    worst[which] = std::max(worst[which], rel);
    if (!(rel < 0.02)) ++fails[which];
  };

  const std::vector<double> t_rate = linspace(0.0, 150e-6, 76);
  for (int d = 0; d < draws; ++d) {
    const double geg = (0.8 + 0.4 * u(rng)) / 45.6e-6, gfe = (0.8 + 0.4 * u(rng)) / 20.3e-6;
    std::vector<Trace> tr;
    for (int k = 0; k < 3; ++k) {
      tr.push_back(sampled(t_rate, [&](double x) {
        return rate_equation_populations(geg, gfe, 0.0, {0, 0, 1}, x)(k) + noise(rng);
      }));
    }
    try {
      const RateFit f = fit_rate_equation(tr[0], tr[1], tr[2]);
      record(0, std::max(std::abs(f.gamma_eg / geg - 1.0), std::abs(f.gamma_fe / gfe - 1.0)));
    } catch (const std::exception&) {
      record(0, 1.0);
    }
  }

  const std::vector<double> t_ramsey = linspace(0.0, 50e-6, 501);
  for (int d = 0; d < draws; ++d) {
    const double t2 = 24.4e-6 * (0.8 + 0.4 * u(rng));
    const double f1 = 0.1e6 + 0.3e6 * u(rng), f2 = f1 + 0.15e6 + 0.4e6 * u(rng);
    const double p1 = kTwoPiHz * u(rng), p2 = kTwoPiHz * u(rng);
    const double a2 = d % 2 == 0 ? 0.0 : 0.2;
    const Trace tr = sampled(t_ramsey, [&](double x) {
      return 0.5 + std::exp(-x / t2) * (0.3 * std::cos(kTwoPiHz * f1 * x + p1) +
                                        a2 * std::cos(kTwoPiHz * f2 * x + p2)) + noise(rng);
    });
    try {
      record(1, std::abs(fit_ramsey(tr).t2 / t2 - 1.0));
    } catch (const std::exception&) {
      record(1, 1.0);
    }
  }

  const std::vector<double> t_rabi = linspace(0.0, 4e-6, 201);
  for (int d = 0; d < draws; ++d) {
    const double w = 2.0 * kTwoPiHz * 0.845e6 * (0.8 + 0.4 * u(rng));
    const double phase = 0.2 * (u(rng) - 0.5);
    const Trace tr = sampled(t_rabi, [&](double x) {
      return 0.5 + 0.45 * std::exp(-x / 45.6e-6) * std::cos(w * x + phase) + noise(rng);
    });
    try {
      record(2, std::abs(fit_rabi(tr).omega / w - 1.0));
    } catch (const std::exception&) {
      record(2, 1.0);
    }
  }

  std::normal_distribution<double> rel_noise(0.0, 3e-3);
  for (int d = 0; d < draws; ++d) {
    const double g = kTwoPiHz * 0.845e6 * (0.8 + 0.4 * u(rng));
    const double center = kTwoPiHz * 0.5e6 * (2.0 * u(rng) - 1.0);
    std::vector<ChevronPoint> pts;
    for (double x : linspace(-kTwoPiHz * 4e6, kTwoPiHz * 4e6, 17)) {
      pts.push_back({center + x, chevron_rate(center + x, center, g) * (1.0 + rel_noise(rng))});
    }
    try {
      const ChevronFit f = fit_chevron(pts);
      record(3, std::max(std::abs(f.coupling / g - 1.0), std::abs(f.center - center) / g));
    } catch (const std::exception&) {
      record(3, 1.0);
    }
  }

  const char* names[] = {"rates", "Ramsey T2*", "Rabi", "chevron"};
  for (int k = 0; k < 4; ++k) {
    o.detail << names[k] << " worst rel. error " << worst[k] << " (" << fails[k] << "/" << draws
             << " outside 2%); ";
    o.require(fails[k] == 0, std::string(names[k]) + " within 2%");
  }
}

ComplexMatrix ge_ef_drive(double t) {
  PulseSchedule s;
  s.duration = 120e-9;
  s.segments.push_back({Envelope::gaussian(30e-9, kTwoPiHz * 9e6), Transition::ge, 0.3, 0.0});
  s.segments.push_back({Envelope::gaussian(30e-9, kTwoPiHz * 7e6), Transition::ef, 1.9, 0.0});
  return qutrit_drive_hamiltonian(s, {}, t);
}

void numerical_hygiene(Outcome& o) {
  const double duration = 120e-9;
  const double drift = unitarity_error(propagate_unitary(ge_ef_drive, TimeGrid::over(duration, 100000)));
  o.detail << "unitarity drift " << drift << "; ";
  o.require(drift < 1e-8, "unitarity drift < 1e-8");

  NoiseModel n = paper_device::qubit1_noise();
  n.gamma_fg = 1e4;
  const auto ops = collapse_operators(n);
  const Trajectory tr = propagate_lindblad(ge_ef_drive, ops, QutritKet(1.0, 0.3, -0.7).projector(),
                                           TimeGrid::over(duration, 4096), 1);
  double herm = 0.0, eig = 0.0, trace = 0.0;
  for (const auto& s : tr.samples) {
    herm = std::max(herm, hermiticity_error(s.rho));
    eig = std::min(eig, min_eigenvalue(s.rho));
    trace = std::max(trace, std::abs(s.rho.trace() - 1.0));
  }
  o.detail << "hermiticity " << herm << ", min eigenvalue " << eig << ", trace error " << trace << "; ";
  o.require(herm < 1e-10, "hermiticity < 1e-10");
  o.require(eig > -1e-8, "min eigenvalue > -1e-8");
  o.require(trace < 1e-8, "trace error < 1e-8");

  NoiseModel strong = paper_device::qubit1_noise();
  strong.gamma_eg *= 200.0;
  strong.gamma_fe *= 200.0;
  strong.dephasing_ge *= 200.0;
  strong.dephasing_ef *= 200.0;
  const auto strong_ops = collapse_operators(strong);
  const ComplexMatrix rho0 = QutritKet(1.0, 0.2, 0.4).projector();
  const ComplexMatrix ref = evolve_density(ge_ef_drive, strong_ops, rho0, TimeGrid::over(duration, 4096));
  const double e1 =
      (evolve_density(ge_ef_drive, strong_ops, rho0, TimeGrid::over(duration, 32)) - ref).norm();
  const double e2 =
      (evolve_density(ge_ef_drive, strong_ops, rho0, TimeGrid::over(duration, 64)) - ref).norm();
  o.detail << "error ratio on halving dt " << e1 / e2;
  o.require(e1 / e2 >= 8.0, "error ratio >= 8");
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  void (*run)(Outcome&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "ideal synthesis", 30.0, ideal_synthesis},
      {2, "process tomography", 300.0, qpt_pipeline},
      {3, "randomized benchmarking", 600.0, randomized_benchmarking},
      {4, "cavity gates", 300.0, cavity_gates},
      {5, "robustness ordering", 1e9, robustness_ordering},
      {6, "fit round trips", 120.0, fit_round_trips},
      {7, "numerical hygiene", 60.0, numerical_hygiene},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s < 1e8) o.require(secs < c.budget_s, "runtime budget");
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s, %.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 7 criteria passed\n", 7 - failed);
  return failed == 0 ? 0 : 1;
}
