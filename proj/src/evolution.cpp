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

#include "holoqutrit/evolution.hpp"

#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>

#include <Eigen/Sparse>

#include "holoqutrit/error.hpp"

namespace holo {

namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;

constexpr double kTraceDriftLimit = 1e-6;

struct Dissipator {
  ComplexMatrix anticommutator;  // sum L^dagger L
  std::vector<SparseOp> jumps;
  std::vector<SparseOp> jumps_adjoint;
};

Dissipator make_dissipator(std::span<const CollapseOperator> collapse, Eigen::Index dim) {
  Dissipator d;
  d.anticommutator = ComplexMatrix::Zero(dim, dim);
  for (const CollapseOperator& c : collapse) {
    if (c.rate < 0.0) throw Error(ErrorCode::NegativeRate, "collapse rate must be >= 0");
    if (c.op.rows() != dim || c.op.cols() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "collapse operator dimension mismatch");
    }
    if (c.rate == 0.0) continue;
    const ComplexMatrix l = c.scaled();
    d.anticommutator += l.adjoint() * l;
    d.jumps.push_back(l.sparseView());
    d.jumps_adjoint.push_back(l.adjoint().sparseView());
  }
  return d;
}

// d rho / dt for Hermitian rho: Y + Y^dagger + sum L rho L^dagger with
// Y = -i H_eff rho and H_eff = H - (i/2) sum L^dagger L.
void lindblad_rhs(const ComplexMatrix& h, const Dissipator& d, const ComplexMatrix& rho,
                  ComplexMatrix& out) {
  ComplexMatrix heff = h;
  heff.noalias() -= 0.5 * kI * d.anticommutator;
  ComplexMatrix y = (-kI * heff) * rho;
  out = y + y.adjoint();
  for (std::size_t k = 0; k < d.jumps.size(); ++k) {
    ComplexMatrix lr = d.jumps[k] * rho;
    out.noalias() += lr * d.jumps_adjoint[k];
  }
}

void check_hamiltonian(const ComplexMatrix& h, Eigen::Index dim) {
  if (h.rows() != dim || h.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian dimension mismatch");
  }
  if (hermiticity_error(h) > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NonHermitianInput, "Hamiltonian is not Hermitian");
  }
}

// Batched RK4 over several Hermitian states sharing one Hamiltonian
// evaluation per stage. Stage times at the step edges are nudged inward so
// piecewise schedules are read on the correct side of a switch.
void rk4_batch(const TimeDependentOperator& h, const Dissipator& d, std::vector<ComplexMatrix>& states,
               const TimeGrid& grid, const std::function<void(int, double)>& on_step) {
  const Eigen::Index dim = states.front().rows();
  std::vector<Complex> initial_trace;
  for (const auto& s : states) initial_trace.push_back(s.trace());

  ComplexMatrix k1, k2, k3, k4, tmp;
  const double dt = grid.dt();
  const double nudge = 1e-9 * dt;
  for (int step = 0; step < grid.steps(); ++step) {
    const double t = grid.time(step);
    const ComplexMatrix h1 = h(t + nudge);
    const ComplexMatrix h2 = h(t + 0.5 * dt);
    const ComplexMatrix h4 = h(t + dt - nudge);
    if (step == 0) check_hamiltonian(h1, dim);
    for (ComplexMatrix& rho : states) {
      lindblad_rhs(h1, d, rho, k1);
      tmp = rho + (0.5 * dt) * k1;
      lindblad_rhs(h2, d, tmp, k2);
      tmp = rho + (0.5 * dt) * k2;
      lindblad_rhs(h2, d, tmp, k3);
      tmp = rho + dt * k3;
      lindblad_rhs(h4, d, tmp, k4);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (on_step) on_step(step + 1, grid.time(step + 1));
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double drift = std::abs(states[i].trace() - initial_trace[i]);
    if (drift > kTraceDriftLimit) {
      throw Error(ErrorCode::StepTooLarge, "trace drift exceeds 1e-6; reduce the step");
    }
  }
}

// Hermitian operator basis of d x d matrices: diagonal units, then symmetric
// and antisymmetric off-diagonal pairs.
std::vector<ComplexMatrix> hermitian_basis(Eigen::Index dim) {
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index i = 0; i < dim; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(i, i) = 1.0;
    basis.push_back(m);
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
      s(i, j) = 1.0;
      s(j, i) = 1.0;
      basis.push_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
      a(i, j) = -kI;
      a(j, i) = kI;
      basis.push_back(a);
    }
  }
  return basis;
}

template <class T>
void hash_bytes(std::uint64_t& h, const T& value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t1, double dt) : t0_(t0), t1_(t1) {
  if (!(dt > 0.0) || !(t1 > t0)) {
    throw Error(ErrorCode::InvalidArgument, "TimeGrid needs dt > 0 and t1 > t0");
  }
  steps_ = static_cast<int>(std::ceil((t1 - t0) / dt - 1e-9));
  if (steps_ < 10) throw Error(ErrorCode::InvalidArgument, "TimeGrid needs at least 10 steps");
  dt_ = (t1 - t0) / steps_;
}

TimeGrid TimeGrid::over(double duration, int steps) {
  if (steps < 10) throw Error(ErrorCode::InvalidArgument, "TimeGrid needs at least 10 steps");
  return TimeGrid(0.0, duration, duration / steps);
}

ComplexMatrix propagate_unitary(const TimeDependentOperator& h, const TimeGrid& grid) {
  ComplexMatrix u;
  for (int step = 0; step < grid.steps(); ++step) {
    const ComplexMatrix hm = h(grid.time(step) + 0.5 * grid.dt());
    if (step == 0) {
      if (hm.rows() != hm.cols()) throw Error(ErrorCode::DimensionMismatch, "Hamiltonian not square");
      u = ComplexMatrix::Identity(hm.rows(), hm.cols());
    }
    try {
      u = matrix_exp(hm, grid.dt()) * u;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonHermitianInput) {
        throw Error(ErrorCode::NonHermitianInput, "Hamiltonian not Hermitian on the grid");
      }
      throw;
    }
  }
  return u;
}

Trajectory propagate_lindblad(const TimeDependentOperator& h,
                              std::span<const CollapseOperator> collapse,
                              const ComplexMatrix& rho0, const TimeGrid& grid, int stride) {
  if (rho0.rows() != rho0.cols()) throw Error(ErrorCode::DimensionMismatch, "rho0 not square");
  if (hermiticity_error(rho0) > 1e-10 || std::abs(rho0.trace() - 1.0) > 1e-8 ||
      min_eigenvalue(rho0) < -1e-10) {
    throw Error(ErrorCode::InvalidArgument, "rho0 is not a valid density matrix");
  }
  stride = std::max(stride, 1);
  const Dissipator d = make_dissipator(collapse, rho0.rows());
  std::vector<ComplexMatrix> states = {rho0};
  Trajectory traj;
  traj.samples.push_back({grid.t0(), rho0});
  rk4_batch(h, d, states, grid, [&](int step, double t) {
    if (step % stride == 0 || step == grid.steps()) traj.samples.push_back({t, states.front()});
  });
  return traj;
}

ComplexMatrix evolve_density(const TimeDependentOperator& h,
                             std::span<const CollapseOperator> collapse, const ComplexMatrix& rho0,
                             const TimeGrid& grid) {
  const Dissipator d = make_dissipator(collapse, rho0.rows());
  std::vector<ComplexMatrix> states = {rho0};
  rk4_batch(h, d, states, grid, {});
  return states.front();
}

ComplexMatrix channel_superoperator(const TimeDependentOperator& h,
                                    std::span<const CollapseOperator> collapse, Eigen::Index dim,
                                    const TimeGrid& grid) {
  const Dissipator d = make_dissipator(collapse, dim);
  std::vector<ComplexMatrix> states = hermitian_basis(dim);
  const Eigen::Index n = dim * dim;
  ComplexMatrix in(n, n), out(n, n);
  for (Eigen::Index k = 0; k < n; ++k) in.col(k) = vec(states[k]);
  rk4_batch(h, d, states, grid, {});
  for (Eigen::Index k = 0; k < n; ++k) out.col(k) = vec(states[k]);
  return out * in.inverse();
}

ComplexMatrix unitary_superoperator(const ComplexMatrix& u) { return kron(u.conjugate(), u); }

ComplexMatrix apply_channel(const ComplexMatrix& superop, const ComplexMatrix& rho) {
  if (superop.cols() != rho.size()) {
    throw Error(ErrorCode::DimensionMismatch, "channel/state dimension mismatch");
  }
  return unvec(superop * vec(rho), rho.rows());
}

ComplexMatrix lift(const ComplexMatrix& op, std::span<const Eigen::Index> dims, std::size_t which) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i == which) {
      if (op.rows() != dims[i]) throw Error(ErrorCode::DimensionMismatch, "lift factor mismatch");
      out = kron(out, op);
    } else {
      out = kron(out, ComplexMatrix::Identity(dims[i], dims[i]));
    }
  }
  return out;
}

std::vector<ComplexMatrix> process_map(const PulseSchedule& schedule, const NoiseModel& noise,
                                       std::span<const QutritKet> inputs, const ControlError& err,
                                       int steps) {
  const ComplexMatrix s = qutrit_channel(schedule, noise, err, steps);
  std::vector<ComplexMatrix> out;
  out.reserve(inputs.size());
  for (const QutritKet& k : inputs) out.push_back(apply_channel(s, k.projector()));
  return out;
}

ComplexMatrix qutrit_channel(const PulseSchedule& schedule, const NoiseModel& noise,
                             const ControlError& err, int steps) {
  auto h = [&](double t) { return qutrit_drive_hamiltonian(schedule, err, t); };
  if (schedule.duration <= 0.0) {
    return ComplexMatrix::Identity(9, 9);
  }
  const TimeGrid grid = TimeGrid::over(schedule.duration, steps);
  if (noise.empty()) return unitary_superoperator(propagate_unitary(h, grid));
  const auto ops = collapse_operators(noise);
  return channel_superoperator(h, ops, 3, grid);
}

std::uint64_t schedule_key(const PulseSchedule& schedule, const NoiseModel& noise,
                           const ControlError& err, int steps) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const PulseSegment& seg : schedule.segments) {
    hash_bytes(h, seg.envelope.shape.index());
    std::visit([&](const auto& shape) { hash_bytes(h, shape); }, seg.envelope.shape);
    hash_bytes(h, seg.envelope.peak);
    hash_bytes(h, seg.transition);
    hash_bytes(h, seg.phase);
    hash_bytes(h, seg.start);
    hash_bytes(h, seg.weight);
    hash_bytes(h, seg.window_offset);
    hash_bytes(h, seg.length);
  }
  hash_bytes(h, schedule.duration);
  hash_bytes(h, schedule.drag.enabled);
  hash_bytes(h, schedule.drag.coefficient);
  hash_bytes(h, schedule.drag.anharmonicity);
  hash_bytes(h, noise);
  hash_bytes(h, err);
  hash_bytes(h, steps);
  return h;
}

ComplexMatrix PropagatorCache::get_or_compute(std::uint64_t key,
                                              const std::function<ComplexMatrix()>& compute) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ComplexMatrix value = compute();
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, std::move(value));
  if (!inserted) ++hits_;
  return it->second;
}

std::size_t PropagatorCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t PropagatorCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "time_s,P_g,P_e,P_f,abs_rho_ge,abs_rho_ef,abs_rho_gf\n";
  out << std::setprecision(12);
  for (const auto& s : traj.samples) {
    const ComplexMatrix& r = s.rho;
    out << s.time << ',' << r(kG, kG).real() << ',' << r(kE, kE).real() << ','
        << r(kF, kF).real() << ',' << std::abs(r(kG, kE)) << ',' << std::abs(r(kE, kF)) << ','
        << std::abs(r(kG, kF)) << '\n';
  }
}

}  // namespace holo
