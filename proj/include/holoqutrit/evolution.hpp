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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "holoqutrit/model.hpp"
#include "holoqutrit/operators.hpp"

namespace holo {

/// Fixed-step grid over [t0, t1]. The step is snapped so an integer number of
/// steps covers the interval exactly.
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, double dt);

  /// `steps` equal steps over [0, duration].
  static TimeGrid over(double duration, int steps = 4096);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }
  double time(int k) const { return t0_ + (t1_ - t0_) * k / steps_; }

 private:
  double t0_;
  double t1_;
  double dt_;
  int steps_;
};

struct TrajectorySample {
  double time = 0.0;
  ComplexMatrix rho;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;

  const ComplexMatrix& final_state() const { return samples.back().rho; }
};

/// Midpoint-rule time-ordered propagator, latest step on the left.
ComplexMatrix propagate_unitary(const TimeDependentOperator& h, const TimeGrid& grid);

/// Fixed-step RK4 integration of the Lindblad equation. Samples are recorded
/// every `stride` steps plus the final time. Throws StepTooLarge when the
/// trace drifts by more than 1e-6.
Trajectory propagate_lindblad(const TimeDependentOperator& h,
                              std::span<const CollapseOperator> collapse,
                              const ComplexMatrix& rho0, const TimeGrid& grid, int stride = 1);

/// Final state only; same integrator as propagate_lindblad.
ComplexMatrix evolve_density(const TimeDependentOperator& h,
                             std::span<const CollapseOperator> collapse, const ComplexMatrix& rho0,
                             const TimeGrid& grid);

/// Superoperator S (d^2 x d^2, column-major vec) of the evolution:
/// vec(rho_T) = S vec(rho_0).
ComplexMatrix channel_superoperator(const TimeDependentOperator& h,
                                    std::span<const CollapseOperator> collapse, Eigen::Index dim,
                                    const TimeGrid& grid);

/// Superoperator of a unitary: conj(U) (x) U.
ComplexMatrix unitary_superoperator(const ComplexMatrix& u);

ComplexMatrix apply_channel(const ComplexMatrix& superop, const ComplexMatrix& rho);

/// Lifts an operator on one factor of a tensor product to the full space.
ComplexMatrix lift(const ComplexMatrix& op, std::span<const Eigen::Index> dims, std::size_t which);

/// Evolves each input ket through the schedule: unitary when the noise
/// model is empty, Lindblad otherwise.
std::vector<ComplexMatrix> process_map(const PulseSchedule& schedule, const NoiseModel& noise,
                                       std::span<const QutritKet> inputs,
                                       const ControlError& err = {}, int steps = 4096);

/// 3x3 superoperator of a qutrit schedule (9x9).
ComplexMatrix qutrit_channel(const PulseSchedule& schedule, const NoiseModel& noise,
                             const ControlError& err = {}, int steps = 4096);

/// Content hash (FNV-1a) of everything that determines qutrit_channel.
std::uint64_t schedule_key(const PulseSchedule& schedule, const NoiseModel& noise,
                           const ControlError& err, int steps);

/// Thread-safe insert-or-get store of computed propagators / channels.
class PropagatorCache {
 public:
  ComplexMatrix get_or_compute(std::uint64_t key, const std::function<ComplexMatrix()>& compute);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, ComplexMatrix> entries_;
  std::size_t hits_ = 0;
};

/// CSV with columns time_s, P_g, P_e, P_f, |rho_ge|, |rho_ef|, |rho_gf|
/// (qutrit trajectories).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace holo
