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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holoqutrit/holonomic.hpp"
#include "holoqutrit/model.hpp"
#include "holoqutrit/tomography.hpp"

namespace holo {

enum class GateFamily { holonomic, dynamic };

std::string to_string(GateFamily f);

struct CrosstalkConfig {
  GateFamily family = GateFamily::holonomic;
  std::string gate = "H";        // dynamic schedules exist for H and T
  std::vector<double> epsilons;  // relative Rabi error
  std::vector<double> detunings;  // rad/s
  Envelope envelope = default_qubit_envelope();
  int steps = 2048;
  int threads = 1;
};

/// 21 points over [-0.1, 0.1].
std::vector<double> default_epsilon_grid();
/// 21 points over 2 pi [-1, 1] MHz.
std::vector<double> default_detuning_grid();

/// Schedule and {g,f} target of a named gate in the given family.
GateSchedule crosstalk_schedule(GateFamily family, const std::string& gate, const Envelope& base);

struct FidelityGrid {
  std::vector<double> epsilons;
  std::vector<double> detunings;
  Eigen::MatrixXd fidelity;  // rows: epsilon, cols: detuning

  double mean() const { return fidelity.mean(); }
};

/// Noiseless propagation at every (epsilon, Delta); {g,f}-block process fidelity.
FidelityGrid crosstalk_sweep(const CrosstalkConfig& cfg);

/// First row: "epsilon" then detunings in Hz; each following row: epsilon then fidelities.
void write_grid_csv(std::ostream& out, const FidelityGrid& grid);
/// Canonical description of everything that determines the grid.
std::string crosstalk_settings_json(const CrosstalkConfig& cfg);
std::uint64_t crosstalk_settings_hash(const CrosstalkConfig& cfg);

/// Encode / cavity gate / decode on cavity (Fock 0, 1) x Q1 x Q2.
struct CavityPipelineConfig {
  HolonomicParams gate;  // gamma = 0 skips the gate stage
  /// Peak coupling of the gate; default keeps g1 at 2 pi 0.25 MHz.
  std::optional<double> coupling;
  bool include_decoherence = false;
  NoiseModel q1_noise = paper_device::qubit1_noise();
  NoiseModel q2_noise = paper_device::qubit2_noise();
  double cavity_t1 = paper_device::kCavityT1;
  double cavity_t2 = paper_device::kCavityT2;
  double swap_coupling = 2.0 * kPi * 0.845e6;  // rad/s
  double ramp = 10e-9;
  Sampling sampling;  // Q2 readout; exact by default
  int steps = 2048;   // per stage
  int threads = 1;
};

/// g with g sin(theta/2) = 2 pi 0.25 MHz.
double default_cavity_coupling(double theta);

struct PipelineRun {
  ComplexMatrix chi;  // 4x4 over {I, X, -iY, Z}
  double f_att = 0.0;
  double f_unatt = 0.0;
  double trace = 0.0;
  std::vector<ComplexMatrix> q2_states;  // reconstructed Q2 states per input
};

struct CavityPipelineResult {
  PipelineRun gate;
  PipelineRun reference;  // encode / decode only, against the identity
  ComplexMatrix target;   // 2x2
  ComplexMatrix chi_target;
  double decode_phase = 0.0;
  double loss = 0.0;  // reference.f_att - gate.f_att
  double swap_duration = 0.0;
  double gate_duration = 0.0;
};

/// Input labels g, f, g+f, g-if of the Q2 qubit.
std::vector<std::string> cavity_input_labels();

CavityPipelineResult cavity_pipeline(const CavityPipelineConfig& cfg);

}  // namespace holo
