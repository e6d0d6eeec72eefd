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

namespace holo {

struct RbConfig {
  std::vector<int> lengths;
  int randomizations = 100;
  std::uint64_t seed = 0;
  std::optional<std::string> interleaved;  // named Clifford gate
  NoiseModel noise;
  ControlError error;
  /// Strength d of a qubit depolarizing channel applied after every gate.
  double depolarizing = 0.0;
  Envelope envelope = default_qubit_envelope();
  EnvelopeSplit split = EnvelopeSplit::single;
  int steps = 4096;
  int threads = 1;
};

struct RbSequence {
  std::vector<std::size_t> cliffords;  // indices into the Clifford group, time order
  std::size_t recovery = 0;

  std::vector<HolonomicParams> params() const;
  HolonomicParams recovery_params() const;
};

/// m uniform Clifford draws; with `interleaved`, that element follows every draw and the
/// recovery inverts the whole interleaved product.
RbSequence random_sequence(int m, std::uint64_t seed,
                           std::optional<std::size_t> interleaved = std::nullopt);

struct RbFit {
  double a = 0.0;
  double p = 0.0;
  double b = 0.0;
  double f_avg = 0.0;
  double ssr = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

/// F(m) = A p^m + B by bounded least squares. Initial A = max - min, B = min, p from a
/// log-linear regression of mean - B. Raises FitDivergence on data without decay.
RbFit fit_rb(const std::vector<int>& lengths, const std::vector<double>& means);

/// 1 - (1 - p_gate / p_ref) / 2.
double interleaved_fidelity(double p_gate, double p_ref);

struct RbRecord {
  std::vector<int> lengths;
  std::vector<double> means;
  std::vector<double> stddevs;
  int randomizations = 0;
  std::vector<std::vector<double>> survivals;  // [length][sequence]
  RbFit fit;
  bool no_decay = false;  // all means equal: reported as p = 1
};

struct RbResult {
  RbRecord reference;
  std::optional<RbRecord> interleaved;
  std::optional<std::string> interleaved_gate;
  std::optional<double> f_gate;
  std::string note;  // set when F_gate is not defined
};

RbResult run_rb(const RbConfig& cfg);

/// Columns m, mean, stddev, k.
void write_rb_csv(std::ostream& out, const RbRecord& record);
std::string rb_summary_json(const RbResult& result);

}  // namespace holo
