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

#include "holoqutrit/error.hpp"
#include "holoqutrit/model.hpp"
#include "holoqutrit/operators.hpp"

namespace holo {

/// |g>, |e>, |f>, then the six equal superpositions (+ and -i) of each pair.
std::vector<QutritKet> initial_states();
std::vector<std::string> initial_state_labels();

struct Prerotation {
  std::string label;
  ComplexMatrix unitary;
};

/// The nine measurement pre-rotations as ideal unitaries. Products in the labels
/// act right to left.
std::vector<Prerotation> prerotations();

/// Ideal rotation exp(-i angle/2 sigma) on the ge or ef pair; `axis` is 'x' or 'y'.
ComplexMatrix pair_rotation(Transition transition, char axis, double angle);

/// M_I = beta_a lambda_0 + beta_b lambda_3 + beta_c lambda_8.
struct MeasurementModel {
  double beta_a = 0.0;
  double beta_b = 0.0;
  double beta_c = 0.0;

  ComplexMatrix operator_matrix() const;
};

/// Coefficients that make M_I = |g><g| exactly.
MeasurementModel measurement_coefficients();

/// nullopt shots means exact expectation values.
struct Sampling {
  std::optional<long> shots;
  std::uint64_t seed = 0;
};

struct TomographyRecord {
  std::vector<std::string> input_labels;
  std::vector<std::string> prerotation_labels;
  Eigen::MatrixXd values;  // rows: inputs, cols: pre-rotations
  std::optional<long> shots;
  std::uint64_t seed = 0;

  std::string to_json() const;
  static TomographyRecord from_json(const std::string& text);
};

/// Record over `outputs` (one density matrix per input). With `channels`, the
/// k-th pre-rotation is applied as that superoperator instead of the ideal unitary.
TomographyRecord simulate_record(const std::vector<ComplexMatrix>& outputs,
                                 const MeasurementModel& mm, const Sampling& sampling,
                                 const std::vector<ComplexMatrix>& channels = {});

/// Nine expectation values of one state under the ideal pre-rotations.
Eigen::VectorXd predicted_values(const ComplexMatrix& rho, const MeasurementModel& mm);

struct MleOptions {
  int max_iterations = 2000;
  double tolerance = 1e-20;  // sum of squared residuals treated as an exact fit
  double ftol = 1e-10;       // relative decrease that ends the search
};

struct MleResult {
  ComplexMatrix rho;
  double residual = 0.0;  // ||predicted - observed||_2
  int iterations = 0;
};

/// Raised when the estimator runs out of iterations; carries the best iterate.
class MleConvergenceError : public Error {
 public:
  MleConvergenceError(MleResult best);
  const MleResult& best() const { return best_; }

 private:
  MleResult best_;
};

/// rho = T^dagger T / Tr(T^dagger T), T lower triangular, least squares on the
/// nine expectation values.
MleResult mle_density(const Eigen::VectorXd& values, const MeasurementModel& mm,
                      const MleOptions& options = {});

/// Linear inversion of the nine values (no positivity constraint).
ComplexMatrix linear_inversion(const Eigen::VectorXd& values, const MeasurementModel& mm);

struct ChiOptions {
  bool project_psd = false;
};

struct ChiResult {
  ComplexMatrix chi;  // over the normalized basis, divided by the dimension
  double residual = 0.0;  // sum over inputs of ||predicted - observed||_F
};

/// chi with rho_out = d * sum chi_mn E^_m rho_in E^_n^dagger over the
/// Hilbert-Schmidt normalized basis E^_m; Tr chi = 1 for trace-preserving maps.
ChiResult extract_chi(const std::vector<ComplexMatrix>& inputs,
                      const std::vector<ComplexMatrix>& outputs, const OperatorBasis& basis,
                      const ChiOptions& options = {});

/// chi of a superoperator (column-major vec) in the same convention.
ComplexMatrix chi_from_superoperator(const ComplexMatrix& superop, const OperatorBasis& basis);
ComplexMatrix superoperator_from_chi(const ComplexMatrix& chi, const OperatorBasis& basis);

ComplexMatrix chi_of_unitary(const ComplexMatrix& u, const OperatorBasis& basis);

struct ReducedChi {
  ComplexMatrix chi;  // 4x4 over {I, X, -iY, Z}
  double trace = 0.0;
};

/// 3/2 times the {I_gf, X_gf, -iY_gf, Z_gf} block of a full chi.
ReducedChi reduce_chi(const ComplexMatrix& full);

/// Ideal reduced chi of a 2x2 gate on {g,f}.
ComplexMatrix reduced_chi_of_unitary(const ComplexMatrix& u2);

double fidelity_att(const ComplexMatrix& exp, const ComplexMatrix& th);
double fidelity_unatt(const ComplexMatrix& exp, const ComplexMatrix& th);

std::vector<std::string> process_basis_labels();
std::vector<std::string> reduced_basis_labels();

/// CSV with columns row, col, real, imag.
void write_chi_csv(std::ostream& out, const ComplexMatrix& chi,
                   const std::vector<std::string>& labels);

struct QptOptions {
  Sampling sampling;
  bool project_psd = false;
  /// Simulated finite-duration pre-rotation pulses under this noise (ideal unitaries when unset).
  std::optional<NoiseModel> simulated_prerotations;
};

struct QptResult {
  TomographyRecord record;
  std::vector<ComplexMatrix> reconstructed;
  ComplexMatrix chi;
  ReducedChi reduced;
  ComplexMatrix reduced_target;
  double f_att = 0.0;
  double f_unatt = 0.0;
  double chi_residual = 0.0;
  double max_mle_residual = 0.0;
};

/// Full tomography of a qutrit channel against a 2x2 target on {g,f}.
QptResult run_qpt(const ComplexMatrix& superop, const ComplexMatrix& target2,
                  const QptOptions& options = {});

}  // namespace holo
