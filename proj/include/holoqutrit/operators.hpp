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

#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Qutrit level indices in every 3x3 matrix of the library.
inline constexpr int kG = 0;
inline constexpr int kE = 1;
inline constexpr int kF = 2;

/// Normalized three-level ket over {|g>, |e>, |f>}.
class QutritKet {
 public:
  /// Normalizes the given amplitudes; throws InvalidArgument on a zero vector.
  QutritKet(Complex g, Complex e, Complex f);

  static QutritKet ground() { return {1.0, 0.0, 0.0}; }
  static QutritKet excited() { return {0.0, 1.0, 0.0}; }
  static QutritKet second() { return {0.0, 0.0, 1.0}; }

  const Eigen::Vector3cd& amplitudes() const { return amps_; }
  Complex operator[](int level) const { return amps_(level); }
  ComplexVector vector() const { return amps_; }
  ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Eigen::Vector3cd amps_;
};

struct OperatorBasis {
  std::string label;
  std::vector<ComplexMatrix> elements;

  std::size_t size() const { return elements.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return elements[i]; }
};

/// lambda_0 = I (unnormalized), lambda_1..lambda_8 the standard Gell-Mann set
/// over (g, e, f).
OperatorBasis gellmann_basis();

/// {I_gf, sx_gf, -i sy_gf, sz_gf, sx_ge, -i sy_ge, sx_ef, -i sy_ef, I_e}.
OperatorBasis process_basis_gf();

/// {I, X, -iY, Z} on a two-level space.
OperatorBasis pauli_basis_reduced();

/// Lifts a 2x2 gate on span{|g>,|f>} to the qutrit, identity on |e>.
ComplexMatrix embed_gf(const ComplexMatrix& u2);

/// The {g,f} block of a 3x3 operator (rows/cols 0 and 2).
ComplexMatrix gf_block(const ComplexMatrix& m3);

/// exp(-i h t) for Hermitian h (angular-frequency units, t in seconds).
ComplexMatrix matrix_exp(const ComplexMatrix& h, double t);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double unitarity_error(const ComplexMatrix& u);
double hermiticity_error(const ComplexMatrix& h);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);
bool is_hermitian(const ComplexMatrix& h, double tol = 1e-10);

/// min over phi of ||u - e^{i phi} v||_F, attained at phi = arg Tr(v^dagger u).
double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v);
bool equal_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v,
                       double tol = 1e-10);

/// |Tr(target^dagger u)|^2 / n^2 for n x n matrices; u need not be unitary
/// (a leaky block gives a value below one).
double gate_process_fidelity(const ComplexMatrix& u, const ComplexMatrix& target);

/// Trace distance 0.5 * ||a - b||_1 between Hermitian matrices.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const ComplexMatrix& h);

/// Column-major vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows);

}  // namespace holo
