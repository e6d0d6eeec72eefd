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

#include "holoqutrit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holoqutrit/error.hpp"

namespace holo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroArea: return "ZeroArea";
    case ErrorCode::BadTransition: return "BadTransition";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::BadShotCount: return "BadShotCount";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::SingularInputSpan: return "SingularInputSpan";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FitDivergence: return "FitDivergence";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

QutritKet::QutritKet(Complex g, Complex e, Complex f) : amps_(g, e, f) {
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "QutritKet needs a nonzero finite vector");
  }
  amps_ /= n;
}

namespace {

ComplexMatrix outer(int row, int col, Complex value = 1.0) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(row, col) = value;
  return m;
}

// sx on the pair (a, b) with |a> playing the role of |0>.
ComplexMatrix pair_x(int a, int b) { return outer(a, b) + outer(b, a); }
ComplexMatrix pair_y(int a, int b) { return outer(a, b, -kI) + outer(b, a, kI); }
ComplexMatrix pair_z(int a, int b) { return outer(a, a) - outer(b, b); }

}  // namespace

OperatorBasis gellmann_basis() {
  OperatorBasis basis{"gell-mann", {}};
  basis.elements.reserve(9);
  basis.elements.push_back(ComplexMatrix::Identity(3, 3));
  basis.elements.push_back(pair_x(kG, kE));
  basis.elements.push_back(pair_y(kG, kE));
  basis.elements.push_back(pair_z(kG, kE));
  basis.elements.push_back(pair_x(kG, kF));
  basis.elements.push_back(pair_y(kG, kF));
  basis.elements.push_back(pair_x(kE, kF));
  basis.elements.push_back(pair_y(kE, kF));
  ComplexMatrix l8 = ComplexMatrix::Zero(3, 3);
  l8.diagonal() << 1.0, 1.0, -2.0;
  basis.elements.push_back(l8 / std::sqrt(3.0));
  return basis;
}

OperatorBasis process_basis_gf() {
  OperatorBasis basis{"gf-process", {}};
  basis.elements.reserve(9);
  basis.elements.push_back(outer(kG, kG) + outer(kF, kF));
  basis.elements.push_back(pair_x(kG, kF));
  basis.elements.push_back(-kI * pair_y(kG, kF));
  basis.elements.push_back(pair_z(kG, kF));
  basis.elements.push_back(pair_x(kG, kE));
  basis.elements.push_back(-kI * pair_y(kG, kE));
  basis.elements.push_back(pair_x(kE, kF));
  basis.elements.push_back(-kI * pair_y(kE, kF));
  basis.elements.push_back(outer(kE, kE));
  return basis;
}

OperatorBasis pauli_basis_reduced() {
  OperatorBasis basis{"pauli-reduced", {}};
  ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix x(2, 2), my(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  my << 0, -1, 1, 0;  // -i * sy
  z << 1, 0, 0, -1;
  basis.elements = {i2, x, my, z};
  return basis;
}

ComplexMatrix embed_gf(const ComplexMatrix& u2) {
  if (u2.rows() != 2 || u2.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "embed_gf expects a 2x2 matrix");
  }
  if (unitarity_error(u2) > 1e-10) {
    throw Error(ErrorCode::NonUnitaryInput, "embed_gf input is not unitary");
  }
  ComplexMatrix u3 = ComplexMatrix::Zero(3, 3);
  const int idx[2] = {kG, kF};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) u3(idx[r], idx[c]) = u2(r, c);
  }
  u3(kE, kE) = 1.0;
  return u3;
}

ComplexMatrix gf_block(const ComplexMatrix& m3) {
  ComplexMatrix b(2, 2);
  b << m3(kG, kG), m3(kG, kF), m3(kF, kG), m3(kF, kF);
  return b;
}

ComplexMatrix matrix_exp(const ComplexMatrix& h, double t) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix_exp needs a square matrix");
  }
  if (hermiticity_error(h) > 1e-10 * std::max(1.0, h.norm())) {
    throw Error(ErrorCode::NonHermitianInput, "matrix_exp input is not Hermitian");
  }
  if (t == 0.0) return ComplexMatrix::Identity(h.rows(), h.cols());
  const ComplexMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
  const Eigen::VectorXd& w = solver.eigenvalues();
  const ComplexMatrix& v = solver.eigenvectors();
  ComplexVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, -w(i) * t);
  return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

double unitarity_error(const ComplexMatrix& u) {
  const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  return u.rows() == u.cols() && unitarity_error(u) < tol;
}

bool is_hermitian(const ComplexMatrix& h, double tol) { return hermiticity_error(h) < tol; }

double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "phase_distance shape mismatch");
  }
  const Complex overlap = hs_inner(v, u);
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : 1.0;
  return (u - phase * v).norm();
}

bool equal_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol) {
  return phase_distance(u, v) < tol;
}

double gate_process_fidelity(const ComplexMatrix& u, const ComplexMatrix& target) {
  if (u.rows() != target.rows() || u.cols() != target.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "gate_process_fidelity shape mismatch");
  }
  const double n = static_cast<double>(u.rows());
  return std::norm(hs_inner(target, u)) / (n * n);
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix d = a - b;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (d + d.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, v.size() / rows);
}

}  // namespace holo
