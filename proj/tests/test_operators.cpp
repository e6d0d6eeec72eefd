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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "holoqutrit/error.hpp"
#include "holoqutrit/operators.hpp"

using namespace holo;

namespace {

ComplexMatrix diag3(Complex a, Complex b, Complex c) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m.diagonal() << a, b, c;
  return m;
}

// Taylor series with scaling and squaring, independent of the eigensolver path.
ComplexMatrix series_exp(const ComplexMatrix& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.125) {
    norm /= 2.0;
    ++squarings;
  }
  const ComplexMatrix s = a / std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * s / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("gell-mann basis") {
  const OperatorBasis b = gellmann_basis();
  REQUIRE(b.size() == 9);
  CHECK((b[3] - diag3(1, -1, 0)).norm() < 1e-15);
  CHECK((b[0] - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);
  CHECK(std::abs((b[8] * b[8]).trace() - 2.0) < 1e-14);
  for (int i = 1; i < 9; ++i) {
    for (int j = 1; j < 9; ++j) {
      const Complex tr = (b[i] * b[j]).trace();
      CHECK(std::abs(tr - (i == j ? 2.0 : 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("process basis over the gf subspace") {
  const OperatorBasis b = process_basis_gf();
  REQUIRE(b.size() == 9);
  CHECK((b[0] - diag3(1, 0, 1)).norm() < 1e-15);
  CHECK((b[8] - diag3(0, 1, 0)).norm() < 1e-15);
  Eigen::Vector3cd g(1, 0, 0), f(0, 0, 1);
  CHECK(((b[1] * g) - f).norm() < 1e-15);
  int pairs = 0;
  for (int m = 0; m < 9; ++m) {
    for (int n = m + 1; n < 9; ++n) {
      CHECK(std::abs(hs_inner(b[m], b[n])) < 1e-15);
      ++pairs;
    }
  }
  CHECK(pairs == 36);
}

TEST_CASE("embed_gf") {
  CHECK((embed_gf(ComplexMatrix::Identity(2, 2)) - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  ComplexMatrix perm = ComplexMatrix::Zero(3, 3);
  perm(0, 2) = perm(2, 0) = perm(1, 1) = 1.0;
  CHECK((embed_gf(x) - perm).norm() < 1e-15);
  ComplexMatrix z(2, 2);
  z << -kI, 0, 0, kI;
  CHECK((embed_gf(z) - diag3(-kI, 1, kI)).norm() < 1e-15);
  ComplexMatrix bad(2, 2);
  bad << 1, 1, 0, 1;
  try {
    embed_gf(bad);
    FAIL("expected NonUnitaryInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonUnitaryInput);
  }
}

TEST_CASE("matrix_exp") {
  CHECK((matrix_exp(ComplexMatrix::Zero(3, 3), 0.7) - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK((matrix_exp(x * (kPi / 2.0), 1.0) - (-kI * x)).norm() < 1e-14);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 3);
    const ComplexMatrix u = matrix_exp(h, 0.9);
    CHECK((u - series_exp(-kI * 0.9 * h)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitarity_error(u) < 1e-12);
  }
  ComplexMatrix nh = ComplexMatrix::Zero(3, 3);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(matrix_exp(nh, 1.0), Error);
}

TEST_CASE("phase-insensitive comparisons") {
  std::mt19937_64 rng(11);
  const ComplexMatrix u = matrix_exp(random_hermitian(rng, 3), 1.0);
  CHECK(equal_up_to_phase(std::polar(1.0, 0.83) * u, u));
  CHECK(gate_process_fidelity(std::polar(1.0, -2.1) * u, u) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(equal_up_to_phase(u, ComplexMatrix::Identity(3, 3), 1e-6));
}

TEST_CASE("vec and kron conventions") {
  ComplexMatrix a(2, 2), rho(2, 2), b(2, 2);
  a << 1, kI, 2, 3;
  b << 0.5, -1, kI, 2;
  rho << 1, 2, 3, 4;
  // vec(A rho B) = (B^T (x) A) vec(rho)
  CHECK((vec(a * rho * b) - kron(b.transpose(), a) * vec(rho)).norm() < 1e-13);
  CHECK((unvec(vec(rho), 2) - rho).norm() == 0.0);
}

TEST_CASE("trace distance and spectrum helpers") {
  const ComplexMatrix p0 = diag3(1, 0, 0);
  const ComplexMatrix p1 = diag3(0, 1, 0);
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(diag3(0.5, -0.25, 2)) == doctest::Approx(-0.25));
}

TEST_CASE("qutrit kets normalize") {
  QutritKet k(1.0, 0.0, 1.0);
  CHECK(std::abs(k.amplitudes().norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(QutritKet(0.0, 0.0, 0.0), Error);
}
