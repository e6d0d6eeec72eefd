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

#include <fstream>
#include <random>
#include <sstream>

#include "holoqutrit/evolution.hpp"
#include "holoqutrit/holonomic.hpp"
#include "holoqutrit/tomography.hpp"

using namespace holo;

namespace {

ComplexMatrix random_density(std::mt19937_64& rng, int rank = 3) {
  std::normal_distribution<double> n;
  ComplexMatrix a(3, rank);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = Complex(n(rng), n(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

std::vector<ComplexMatrix> input_projectors() {
  std::vector<ComplexMatrix> out;
  for (const auto& k : initial_states()) out.push_back(k.projector());
  return out;
}

ComplexMatrix load_golden_chi(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  ComplexMatrix chi = ComplexMatrix::Zero(9, 9);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string f[4];
    for (auto& x : f) std::getline(ss, x, ',');
    chi(std::stoi(f[0]), std::stoi(f[1])) = Complex(std::stod(f[2]), std::stod(f[3]));
  }
  return chi;
}

ComplexMatrix unit(int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("initial states") {
  const auto s = initial_states();
  REQUIRE(s.size() == 9);
  CHECK((s[0].vector() - QutritKet::ground().vector()).norm() == 0.0);
  CHECK((s[5].vector() - QutritKet(1, 0, 1).vector()).norm() < 1e-15);
  Eigen::MatrixXcd gram(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) gram(i, j) = hs_inner(s[i].projector(), s[j].projector());
  CHECK(Eigen::FullPivLU<Eigen::MatrixXcd>(gram).rank() == 9);
}

TEST_CASE("pre-rotations") {
  const auto r = prerotations();
  REQUIRE(r.size() == 9);
  CHECK((r[0].unitary - ComplexMatrix::Identity(3, 3)).norm() == 0.0);
  const ComplexVector g = QutritKet::ground().vector();
  const ComplexVector e3 = r[3].unitary * g;
  CHECK(std::abs(e3(kE) - (-kI)) < 1e-15);
  // element 8 reads out |f>: applied right to left it maps |f> to |g>
  const ComplexVector f8 = r[8].unitary * QutritKet::second().vector();
  CHECK(std::abs(std::abs(f8(kG)) - 1.0) < 1e-15);
  for (const auto& p : r) CHECK(unitarity_error(p.unitary) < 1e-15);
  // the rotated measurement operators are informationally complete
  const ComplexMatrix m = measurement_coefficients().operator_matrix();
  const OperatorBasis l = gellmann_basis();
  Eigen::MatrixXd a(9, 9);
  for (int k = 0; k < 9; ++k)
    for (int j = 0; j < 9; ++j)
      a(k, j) = (r[k].unitary.adjoint() * m * r[k].unitary * l[j]).trace().real();
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(a).rank() == 9);
}

TEST_CASE("measurement coefficients") {
  const MeasurementModel mm = measurement_coefficients();
  CHECK(mm.beta_a == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(mm.beta_b == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(mm.beta_c == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK((mm.operator_matrix() - unit(kG, kG)).norm() < 1e-12);
}

TEST_CASE("simulated records") {
  const MeasurementModel mm = measurement_coefficients();
  const auto in = input_projectors();
  const TomographyRecord rec = simulate_record(in, mm, {});
  CHECK(rec.values(0, 0) == doctest::Approx(1.0));
  CHECK(rec.values(1, 3) == doctest::Approx(1.0));
  CHECK(rec.values(5, 0) == doctest::Approx(0.5));
  CHECK(rec.values.minCoeff() >= -1e-12);
  CHECK(rec.values.maxCoeff() <= 1.0 + 1e-12);
  CHECK_THROWS_AS(simulate_record(in, mm, {0L, 1}), Error);

  // sampled values converge like 1/sqrt(shots)
  double err_lo = 0.0, err_hi = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    err_lo += (simulate_record(in, mm, {1000L, seed}).values - rec.values).norm();
    err_hi += (simulate_record(in, mm, {100000L, seed}).values - rec.values).norm();
  }
  CHECK(err_lo / err_hi == doctest::Approx(10.0).epsilon(0.3));
  const auto a = simulate_record(in, mm, {500L, 42});
  const auto b = simulate_record(in, mm, {500L, 42});
  CHECK((a.values - b.values).norm() == 0.0);

  const TomographyRecord back = TomographyRecord::from_json(a.to_json());
  CHECK(back.values == a.values);
  CHECK(back.shots == a.shots);
  CHECK(back.seed == 42);
  CHECK(back.prerotation_labels == a.prerotation_labels);
}

TEST_CASE("maximum-likelihood density") {
  const MeasurementModel mm = measurement_coefficients();
  const MleResult pure = mle_density(predicted_values(unit(kG, kG), mm), mm);
  CHECK(pure.rho(kG, kG).real() > 1.0 - 1e-6);
  const MleResult mixed = mle_density(predicted_values(ComplexMatrix::Identity(3, 3) / 3.0, mm), mm);
  CHECK((mixed.rho - ComplexMatrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-6);

  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix rho = random_density(rng, 1 + i % 3);
    const MleResult r = mle_density(predicted_values(rho, mm), mm);
    CHECK(trace_distance(r.rho, rho) < 1e-5);
    CHECK(min_eigenvalue(r.rho) > -1e-12);
    CHECK(std::abs(r.rho.trace() - 1.0) < 1e-12);
  }
  // noisy data stays physical
  const auto rec = simulate_record({random_density(rng)}, mm, {200L, 3});
  const MleResult noisy = mle_density(rec.values.row(0).transpose(), mm);
  CHECK(min_eigenvalue(noisy.rho) > -1e-12);
}

TEST_CASE("chi extraction") {
  const OperatorBasis basis = process_basis_gf();
  const auto in = input_projectors();
  const ComplexMatrix golden = load_golden_chi(std::string(HOLO_GOLDEN_DIR) + "/identity_chi.csv");
  const ChiResult id = extract_chi(in, in, basis);
  CHECK((id.chi - golden).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(id.residual < 1e-12);

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const ComplexMatrix u = embed_gf(x);
  std::vector<ComplexMatrix> out;
  for (const auto& r : in) out.push_back(u * r * u.adjoint());
  const ChiResult cx = extract_chi(in, out, basis);
  Eigen::Index mr, mc;
  cx.chi.cwiseAbs().maxCoeff(&mr, &mc);
  CHECK(mr == 1);
  CHECK(mc == 1);
  CHECK(std::abs(cx.chi(8, 8)) == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(cx.chi(1, 8)) == doctest::Approx(std::sqrt(2.0) / 3.0));

  // full depolarizing channel against a Kraus-decomposition oracle
  std::vector<ComplexMatrix> dep;
  for (const auto& r : in) dep.push_back(r.trace() * ComplexMatrix::Identity(3, 3) / 3.0);
  const ChiResult cd = extract_chi(in, dep, basis);
  ComplexMatrix oracle = ComplexMatrix::Zero(9, 9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix k = unit(i, j) / std::sqrt(3.0);
      ComplexVector a(9);
      for (int m = 0; m < 9; ++m) a(m) = hs_inner(basis[m] / basis[m].norm(), k);
      oracle += a * a.adjoint() / 3.0;
    }
  }
  CHECK((cd.chi - oracle).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<ComplexMatrix> few(in.begin(), in.begin() + 5);
  CHECK_THROWS_AS(extract_chi(few, few, basis), Error);
}

TEST_CASE("reduced chi") {
  const OperatorBasis basis = process_basis_gf();
  ComplexMatrix x(2, 2);
  x << 0, -kI, -kI, 0;
  const ReducedChi rx = reduce_chi(chi_of_unitary(embed_gf(x), basis));
  CHECK(std::abs(rx.chi(1, 1) - 1.0) < 1e-12);
  CHECK(rx.trace == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((rx.chi - reduced_chi_of_unitary(x)).norm() < 1e-12);
  const ReducedChi ri = reduce_chi(chi_of_unitary(ComplexMatrix::Identity(3, 3), basis));
  CHECK(std::abs(ri.chi(0, 0) - 1.0) < 1e-12);

  // leakage channel: |g> and |f> each leak to |e> with probability p
  const double p = 0.07;
  ComplexMatrix k0 = ComplexMatrix::Identity(3, 3);
  k0(kG, kG) = k0(kF, kF) = std::sqrt(1.0 - p);
  const ComplexMatrix k1 = std::sqrt(p) * unit(kE, kG);
  const ComplexMatrix k2 = std::sqrt(p) * unit(kE, kF);
  ComplexMatrix s = ComplexMatrix::Zero(9, 9);
  for (const ComplexMatrix& k : {k0, k1, k2}) s += unitary_superoperator(k);
  CHECK(reduce_chi(chi_from_superoperator(s, basis)).trace == doctest::Approx(1.0 - p).epsilon(1e-12));

  // random Lindblad channels keep the reduced trace in [0, 1]
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    NoiseModel n;
    n.gamma_eg = 1e7 * u(rng);
    n.gamma_fe = 1e7 * u(rng);
    n.gamma_fg = 1e6 * u(rng);
    n.dephasing_ge = 1e7 * u(rng);
    n.dephasing_ef = 1e7 * u(rng);
    const GateSchedule g = synthesize_qubit_gate({kPi * u(rng), 6.0 * u(rng), 6.0 * u(rng)});
    const double tr = reduce_chi(chi_from_superoperator(qutrit_channel(g.pulses, n), basis)).trace;
    CHECK(tr >= 0.0);
    CHECK(tr <= 1.0 + 1e-6);
  }
}

TEST_CASE("chi fidelities") {
  ComplexMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const ComplexMatrix cx = reduced_chi_of_unitary(x);
  const ComplexMatrix cz = reduced_chi_of_unitary(z);
  CHECK(fidelity_att(cx, cx) == doctest::Approx(1.0));
  CHECK(fidelity_unatt(cx, cx) == doctest::Approx(1.0));
  CHECK(fidelity_att(0.9 * cx, cx) == doctest::Approx(0.9));
  CHECK(fidelity_unatt(0.9 * cx, cx) == doctest::Approx(1.0));
  CHECK(fidelity_att(cx, cz) < 1e-15);
  CHECK(fidelity_unatt(cx, cz) < 1e-15);
  CHECK_THROWS_AS(fidelity_att(cx, ComplexMatrix::Zero(9, 9)), Error);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  const ComplexMatrix mix = 0.7 * cx + 0.3 * cz;
  for (int i = 0; i < 10; ++i) {
    CHECK(fidelity_unatt(u(rng) * mix, cx) == doctest::Approx(fidelity_unatt(mix, cx)).epsilon(1e-12));
  }
}

TEST_CASE("end-to-end identity tomography") {
  const QptResult r = run_qpt(ComplexMatrix::Identity(9, 9), ComplexMatrix::Identity(2, 2));
  const ComplexMatrix golden = load_golden_chi(std::string(HOLO_GOLDEN_DIR) + "/identity_chi.csv");
  CHECK((r.chi - golden).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(r.f_unatt == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.reduced.trace == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("simulated pre-rotation pulses") {
  QptOptions opt;
  opt.simulated_prerotations = NoiseModel{};
  const QptResult r = run_qpt(ComplexMatrix::Identity(9, 9), ComplexMatrix::Identity(2, 2), opt);
  CHECK(r.f_unatt > 1.0 - 1e-5);
}

TEST_CASE("chi CSV") {
  std::ostringstream out;
  write_chi_csv(out, reduced_chi_of_unitary(ComplexMatrix::Identity(2, 2)), reduced_basis_labels());
  const std::string s = out.str();
  CHECK(s.rfind("row,col,real,imag\nI,I,1,0\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 17);
}
