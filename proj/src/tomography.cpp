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

#include "holoqutrit/tomography.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include <json.hpp>

#include "holoqutrit/evolution.hpp"
#include "holoqutrit/holonomic.hpp"
#include "holoqutrit/lsq.hpp"
#include "holoqutrit/seeding.hpp"

namespace holo {

namespace {

struct Step {
  Transition transition;
  char axis;
  double angle;
};

struct PrerotationRecipe {
  const char* label;
  std::vector<Step> steps;  // time order
};

const std::vector<PrerotationRecipe>& prerotation_recipes() {
  static const std::vector<PrerotationRecipe> recipes = {
      {"I", {}},
      {"X90_ge", {{Transition::ge, 'x', kPi / 2}}},
      {"Y90_ge", {{Transition::ge, 'y', kPi / 2}}},
      {"X180_ge", {{Transition::ge, 'x', kPi}}},
      {"X90_ge*X180_ef", {{Transition::ef, 'x', kPi}, {Transition::ge, 'x', kPi / 2}}},
      {"Y90_ge*X180_ef", {{Transition::ef, 'x', kPi}, {Transition::ge, 'y', kPi / 2}}},
      {"X180_ge*X90_ef", {{Transition::ef, 'x', kPi / 2}, {Transition::ge, 'x', kPi}}},
      {"X180_ge*Y90_ef", {{Transition::ef, 'y', kPi / 2}, {Transition::ge, 'x', kPi}}},
      {"X180_ge*X180_ef", {{Transition::ef, 'x', kPi}, {Transition::ge, 'x', kPi}}},
  };
  return recipes;
}

// Drive phase realizing the x or y rotation of a pair with the lower level as |0>.
double drive_phase(Transition t, char axis) {
  if (axis == 'x') return 0.0;
  return t == Transition::ge ? -kPi / 2 : kPi / 2;
}

ComplexMatrix hermitian_psd_clip(const ComplexMatrix& m, double floor) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd w = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix rho_from_params(const Eigen::VectorXd& x) {
  ComplexMatrix t = ComplexMatrix::Zero(3, 3);
  t(0, 0) = x(0);
  t(1, 1) = x(1);
  t(2, 2) = x(2);
  t(1, 0) = Complex(x(3), x(4));
  t(2, 0) = Complex(x(5), x(6));
  t(2, 1) = Complex(x(7), x(8));
  const ComplexMatrix rho = t.adjoint() * t;
  return rho / rho.trace().real();
}

// T lower triangular with T^dagger T = rho (Cholesky of the index-reversed matrix).
Eigen::VectorXd params_from_rho(const ComplexMatrix& rho) {
  const ComplexMatrix rev = rho.colwise().reverse().rowwise().reverse();
  Eigen::LLT<ComplexMatrix> llt(rev);
  const ComplexMatrix l = llt.matrixL();
  const ComplexMatrix t = l.adjoint().colwise().reverse().rowwise().reverse();
  Eigen::VectorXd x(9);
  x << t(0, 0).real(), t(1, 1).real(), t(2, 2).real(), t(1, 0).real(), t(1, 0).imag(),
      t(2, 0).real(), t(2, 0).imag(), t(2, 1).real(), t(2, 1).imag();
  return x;
}

std::vector<ComplexMatrix> normalized(const OperatorBasis& basis) {
  std::vector<ComplexMatrix> out;
  for (const ComplexMatrix& e : basis.elements) out.push_back(e / e.norm());
  return out;
}

}  // namespace

std::vector<QutritKet> initial_states() {
  const double r = 1.0 / std::sqrt(2.0);
  return {QutritKet::ground(),  QutritKet::excited(), QutritKet::second(),
          {r, r, 0.0},          {0.0, r, r},          {r, 0.0, r},
          {r, -kI * r, 0.0},    {0.0, r, -kI * r},    {r, 0.0, -kI * r}};
}

std::vector<std::string> initial_state_labels() {
  return {"g", "e", "f", "g+e", "e+f", "g+f", "g-ie", "e-if", "g-if"};
}

ComplexMatrix pair_rotation(Transition transition, char axis, double angle) {
  int a = kG, b = kE;
  if (transition == Transition::ef) {
    a = kE;
    b = kF;
  } else if (transition != Transition::ge) {
    throw Error(ErrorCode::BadTransition, "pair rotations act on ge or ef");
  }
  if (axis != 'x' && axis != 'y') throw Error(ErrorCode::InvalidArgument, "axis must be x or y");
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  ComplexMatrix u = ComplexMatrix::Identity(3, 3);
  u(a, a) = c;
  u(b, b) = c;
  // exp(-i angle/2 sigma): sigma_x -> -i s off-diagonal; sigma_y -> [[0,-s],[s,0]]
  if (axis == 'x') {
    u(a, b) = -kI * s;
    u(b, a) = -kI * s;
  } else {
    u(a, b) = -s;
    u(b, a) = s;
  }
  return u;
}

std::vector<Prerotation> prerotations() {
  std::vector<Prerotation> out;
  for (const PrerotationRecipe& spec : prerotation_recipes()) {
    ComplexMatrix u = ComplexMatrix::Identity(3, 3);
    for (const Step& s : spec.steps) u = pair_rotation(s.transition, s.axis, s.angle) * u;
    out.push_back({spec.label, u});
  }
  return out;
}

ComplexMatrix MeasurementModel::operator_matrix() const {
  const OperatorBasis l = gellmann_basis();
  return beta_a * l[0] + beta_b * l[3] + beta_c * l[8];
}

MeasurementModel measurement_coefficients() {
  // diag(|g><g|) = a (1,1,1) + b (1,-1,0) + c (1,1,-2)/sqrt(3)
  const OperatorBasis l = gellmann_basis();
  Eigen::Matrix3d a;
  for (int k = 0; k < 3; ++k) {
    a(k, 0) = l[0](k, k).real();
    a(k, 1) = l[3](k, k).real();
    a(k, 2) = l[8](k, k).real();
  }
  const Eigen::Vector3d beta = a.colPivHouseholderQr().solve(Eigen::Vector3d(1.0, 0.0, 0.0));
  return {beta(0), beta(1), beta(2)};
}

Eigen::VectorXd predicted_values(const ComplexMatrix& rho, const MeasurementModel& mm) {
  const ComplexMatrix m = mm.operator_matrix();
  const auto rots = prerotations();
  Eigen::VectorXd v(rots.size());
  for (std::size_t k = 0; k < rots.size(); ++k) {
    const ComplexMatrix& u = rots[k].unitary;
    v(k) = (u * rho * u.adjoint() * m).trace().real();
  }
  return v;
}

TomographyRecord simulate_record(const std::vector<ComplexMatrix>& outputs,
                                 const MeasurementModel& mm, const Sampling& sampling,
                                 const std::vector<ComplexMatrix>& channels) {
  if (sampling.shots && *sampling.shots <= 0) {
    throw Error(ErrorCode::BadShotCount, "shot count must be positive");
  }
  const auto rots = prerotations();
  if (!channels.empty() && channels.size() != rots.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one channel per pre-rotation");
  }
  const ComplexMatrix m = mm.operator_matrix();
  TomographyRecord rec;
  const auto labels = initial_state_labels();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    rec.input_labels.push_back(i < labels.size() ? labels[i] : "input" + std::to_string(i));
  }
  for (const auto& r : rots) rec.prerotation_labels.push_back(r.label);
  rec.shots = sampling.shots;
  rec.seed = sampling.seed;
  rec.values.resize(static_cast<Eigen::Index>(outputs.size()), static_cast<Eigen::Index>(rots.size()));
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t k = 0; k < rots.size(); ++k) {
      const ComplexMatrix rotated = channels.empty()
                                        ? ComplexMatrix(rots[k].unitary * outputs[i] *
                                                        rots[k].unitary.adjoint())
                                        : apply_channel(channels[k], outputs[i]);
      double value = (rotated * m).trace().real();
      if (sampling.shots) {
        std::mt19937_64 rng(sub_seed(sampling.seed, i * rots.size() + k));
        std::binomial_distribution<long> draw(*sampling.shots, std::clamp(value, 0.0, 1.0));
        value = static_cast<double>(draw(rng)) / static_cast<double>(*sampling.shots);
      }
      rec.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = value;
    }
  }
  return rec;
}

std::string TomographyRecord::to_json() const {
  nlohmann::json j;
  j["inputs"] = input_labels;
  j["prerotations"] = prerotation_labels;
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < values.cols(); ++k) row.push_back(values(i, k));
    rows.push_back(std::move(row));
  }
  j["values"] = rows;
  j["shots"] = shots ? nlohmann::json(*shots) : nlohmann::json(nullptr);
  j["seed"] = seed;
  return j.dump(2);
}

TomographyRecord TomographyRecord::from_json(const std::string& text) {
  TomographyRecord rec;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    rec.input_labels = j.at("inputs").get<std::vector<std::string>>();
    rec.prerotation_labels = j.at("prerotations").get<std::vector<std::string>>();
    const auto rows = j.at("values").get<std::vector<std::vector<double>>>();
    rec.values.resize(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != static_cast<std::size_t>(rec.values.cols())) {
        throw Error(ErrorCode::ConfigError, "ragged values array");
      }
      for (std::size_t k = 0; k < rows[i].size(); ++k) {
        rec.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
      }
    }
    if (!j.at("shots").is_null()) rec.shots = j.at("shots").get<long>();
    rec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad tomography record: ") + e.what());
  }
  return rec;
}

ComplexMatrix linear_inversion(const Eigen::VectorXd& values, const MeasurementModel& mm) {
  if (values.size() != 9) throw Error(ErrorCode::DimensionMismatch, "need nine values");
  const OperatorBasis l = gellmann_basis();
  const ComplexMatrix m = mm.operator_matrix();
  const auto rots = prerotations();
  // rho = sum_j c_j lambda_j with real c; value_k = sum_j c_j Tr(U_k lambda_j U_k^dag M)
  Eigen::MatrixXd a(9, 9);
  for (int k = 0; k < 9; ++k) {
    const ComplexMatrix& u = rots[k].unitary;
    for (int j = 0; j < 9; ++j) a(k, j) = (u * l[j] * u.adjoint() * m).trace().real();
  }
  const Eigen::VectorXd c = a.fullPivLu().solve(values);
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  for (int j = 0; j < 9; ++j) rho += c(j) * l[j];
  return rho;
}

MleConvergenceError::MleConvergenceError(MleResult best)
    : Error(ErrorCode::ConvergenceFailure, "density estimate did not converge"),
      best_(std::move(best)) {}

MleResult mle_density(const Eigen::VectorXd& values, const MeasurementModel& mm,
                      const MleOptions& options) {
  ComplexMatrix start = hermitian_psd_clip(linear_inversion(values, mm), 1e-9);
  start /= start.trace().real();
  LsqProblem problem;
  problem.residual = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(predicted_values(rho_from_params(x), mm) - values);
  };
  LsqOptions lo;
  lo.max_iterations = options.max_iterations;
  lo.atol = options.tolerance;
  lo.ftol = options.ftol;
  const LsqResult fit = levenberg_marquardt(problem, params_from_rho(start), lo);
  MleResult out{rho_from_params(fit.x), std::sqrt(fit.ssr), fit.iterations};
  if (!fit.converged) throw MleConvergenceError(out);
  return out;
}

ComplexMatrix chi_from_superoperator(const ComplexMatrix& superop, const OperatorBasis& basis) {
  const auto e = normalized(basis);
  const Eigen::Index n = static_cast<Eigen::Index>(e.size());
  const double d = static_cast<double>(e.front().rows());
  if (superop.rows() != n || superop.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "superoperator does not match the basis");
  }
  ComplexMatrix chi(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const ComplexMatrix b = kron(e[k].conjugate(), e[m]);
      chi(m, k) = (b.conjugate().array() * superop.array()).sum() / d;
    }
  }
  return chi;
}

ComplexMatrix superoperator_from_chi(const ComplexMatrix& chi, const OperatorBasis& basis) {
  const auto e = normalized(basis);
  const Eigen::Index n = static_cast<Eigen::Index>(e.size());
  const double d = static_cast<double>(e.front().rows());
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) s += d * chi(m, k) * kron(e[k].conjugate(), e[m]);
  }
  return s;
}

ComplexMatrix chi_of_unitary(const ComplexMatrix& u, const OperatorBasis& basis) {
  return chi_from_superoperator(unitary_superoperator(u), basis);
}

ChiResult extract_chi(const std::vector<ComplexMatrix>& inputs,
                      const std::vector<ComplexMatrix>& outputs, const OperatorBasis& basis,
                      const ChiOptions& options) {
  if (inputs.size() != outputs.size() || inputs.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "inputs and outputs must pair up");
  }
  const Eigen::Index d = inputs.front().rows();
  const Eigen::Index n = d * d;
  if (static_cast<Eigen::Index>(basis.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "basis size must be d^2");
  }
  ComplexMatrix min(n, static_cast<Eigen::Index>(inputs.size()));
  ComplexMatrix mout(n, static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    min.col(static_cast<Eigen::Index>(i)) = vec(inputs[i]);
    mout.col(static_cast<Eigen::Index>(i)) = vec(outputs[i]);
  }
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(min);
  cod.setThreshold(1e-10);
  if (cod.rank() < n) throw Error(ErrorCode::SingularInputSpan, "inputs do not span operator space");
  const ComplexMatrix s = mout * cod.pseudoInverse();
  ChiResult out;
  out.chi = chi_from_superoperator(s, basis);
  out.chi = 0.5 * (out.chi + out.chi.adjoint()).eval();
  if (options.project_psd) {
    const Complex tr = out.chi.trace();
    out.chi = hermitian_psd_clip(out.chi, 0.0);
    const Complex clipped = out.chi.trace();
    if (std::abs(clipped) > 0.0) out.chi *= tr.real() / clipped.real();
  }
  const ComplexMatrix fitted = superoperator_from_chi(out.chi, basis);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.residual += (unvec(fitted * vec(inputs[i]), d) - outputs[i]).norm();
  }
  return out;
}

ReducedChi reduce_chi(const ComplexMatrix& full) {
  if (full.rows() != 9 || full.cols() != 9) {
    throw Error(ErrorCode::DimensionMismatch, "reduce_chi expects a 9x9 chi");
  }
  ReducedChi r;
  r.chi = 1.5 * full.topLeftCorner(4, 4);
  r.trace = r.chi.trace().real();
  return r;
}

ComplexMatrix reduced_chi_of_unitary(const ComplexMatrix& u2) {
  const OperatorBasis p = pauli_basis_reduced();
  ComplexVector a(4);
  for (int m = 0; m < 4; ++m) a(m) = hs_inner(p[m], u2);
  return a * a.adjoint() / 4.0;
}

double fidelity_att(const ComplexMatrix& exp, const ComplexMatrix& th) {
  if (exp.rows() != th.rows() || exp.cols() != th.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "chi matrices differ in size");
  }
  return std::abs((exp * th.adjoint()).trace());
}

double fidelity_unatt(const ComplexMatrix& exp, const ComplexMatrix& th) {
  const double overlap = fidelity_att(exp, th);
  const double ne = (exp * exp.adjoint()).trace().real();
  const double nt = (th * th.adjoint()).trace().real();
  if (!(nt > 0.0)) throw Error(ErrorCode::InvalidArgument, "theoretical chi is zero");
  if (!(ne > 0.0)) return 0.0;
  return overlap / std::sqrt(ne * nt);
}

std::vector<std::string> process_basis_labels() {
  return {"I_gf", "X_gf", "-iY_gf", "Z_gf", "X_ge", "-iY_ge", "X_ef", "-iY_ef", "I_e"};
}

std::vector<std::string> reduced_basis_labels() { return {"I", "X", "-iY", "Z"}; }

void write_chi_csv(std::ostream& out, const ComplexMatrix& chi,
                   const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != chi.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match chi");
  }
  out << "row,col,real,imag\n" << std::setprecision(12);
  for (Eigen::Index m = 0; m < chi.rows(); ++m) {
    for (Eigen::Index n = 0; n < chi.cols(); ++n) {
      out << labels[m] << ',' << labels[n] << ',' << chi(m, n).real() << ',' << chi(m, n).imag()
          << '\n';
    }
  }
}

QptResult run_qpt(const ComplexMatrix& superop, const ComplexMatrix& target2,
                  const QptOptions& options) {
  const MeasurementModel mm = measurement_coefficients();
  std::vector<ComplexMatrix> inputs, outputs;
  for (const QutritKet& k : initial_states()) {
    inputs.push_back(k.projector());
    outputs.push_back(apply_channel(superop, inputs.back()));
  }
  std::vector<ComplexMatrix> channels;
  if (options.simulated_prerotations) {
    for (const PrerotationRecipe& spec : prerotation_recipes()) {
      std::vector<RotationPulse> pulses;
      for (const Step& s : spec.steps) {
        pulses.push_back({s.transition, s.angle, drive_phase(s.transition, s.axis)});
      }
      channels.push_back(qutrit_channel(dynamic_schedule(pulses).pulses, *options.simulated_prerotations));
    }
  }
  QptResult r;
  r.record = simulate_record(outputs, mm, options.sampling, channels);
  for (Eigen::Index i = 0; i < r.record.values.rows(); ++i) {
    const MleResult mle = mle_density(r.record.values.row(i).transpose(), mm);
    r.reconstructed.push_back(mle.rho);
    r.max_mle_residual = std::max(r.max_mle_residual, mle.residual);
  }
  const ChiResult chi = extract_chi(inputs, r.reconstructed, process_basis_gf(),
                                    ChiOptions{options.project_psd});
  r.chi = chi.chi;
  r.chi_residual = chi.residual;
  r.reduced = reduce_chi(r.chi);
  r.reduced_target = reduced_chi_of_unitary(target2);
  r.f_att = fidelity_att(r.reduced.chi, r.reduced_target);
  r.f_unatt = fidelity_unatt(r.reduced.chi, r.reduced_target);
  return r;
}

}  // namespace holo
