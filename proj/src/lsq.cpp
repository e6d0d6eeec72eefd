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

#include "holoqutrit/lsq.hpp"

#include <cmath>
#include <limits>

#include "holoqutrit/error.hpp"

namespace holo {

namespace {

double lower_of(const LsqProblem& p, Eigen::Index i) {
  return p.lower.size() ? p.lower(i) : -std::numeric_limits<double>::infinity();
}
double upper_of(const LsqProblem& p, Eigen::Index i) {
  return p.upper.size() ? p.upper(i) : std::numeric_limits<double>::infinity();
}

void project(const LsqProblem& p, Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = std::min(std::max(x(i), lower_of(p, i)), upper_of(p, i));
  }
}

Eigen::VectorXd eval(const LsqProblem& p, const Eigen::VectorXd& x) {
  Eigen::VectorXd r = p.residual(x);
  if (!r.allFinite()) {
    r = Eigen::VectorXd::Constant(r.size(), std::numeric_limits<double>::infinity());
  }
  return r;
}

}  // namespace

Eigen::MatrixXd numerical_jacobian(const LsqProblem& problem, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& r0) {
  Eigen::MatrixXd j(r0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-7 * std::max(std::abs(x(i)), 1e-3);
    Eigen::VectorXd xp = x, xm = x;
    const double hi = std::min(h, upper_of(problem, i) - x(i));
    const double lo = std::min(h, x(i) - lower_of(problem, i));
    if (hi > 0.0 && lo > 0.0) {
      xp(i) += hi;
      xm(i) -= lo;
      j.col(i) = (eval(problem, xp) - eval(problem, xm)) / (hi + lo);
    } else if (hi > 0.0) {
      xp(i) += hi;
      j.col(i) = (eval(problem, xp) - r0) / hi;
    } else {
      xm(i) -= lo;
      j.col(i) = (r0 - eval(problem, xm)) / lo;
    }
  }
  return j;
}

LsqResult levenberg_marquardt(const LsqProblem& problem, Eigen::VectorXd x,
                              const LsqOptions& options) {
  const Eigen::Index n = x.size();
  if ((problem.lower.size() && problem.lower.size() != n) ||
      (problem.upper.size() && problem.upper.size() != n)) {
    throw Error(ErrorCode::DimensionMismatch, "bounds do not match the parameter count");
  }
  project(problem, x);
  Eigen::VectorXd r = eval(problem, x);
  double ssr = r.squaredNorm();
  if (!std::isfinite(ssr)) throw Error(ErrorCode::FitDivergence, "residual not finite at start");

  LsqResult out;
  double lambda = options.lambda0;
  Eigen::MatrixXd j = numerical_jacobian(problem, x, r);
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    const Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-300);
    if (ssr <= options.atol) {
      out.converged = true;
      break;
    }
    if ((g.array().abs() / (scale.array().sqrt() * std::sqrt(std::max(ssr, 1e-300)))).maxCoeff() <
        options.gtol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    for (int inner = 0; inner < 40 && !accepted; ++inner) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * scale;
      Eigen::VectorXd step = a.ldlt().solve(-g);
      Eigen::VectorXd trial = x + step;
      project(problem, trial);
      step = trial - x;
      const Eigen::VectorXd rt = eval(problem, trial);
      const double st = rt.squaredNorm();
      if (std::isfinite(st) && st <= ssr) {
        const double decrease = (ssr - st) / std::max(ssr, 1e-300);
        const double rel_step = step.norm() / (x.norm() + options.xtol);
        x = trial;
        r = rt;
        ssr = st;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (decrease < options.ftol || rel_step < options.xtol || ssr <= options.atol) {
          out.converged = true;
        }
      } else {
        lambda *= 4.0;
        if (lambda > 1e16) break;
      }
    }
    if (!accepted) {
      // no downhill step at any damping: local minimum to working precision
      out.converged = true;
      break;
    }
    j = numerical_jacobian(problem, x, r);
    if (out.converged) break;
  }
  out.x = x;
  out.ssr = ssr;
  const Eigen::Index m = r.size();
  const Eigen::MatrixXd jtj = j.transpose() * j;
  const double s2 = m > n ? ssr / static_cast<double>(m - n) : 0.0;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jtj);
  out.covariance = s2 * cod.pseudoInverse();
  return out;
}

LsqResult multistart(const LsqProblem& problem, const std::vector<Eigen::VectorXd>& starts,
                     const LsqOptions& options) {
  if (starts.empty()) throw Error(ErrorCode::InvalidArgument, "multistart needs a start");
  LsqResult best;
  bool have = false;
  for (const Eigen::VectorXd& s : starts) {
    try {
      LsqResult r = levenberg_marquardt(problem, s, options);
      if (!have || r.ssr < best.ssr) {
        best = std::move(r);
        have = true;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FitDivergence) throw;
    }
  }
  if (!have) throw Error(ErrorCode::FitDivergence, "no start produced a finite fit");
  return best;
}

}  // namespace holo
