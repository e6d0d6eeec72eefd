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

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace holo {

/// Bounded nonlinear least squares: minimize ||r(x)||^2 with lower <= x <= upper.
struct LsqProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
  Eigen::VectorXd lower;  // empty: unbounded
  Eigen::VectorXd upper;
};

struct LsqOptions {
  int max_iterations = 500;
  double ftol = 1e-15;    // relative decrease of the sum of squares
  double xtol = 1e-13;    // relative step size
  double gtol = 1e-15;    // scaled gradient
  double atol = 0.0;      // sum of squares treated as an exact fit
  double lambda0 = 1e-3;  // initial damping
};

struct LsqResult {
  Eigen::VectorXd x;
  double ssr = 0.0;  // sum of squared residuals
  Eigen::MatrixXd covariance;  // s^2 (J^T J)^-1, s^2 = ssr / (m - n)
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling, central-difference
/// Jacobian, and projection onto the box after each step.
LsqResult levenberg_marquardt(const LsqProblem& problem, Eigen::VectorXd x0,
                              const LsqOptions& options = {});

/// Runs from each start and keeps the lowest sum of squares (first wins on ties).
LsqResult multistart(const LsqProblem& problem, const std::vector<Eigen::VectorXd>& starts,
                     const LsqOptions& options = {});

Eigen::MatrixXd numerical_jacobian(const LsqProblem& problem, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& r0);

}  // namespace holo
