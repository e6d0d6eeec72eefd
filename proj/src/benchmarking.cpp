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

#include "holoqutrit/benchmarking.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>

#include <json.hpp>

#include "holoqutrit/error.hpp"
#include "holoqutrit/evolution.hpp"
#include "holoqutrit/lsq.hpp"
#include "holoqutrit/parallel.hpp"
#include "holoqutrit/seeding.hpp"

namespace holo {

namespace {

// (1 - d) rho + d Tr(rho) I_gf / 2 on the qutrit.
ComplexMatrix depolarizing_superoperator(double d) {
  ComplexMatrix mixed = ComplexMatrix::Zero(3, 3);
  mixed(kG, kG) = mixed(kF, kF) = 0.5;
  const ComplexVector trace_row = vec(ComplexMatrix::Identity(3, 3));
  return (1.0 - d) * ComplexMatrix::Identity(9, 9) + d * vec(mixed) * trace_row.adjoint();
}

RbRecord simulate(const RbConfig& cfg, const std::vector<ComplexMatrix>& channels,
                  std::optional<std::size_t> interleaved) {
  RbRecord rec;
  rec.lengths = cfg.lengths;
  rec.randomizations = cfg.randomizations;
  const std::size_t k = static_cast<std::size_t>(cfg.randomizations);
  rec.survivals.assign(cfg.lengths.size(), std::vector<double>(k, 0.0));
  const ComplexVector ground = vec(QutritKet::ground().projector());
  parallel_for(cfg.lengths.size() * k, cfg.threads, [&](std::size_t job) {
    const std::size_t li = job / k;
    const std::size_t j = job % k;
    const RbSequence seq = random_sequence(cfg.lengths[li], sub_seed(cfg.seed, job), interleaved);
    ComplexVector v = ground;
    for (std::size_t c : seq.cliffords) {
      v = channels[c] * v;
      if (interleaved) v = channels[*interleaved] * v;
    }
    v = channels[seq.recovery] * v;
    rec.survivals[li][j] = v(0).real();
  });
  for (const auto& s : rec.survivals) {
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double var = 0.0;
    for (double x : s) var += (x - mean) * (x - mean);
    rec.means.push_back(mean);
    rec.stddevs.push_back(s.size() > 1 ? std::sqrt(var / static_cast<double>(s.size() - 1)) : 0.0);
  }
  const auto [lo, hi] = std::minmax_element(rec.means.begin(), rec.means.end());
  if (*hi - *lo < 1e-9) {
    rec.no_decay = true;
    rec.fit = {0.0, 1.0, *lo, 1.0, 0.0, Eigen::Matrix3d::Zero()};
  } else {
    rec.fit = fit_rb(rec.lengths, rec.means);
  }
  return rec;
}

}  // namespace

std::vector<HolonomicParams> RbSequence::params() const {
  const CliffordGroup& g = CliffordGroup::instance();
  std::vector<HolonomicParams> out;
  for (std::size_t c : cliffords) out.push_back(g.params(c));
  return out;
}

HolonomicParams RbSequence::recovery_params() const {
  return CliffordGroup::instance().params(recovery);
}

RbSequence random_sequence(int m, std::uint64_t seed, std::optional<std::size_t> interleaved) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "sequence length must be >= 1");
  const CliffordGroup& g = CliffordGroup::instance();
  if (interleaved && *interleaved >= g.size()) {
    throw Error(ErrorCode::OutOfRange, "interleaved index outside the Clifford group");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> draw(0, g.size() - 1);
  RbSequence seq;
  std::size_t product = 0;  // identity
  for (int i = 0; i < m; ++i) {
    const std::size_t c = draw(rng);
    seq.cliffords.push_back(c);
    product = g.multiply(c, product);
    if (interleaved) product = g.multiply(*interleaved, product);
  }
  seq.recovery = g.inverse(product);
  return seq;
}

RbFit fit_rb(const std::vector<int>& lengths, const std::vector<double>& means) {
  if (lengths.size() != means.size()) {
    throw Error(ErrorCode::DimensionMismatch, "lengths and means differ in size");
  }
  std::vector<int> distinct = lengths;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 distinct lengths");
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  const double a0 = *hi - *lo;
  const double b0 = *lo;
  if (!(a0 > 1e-12)) {
    throw Error(ErrorCode::FitDivergence, "survival data shows no decay; p is not identifiable");
  }
  // log-linear regression of mean - B against m over the positive points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double y = means[i] - b0;
    if (y <= 1e-12 * a0) continue;
    sx += lengths[i];
    sy += std::log(y);
    sxx += static_cast<double>(lengths[i]) * lengths[i];
    sxy += lengths[i] * std::log(y);
    ++n;
  }
  double p0 = 0.95;
  if (n >= 2 && n * sxx - sx * sx > 0.0) {
    p0 = std::clamp(std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx)), 1e-3, 1.0 - 1e-9);
  }
  LsqProblem problem;
  problem.residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(means.size()));
    for (std::size_t i = 0; i < means.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) = x(0) * std::pow(x(1), lengths[i]) + x(2) - means[i];
    }
    return r;
  };
  problem.lower = Eigen::Vector3d(-10.0, 0.0, -10.0);
  problem.upper = Eigen::Vector3d(10.0, 1.0, 10.0);
  std::vector<Eigen::VectorXd> starts;
  for (double p : {p0, 0.9, 0.99, 0.999}) starts.push_back(Eigen::Vector3d(a0, p, b0));
  LsqOptions opt;
  opt.max_iterations = 2000;
  const LsqResult fit = multistart(problem, starts, opt);
  if (!fit.x.allFinite()) throw Error(ErrorCode::FitDivergence, "RB fit produced non-finite values");
  RbFit out;
  out.a = fit.x(0);
  out.p = fit.x(1);
  out.b = fit.x(2);
  out.f_avg = 1.0 - (1.0 - out.p) / 2.0;
  out.ssr = fit.ssr;
  out.covariance = fit.covariance;
  return out;
}

double interleaved_fidelity(double p_gate, double p_ref) {
  if (!(p_ref > 0.0 && p_ref <= 1.0) || !(p_gate > 0.0 && p_gate <= p_ref * (1.0 + 1e-6))) {
    throw Error(ErrorCode::RatioOutOfRange, "need 0 < p_gate <= p_ref <= 1");
  }
  return 1.0 - (1.0 - p_gate / p_ref) / 2.0;
}

RbResult run_rb(const RbConfig& cfg) {
  if (cfg.lengths.empty() || cfg.randomizations < 1) {
    throw Error(ErrorCode::InvalidArgument, "RB needs lengths and at least one randomization");
  }
  for (int m : cfg.lengths) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "sequence lengths must be >= 1");
  }
  const CliffordGroup& group = CliffordGroup::instance();
  std::optional<std::size_t> interleaved;
  if (cfg.interleaved) {
    interleaved = group.find(target_u1(named_qubit_gate(*cfg.interleaved)));
    if (!interleaved) {
      throw Error(ErrorCode::InvalidArgument, "interleaved gate is not a Clifford: " + *cfg.interleaved);
    }
  }
  const ComplexMatrix depol = depolarizing_superoperator(cfg.depolarizing);
  std::vector<ComplexMatrix> channels(group.size());
  parallel_for(group.size(), cfg.threads, [&](std::size_t i) {
    const GateSchedule g = synthesize_qubit_gate(group.params(i), cfg.envelope, cfg.split);
    channels[i] = depol * qutrit_channel(g.pulses, cfg.noise, cfg.error, cfg.steps);
  });

  RbResult result;
  result.reference = simulate(cfg, channels, std::nullopt);
  if (interleaved) {
    result.interleaved = simulate(cfg, channels, interleaved);
    result.interleaved_gate = cfg.interleaved;
    try {
      result.f_gate = interleaved_fidelity(result.interleaved->fit.p, result.reference.fit.p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RatioOutOfRange) throw;
      result.note = "interleaved decay not slower than reference; F_gate undefined";
    }
  }
  return result;
}

void write_rb_csv(std::ostream& out, const RbRecord& record) {
  out << "m,mean,stddev,k\n" << std::setprecision(12);
  for (std::size_t i = 0; i < record.lengths.size(); ++i) {
    out << record.lengths[i] << ',' << record.means[i] << ',' << record.stddevs[i] << ','
        << record.randomizations << '\n';
  }
}

std::string rb_summary_json(const RbResult& result) {
  auto fit_json = [](const RbRecord& r) {
    return nlohmann::json{{"A", r.fit.a},           {"p", r.fit.p},
                          {"B", r.fit.b},           {"F_avg", r.fit.f_avg},
                          {"no_decay", r.no_decay}, {"ssr", r.fit.ssr}};
  };
  nlohmann::json j;
  j["reference"] = fit_json(result.reference);
  if (result.interleaved) {
    j["interleaved"] = fit_json(*result.interleaved);
    j["interleaved"]["gate"] = *result.interleaved_gate;
    j["interleaved"]["F_gate"] = result.f_gate ? nlohmann::json(*result.f_gate) : nlohmann::json(nullptr);
    if (!result.note.empty()) j["interleaved"]["note"] = result.note;
  }
  return j.dump(2);
}

}  // namespace holo
