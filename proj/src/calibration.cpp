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

#include "holoqutrit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "holoqutrit/error.hpp"
#include "holoqutrit/lsq.hpp"

namespace holo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Peak {
  double frequency;  // Hz
  double magnitude;
};

// Largest |t|; all fits work in time units of this span.
double time_scale(const Trace& tr) {
  return std::max(std::abs(tr.times.front()), std::abs(tr.times.back()));
}

std::vector<Peak> find_peaks(const Trace& tr, double* floor = nullptr) {
  const std::size_t n = tr.size();
  const double span = tr.times.back() - tr.times.front();
  const double mean = std::accumulate(tr.values.begin(), tr.values.end(), 0.0) / n;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (tr.times[k] - tr.times.front()) / span;
    w[k] = (tr.values[k] - mean) * 0.5 * (1.0 - std::cos(kTwoPi * x));
  }
  const double df = 1.0 / (8.0 * span);
  const double fmax = static_cast<double>(n - 1) / (2.0 * span);
  std::vector<double> mags;
  for (double f = 0.0; f <= fmax; f += df) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += w[k] * std::polar(1.0, -kTwoPi * f * tr.times[k]);
    mags.push_back(std::abs(acc));
  }
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < mags.size(); ++i) {
    if (mags[i] > mags[i - 1] && mags[i] >= mags[i + 1]) {
      // parabolic refinement of the peak position
      const double a = mags[i - 1], b = mags[i], c = mags[i + 1];
      const double den = a - 2.0 * b + c;
      const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      peaks.push_back({(static_cast<double>(i) + shift) * df, b});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& x, const Peak& y) { return x.magnitude > y.magnitude; });
  if (floor) {
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    *floor = sorted[sorted.size() / 2];
  }
  return peaks;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Damped multi-tone basis: column 0 constant, then cos/sin pairs per tone.
Eigen::MatrixXd tone_basis(const Eigen::VectorXd& t, double rate, const std::vector<double>& omegas) {
  Eigen::MatrixXd a(t.size(), 1 + 2 * static_cast<Eigen::Index>(omegas.size()));
  a.col(0).setOnes();
  const Eigen::ArrayXd env = (-rate * t.array()).exp();
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    a.col(1 + 2 * k) = env * (omegas[k] * t.array()).cos();
    a.col(2 + 2 * k) = env * (omegas[k] * t.array()).sin();
  }
  return a;
}

Eigen::VectorXd linear_coefficients(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return a.colPivHouseholderQr().solve(y);
}

void require_finite(const LsqResult& fit, const char* what) {
  if (!fit.x.allFinite() || !std::isfinite(fit.ssr)) {
    throw Error(ErrorCode::FitDivergence, std::string(what) + " fit produced non-finite values");
  }
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd rescale(const Eigen::MatrixXd& cov, const Eigen::VectorXd& d) {
  return d.asDiagonal() * cov * d.asDiagonal();
}

}  // namespace

Trace::Trace(std::vector<double> t, std::vector<double> v, std::string l)
    : times(std::move(t)), values(std::move(v)), label(std::move(l)) {
  validate();
}

void Trace::validate() const {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "trace times and values differ in length");
  }
  if (times.size() < 8) throw Error(ErrorCode::InvalidArgument, "trace needs at least 8 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw Error(ErrorCode::InvalidArgument, "trace contains non-finite samples");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "trace times must be strictly increasing");
    }
  }
}

Trace read_trace_csv(std::istream& in, const std::string& label, int detrend_degree) {
  std::vector<double> t, v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    try {
      std::size_t used = 0;
      const double x = std::stod(a, &used);
      const double y = std::stod(b);
      t.push_back(x);
      v.push_back(y);
    } catch (const std::exception&) {
      if (line_no == 1 && t.empty()) continue;  // header
      throw Error(ErrorCode::IoError, "unparseable trace row " + std::to_string(line_no));
    }
  }
  Trace tr(std::move(t), std::move(v), label);
  if (detrend_degree >= 0) {
    const double scale = time_scale(tr);
    const Eigen::Index n = static_cast<Eigen::Index>(tr.size());
    Eigen::MatrixXd vander(n, detrend_degree + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      double p = 1.0;
      for (int k = 0; k <= detrend_degree; ++k, p *= tr.times[i] / scale) vander(i, k) = p;
    }
    const Eigen::VectorXd y = to_vector(tr.values);
    const Eigen::VectorXd trend = vander * linear_coefficients(vander, y);
    const double mean = y.mean();
    for (Eigen::Index i = 0; i < n; ++i) tr.values[i] += mean - trend(i);
  }
  return tr;
}

std::vector<double> spectral_peaks(const Trace& trace, std::size_t count) {
  trace.validate();
  std::vector<double> out;
  for (const Peak& p : find_peaks(trace)) {
    if (out.size() == count) break;
    out.push_back(p.frequency);
  }
  return out;
}

// ---- rate equation ----

Eigen::Vector3d rate_equation_populations(double gamma_eg, double gamma_fe, double gamma_fg,
                                          const Eigen::Vector3d& p0, double t) {
  Eigen::Matrix3d g;
  g << 0.0, gamma_eg, gamma_fg,
       0.0, -gamma_eg, gamma_fe,
       0.0, 0.0, -(gamma_fe + gamma_fg);
  const Eigen::Matrix3d gt = g * t;
  return gt.exp() * p0;
}

RateFit fit_rate_equation(const Trace& pg, const Trace& pe, const Trace& pf) {
  pg.validate();
  pe.validate();
  pf.validate();
  if (pg.times != pe.times || pg.times != pf.times) {
    throw Error(ErrorCode::DimensionMismatch, "population traces must share their time axis");
  }
  const double scale = time_scale(pf);
  const std::size_t n = pf.size();
  const double t0 = pf.times.front();
  Eigen::Vector3d p0(pg.values[0], pe.values[0], pf.values[0]);
  p0 = p0.cwiseMax(0.0);
  if (!(p0.sum() > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial populations vanish");
  p0 /= p0.sum();

  LsqProblem problem;
  problem.residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(3 * static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d p =
          rate_equation_populations(x(0), x(1), x(2), p0, (pf.times[i] - t0) / scale);
      r(3 * i) = p(0) - pg.values[i];
      r(3 * i + 1) = p(1) - pe.values[i];
      r(3 * i + 2) = p(2) - pf.values[i];
    }
    return r;
  };
  problem.lower = Eigen::Vector3d::Zero();
  problem.upper = Eigen::Vector3d::Constant(1e4);

  // total |f> decay from the log slope of P_f
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pf.values[i] < 0.05) continue;
    const double x = (pf.times[i] - t0) / scale;
    const double y = std::log(pf.values[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++m;
  }
  double total = 1.0;
  if (m >= 2 && m * sxx - sx * sx > 0.0) {
    total = std::clamp(-(m * sxy - sx * sy) / (m * sxx - sx * sx), 1e-3, 1e3);
  }
  std::vector<Eigen::VectorXd> starts;
  for (double ratio : {0.5, 1.0, 2.0}) {
    starts.push_back(Eigen::Vector3d(ratio * total, 0.9 * total, 0.1 * total));
  }
  starts.push_back(Eigen::Vector3d(total, 0.5 * total, 0.5 * total));
  LsqOptions opt;
  opt.max_iterations = 1000;
  const LsqResult fit = multistart(problem, starts, opt);
  require_finite(fit, "rate-equation");

  RateFit out;
  out.gamma_eg = fit.x(0) / scale;
  out.gamma_fe = fit.x(1) / scale;
  out.gamma_fg = fit.x(2) / scale;
  out.p0 = p0;
  out.ssr = fit.ssr;
  out.covariance = rescale(fit.covariance, Eigen::Vector3d::Constant(1.0 / scale));
  return out;
}

// ---- Ramsey ----

double ramsey_model(const RamseyFit& f, double t) {
  return f.y0 + std::exp(-f.decay_rate * t) * (f.a1 * std::cos(kTwoPi * f.f1 * t + f.phi1) +
                                               f.a2 * std::cos(kTwoPi * f.f2 * t + f.phi2));
}

RamseyFit fit_ramsey(const Trace& trace) {
  trace.validate();
  const double scale = time_scale(trace);
  const Eigen::VectorXd t = to_vector(trace.times) / scale;
  const Eigen::VectorXd y = to_vector(trace.values);
  double floor = 0.0;
  const std::vector<Peak> peaks = find_peaks(trace, &floor);
  if (peaks.empty()) throw Error(ErrorCode::FitDivergence, "Ramsey trace has no spectral peak");
  const bool two = peaks.size() >= 2 &&
                   peaks[1].magnitude > std::max(0.08 * peaks[0].magnitude, 4.0 * floor);
  std::vector<double> freqs = {peaks[0].frequency * scale};
  if (two) {
    freqs.push_back(peaks[1].frequency * scale);
    std::sort(freqs.begin(), freqs.end());
  }
  const std::size_t tones = freqs.size();
  const double nyquist = static_cast<double>(trace.size() - 1) / 2.0 * scale /
                         (trace.times.back() - trace.times.front());

  // parameters: y0, rate, f_1..f_k, (c_k, s_k)...
  const Eigen::Index np = static_cast<Eigen::Index>(2 + 3 * tones);
  LsqProblem problem;
  problem.residual = [&](const Eigen::VectorXd& x) {
    std::vector<double> om;
    for (std::size_t k = 0; k < tones; ++k) om.push_back(kTwoPi * x(2 + k));
    const Eigen::MatrixXd a = tone_basis(t, x(1), om);
    Eigen::VectorXd c(a.cols());
    c(0) = x(0);
    for (Eigen::Index k = 1; k < a.cols(); ++k) c(k) = x(1 + static_cast<Eigen::Index>(tones) + k);
    return Eigen::VectorXd(a * c - y);
  };
  problem.lower = Eigen::VectorXd::Constant(np, -std::numeric_limits<double>::infinity());
  problem.upper = Eigen::VectorXd::Constant(np, std::numeric_limits<double>::infinity());
  problem.lower(1) = 0.0;
  problem.upper(1) = 1e3;
  for (std::size_t k = 0; k < tones; ++k) {
    problem.lower(2 + k) = 0.0;
    problem.upper(2 + k) = nyquist;
  }
  std::vector<Eigen::VectorXd> starts;
  for (double rate : {0.0, 0.5, 2.0, 8.0}) {
    std::vector<double> om;
    for (double f : freqs) om.push_back(kTwoPi * f);
    const Eigen::VectorXd lin = linear_coefficients(tone_basis(t, rate, om), y);
    Eigen::VectorXd x(np);
    x(0) = lin(0);
    x(1) = rate;
    for (std::size_t k = 0; k < tones; ++k) x(2 + k) = freqs[k];
    for (Eigen::Index k = 1; k < lin.size(); ++k) x(1 + static_cast<Eigen::Index>(tones) + k) = lin(k);
    starts.push_back(x);
  }
  LsqOptions opt;
  opt.max_iterations = 2000;
  const LsqResult fit = multistart(problem, starts, opt);
  require_finite(fit, "Ramsey");

  RamseyFit out;
  out.single_tone = !two;
  out.y0 = fit.x(0);
  out.decay_rate = fit.x(1) / scale;
  out.t2 = out.decay_rate > 0.0 ? 1.0 / out.decay_rate : std::numeric_limits<double>::infinity();
  const Eigen::Index off = 2 + static_cast<Eigen::Index>(tones);
  auto tone = [&](std::size_t k, double& f, double& a, double& phi) {
    f = fit.x(2 + k) / scale;
    const double c = fit.x(off + 2 * k), s = fit.x(off + 2 * k + 1);
    a = std::hypot(c, s);
    phi = std::atan2(-s, c);
  };
  tone(0, out.f1, out.a1, out.phi1);
  if (two) tone(1, out.f2, out.a2, out.phi2);
  out.ssr = fit.ssr;
  Eigen::VectorXd d = Eigen::VectorXd::Ones(np);
  d(1) = 1.0 / scale;
  for (std::size_t k = 0; k < tones; ++k) d(2 + k) = 1.0 / scale;
  out.covariance = rescale(fit.covariance, d);
  return out;
}

// ---- Rabi ----

RabiFit fit_rabi(const Trace& trace) {
  trace.validate();
  const double scale = time_scale(trace);
  const double span = trace.times.back() - trace.times.front();
  const Eigen::VectorXd t = to_vector(trace.times) / scale;
  const Eigen::VectorXd y = to_vector(trace.values);
  const std::vector<Peak> peaks = find_peaks(trace);
  if (peaks.empty()) throw Error(ErrorCode::FitDivergence, "Rabi trace has no spectral peak");
  const double w0 = kTwoPi * peaks[0].frequency * scale;

  LsqProblem problem;
  problem.residual = [&](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd a = tone_basis(t, x(1), {x(2)});
    return Eigen::VectorXd(a * Eigen::Vector3d(x(0), x(3), x(4)) - y);
  };
  const double inf = std::numeric_limits<double>::infinity();
  problem.lower = (Eigen::VectorXd(5) << -inf, 0.0, 0.0, -inf, -inf).finished();
  problem.upper = (Eigen::VectorXd(5) << inf, 1e3, inf, inf, inf).finished();
  std::vector<Eigen::VectorXd> starts;
  for (double rate : {0.0, 1.0, 4.0}) {
    const Eigen::VectorXd lin = linear_coefficients(tone_basis(t, rate, {w0}), y);
    starts.push_back((Eigen::VectorXd(5) << lin(0), rate, w0, lin(1), lin(2)).finished());
  }
  LsqOptions opt;
  opt.max_iterations = 2000;
  const LsqResult fit = multistart(problem, starts, opt);
  require_finite(fit, "Rabi");

  RabiFit out;
  out.offset = fit.x(0);
  out.decay_rate = fit.x(1) / scale;
  out.omega = fit.x(2) / scale;
  out.amplitude = std::hypot(fit.x(3), fit.x(4));
  out.phase = std::atan2(-fit.x(4), fit.x(3));
  out.ssr = fit.ssr;
  out.covariance =
      rescale(fit.covariance, (Eigen::VectorXd(5) << 1.0, 1.0 / scale, 1.0 / scale, 1.0, 1.0).finished());
  if (out.omega * span < 1.5 * kTwoPi) {
    throw Error(ErrorCode::FitDivergence, "Rabi trace covers fewer than 1.5 oscillation periods");
  }
  return out;
}

// ---- chevron ----

double chevron_rate(double detuning, double center, double coupling) {
  return std::hypot(detuning - center, 2.0 * coupling);
}

ChevronFit fit_chevron(const std::vector<ChevronPoint>& points) {
  if (points.size() < 5) throw Error(ErrorCode::InvalidArgument, "chevron fit needs at least 5 points");
  bool neg = false, pos = false;
  double scale = 0.0;
  for (const ChevronPoint& p : points) {
    if (!(p.omega_r > 0.0) || !std::isfinite(p.detuning)) {
      throw Error(ErrorCode::InvalidArgument, "chevron points need finite detuning and Omega_R > 0");
    }
    neg |= p.detuning < 0.0;
    pos |= p.detuning > 0.0;
    scale = std::max(scale, p.omega_r);
  }
  if (!neg || !pos) {
    throw Error(ErrorCode::InvalidArgument, "chevron points must span both detuning signs");
  }
  const auto lowest = std::min_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.omega_r < b.omega_r;
  });
  LsqProblem problem;
  problem.residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) =
          chevron_rate(points[i].detuning / scale, x(0), x(1)) - points[i].omega_r / scale;
    }
    return r;
  };
  const double inf = std::numeric_limits<double>::infinity();
  problem.lower = Eigen::Vector2d(-inf, 0.0);
  problem.upper = Eigen::Vector2d(inf, inf);
  const double c0 = lowest->detuning / scale;
  const double g0 = 0.5 * lowest->omega_r / scale;
  std::vector<Eigen::VectorXd> starts = {Eigen::Vector2d(c0, g0), Eigen::Vector2d(0.0, g0),
                                         Eigen::Vector2d(c0, 2.0 * g0)};
  const LsqResult fit = multistart(problem, starts);
  require_finite(fit, "chevron");
  ChevronFit out;
  out.center = fit.x(0) * scale;
  out.coupling = fit.x(1) * scale;
  out.ssr = fit.ssr * scale * scale;
  out.covariance = fit.covariance * scale * scale;
  return out;
}

// ---- JSON ----

std::string to_json(const RateFit& f) {
  nlohmann::json j{{"kind", "rate_equation"},
                   {"gamma_eg_per_s", f.gamma_eg},
                   {"gamma_fe_per_s", f.gamma_fe},
                   {"gamma_fg_per_s", f.gamma_fg},
                   {"p0", {f.p0(0), f.p0(1), f.p0(2)}},
                   {"ssr", f.ssr},
                   {"covariance", matrix_json(f.covariance)},
                   {"covariance_order", {"gamma_eg", "gamma_fe", "gamma_fg"}}};
  return j.dump(2);
}

std::string to_json(const RamseyFit& f) {
  nlohmann::json j{{"kind", "ramsey"},
                   {"y0", f.y0},
                   {"t2_s", std::isfinite(f.t2) ? nlohmann::json(f.t2) : nlohmann::json(nullptr)},
                   {"decay_rate_per_s", f.decay_rate},
                   {"f1_hz", f.f1},
                   {"f2_hz", f.f2},
                   {"a1", f.a1},
                   {"a2", f.a2},
                   {"phi1", f.phi1},
                   {"phi2", f.phi2},
                   {"single_tone_fallback", f.single_tone},
                   {"ssr", f.ssr},
                   {"covariance", matrix_json(f.covariance)}};
  j["covariance_order"] = f.single_tone
      ? nlohmann::json{"y0", "decay_rate", "f1", "c1", "s1"}
      : nlohmann::json{"y0", "decay_rate", "f1", "f2", "c1", "s1", "c2", "s2"};
  return j.dump(2);
}

std::string to_json(const RabiFit& f) {
  nlohmann::json j{{"kind", "rabi"},
                   {"omega_rad_per_s", f.omega},
                   {"amplitude", f.amplitude},
                   {"phase", f.phase},
                   {"offset", f.offset},
                   {"decay_rate_per_s", f.decay_rate},
                   {"ssr", f.ssr},
                   {"covariance", matrix_json(f.covariance)},
                   {"covariance_order", {"offset", "decay_rate", "omega", "a", "b"}}};
  return j.dump(2);
}

std::string to_json(const ChevronFit& f) {
  nlohmann::json j{{"kind", "chevron"},
                   {"center_rad_per_s", f.center},
                   {"coupling_rad_per_s", f.coupling},
                   {"ssr", f.ssr},
                   {"covariance", matrix_json(f.covariance)},
                   {"covariance_order", {"center", "coupling"}}};
  return j.dump(2);
}

}  // namespace holo
