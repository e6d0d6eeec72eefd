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

#include "holoqutrit/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "holoqutrit/benchmarking.hpp"
#include "holoqutrit/calibration.hpp"
#include "holoqutrit/error.hpp"
#include "holoqutrit/evolution.hpp"
#include "holoqutrit/holonomic.hpp"
#include "holoqutrit/parallel.hpp"
#include "holoqutrit/seeding.hpp"
#include "holoqutrit/sweeps.hpp"
#include "holoqutrit/tomography.hpp"

namespace holo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNs = 1e-9;
constexpr double kUs = 1e-6;
constexpr double kMHz = 2.0 * kPi * 1e6;  // cycles per microsecond to rad/s

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, (path.empty() ? "/" : path) + ": " + what);
}

// Typed view of one config object with its JSON-pointer path.
class Node {
 public:
  Node(const json* j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const std::string& key) const { return j_ && j_->contains(key) && !(*j_)[key].is_null(); }
  std::string path(const std::string& key) const { return path_ + "/" + key; }
  const json& raw(const std::string& key) const { return (*j_)[key]; }

  void allow(std::initializer_list<const char*> keys) const {
    if (!j_) return;
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_->items()) {
      if (!ok.count(k)) config_error(path(k), "unknown key");
    }
  }

  Node child(const std::string& key) const {
    if (!has(key)) return Node(nullptr, path(key));
    if (!raw(key).is_object()) config_error(path(key), "expected an object");
    return Node(&raw(key), path(key));
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_number()) config_error(path(key), "expected a number");
    const double v = raw(key).get<double>();
    if (!std::isfinite(v)) config_error(path(key), "expected a finite number");
    return v;
  }

  double positive(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) config_error(path(key), "expected a positive number");
    return v;
  }

  long integer(const std::string& key, long fallback, long min_value) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_number_integer()) config_error(path(key), "expected an integer");
    const long v = raw(key).get<long>();
    if (v < min_value) config_error(path(key), "must be >= " + std::to_string(min_value));
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_boolean()) config_error(path(key), "expected true or false");
    return raw(key).get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_string()) config_error(path(key), "expected a string");
    return raw(key).get<std::string>();
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_array()) config_error(path(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < raw(key).size(); ++i) {
      if (!raw(key)[i].is_string()) config_error(path(key) + "/" + std::to_string(i), "expected a string");
      out.push_back(raw(key)[i].get<std::string>());
    }
    return out;
  }

 private:
  const json* j_;
  std::string path_;
};

struct Settings {
  std::uint64_t seed = 0;
  std::optional<long> shots;
  int steps = 4096;
  NoiseModel noise;
  std::string noise_label;
  Envelope envelope = default_qubit_envelope();
  EnvelopeSplit split = EnvelopeSplit::single;
  ControlError error;
  std::string gate_label;
  HolonomicParams gate;
  fs::path base_dir;
};

NoiseModel parse_noise(const Node& root, std::string& label) {
  const std::string key = "noise";
  if (!root.has(key)) {
    label = "paper-device";
    return paper_device::qubit1_noise();
  }
  const json& v = root.raw(key);
  if (v.is_string()) {
    label = v.get<std::string>();
    if (label == "paper-device") return paper_device::qubit1_noise();
    if (label == "paper-device-q2") return paper_device::qubit2_noise();
    if (label == "none") return {};
    config_error(root.path(key), "unknown noise preset '" + label + "'");
  }
  const Node n = root.child(key);
  n.allow({"t1_ge_us", "t1_ef_us", "t2_ge_us", "t2_ef_us"});
  label = "custom";
  double times[4];
  const char* keys[4] = {"t1_ge_us", "t1_ef_us", "t2_ge_us", "t2_ef_us"};
  for (int i = 0; i < 4; ++i) {
    if (!n.has(keys[i])) config_error(n.path(keys[i]), "required");
    times[i] = n.positive(keys[i], 0.0) * kUs;
  }
  try {
    return NoiseModel::from_coherence_times(times[0], times[1], times[2], times[3]);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(root.path(key), e.what());
  }
}

Envelope parse_envelope(const Node& root) {
  const Node e = root.child("envelope");
  e.allow({"kind", "sigma_ns", "total_ns", "flat_ns", "ramp_ns"});
  const std::string kind = e.string("kind", "gaussian");
  if (kind == "gaussian") {
    const double sigma = e.positive("sigma_ns", 30.0) * kNs;
    const double total = e.positive("total_ns", 120.0) * kNs;
    return Envelope::gaussian(sigma, total, 1.0);
  }
  if (kind == "square") {
    const double flat = e.number("flat_ns", 100.0) * kNs;
    const double ramp = e.number("ramp_ns", 10.0) * kNs;
    if (flat < 0.0 || ramp < 0.0 || flat + ramp <= 0.0) {
      config_error(e.path("flat_ns"), "square pulse needs flat, ramp >= 0 and positive length");
    }
    return Envelope::square(flat, ramp, 1.0);
  }
  config_error(e.path("kind"), "expected 'gaussian' or 'square'");
}

HolonomicParams parse_gate(const Node& root, const std::string& key, const std::string& fallback,
                           bool cavity, std::string& label) {
  if (!root.has(key) || root.raw(key).is_string()) {
    label = root.string(key, fallback);
    try {
      return cavity ? named_cavity_gate(label) : named_qubit_gate(label);
    } catch (const Error&) {
      config_error(root.path(key), "unknown gate '" + label + "'");
    }
  }
  const Node g = root.child(key);
  g.allow({"theta", "gamma", "phi"});
  HolonomicParams p{g.number("theta", 0.0), g.number("gamma", 0.0), g.number("phi", 0.0)};
  if (p.theta < 0.0 || p.theta > kPi) config_error(g.path("theta"), "theta must lie in [0, pi]");
  label = "custom";
  return p;
}

Settings parse_settings(const json& cfg, const RunOptions& opt) {
  const Node root(&cfg, "");
  root.allow({"schema_version", "preset", "seed", "threads", "measurement", "integration", "noise",
              "envelope", "split", "control_error", "gate", "qpt", "rb", "sweep", "cavity",
              "calibrate", "description"});
  if (root.string("preset", "paper-device") != "paper-device") {
    config_error(root.path("preset"), "only the 'paper-device' preset is built in");
  }
  Settings s;
  s.seed = static_cast<std::uint64_t>(root.integer("seed", 0, 0));
  if (opt.seed) s.seed = *opt.seed;
  const Node m = root.child("measurement");
  m.allow({"shots"});
  if (m.has("shots")) s.shots = m.integer("shots", 0, 1);
  if (opt.shots) s.shots = opt.shots;
  if (opt.exact_measurement) s.shots.reset();
  const Node integ = root.child("integration");
  integ.allow({"steps"});
  s.steps = static_cast<int>(integ.integer("steps", 4096, 10));
  s.noise = parse_noise(root, s.noise_label);
  s.envelope = parse_envelope(root);
  const std::string split = root.string("split", "single");
  if (split == "single") s.split = EnvelopeSplit::single;
  else if (split == "per_half") s.split = EnvelopeSplit::per_half;
  else config_error(root.path("split"), "expected 'single' or 'per_half'");
  const Node ce = root.child("control_error");
  ce.allow({"epsilon", "detuning_mhz"});
  s.error.rabi_offset = ce.number("epsilon", 0.0);
  if (s.error.rabi_offset <= -1.0) config_error(ce.path("epsilon"), "must be > -1");
  s.error.detuning = ce.number("detuning_mhz", 0.0) * kMHz;
  s.gate = parse_gate(root, "gate", "X_pi", false, s.gate_label);
  if (!opt.config.empty()) s.base_dir = opt.config.parent_path();
  return s;
}

std::string hex(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << v;
  return o.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

json complex_matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json params_json(const HolonomicParams& p, const std::string& label) {
  return {{"name", label}, {"theta", p.theta}, {"gamma", p.gamma}, {"phi", p.phi}};
}

std::string chi_csv(const ComplexMatrix& chi, const std::vector<std::string>& labels) {
  std::ostringstream o;
  write_chi_csv(o, chi, labels);
  return o.str();
}

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  void write(const std::string& name, const std::string& text) {
    write_file(dir_ / name, text);
    names_.push_back(name);
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

// ---- subcommands ----

void cmd_gate(const Settings& s, const Node&, Artifacts& out, int) {
  const GateSchedule g = synthesize_qubit_gate(s.gate, s.envelope, s.split);
  const ComplexMatrix target = target_u1(s.gate);
  const ComplexMatrix u = propagate_schedule(g.pulses, s.error, s.steps);
  json report{{"gate", params_json(s.gate, s.gate_label)},
              {"duration_s", g.duration()},
              {"switch_time_s", g.switch_time},
              {"fidelity_gf", gf_gate_fidelity(u, target)},
              {"leakage", gf_leakage(u)},
              {"unitary", complex_matrix_json(u)},
              {"noise", s.noise_label}};
  if (!s.noise.empty()) {
    const ComplexMatrix superop = qutrit_channel(g.pulses, s.noise, s.error, s.steps);
    const ReducedChi red = reduce_chi(chi_from_superoperator(superop, process_basis_gf()));
    const ComplexMatrix ideal = reduced_chi_of_unitary(target);
    report["f_att"] = fidelity_att(red.chi, ideal);
    report["f_unatt"] = fidelity_unatt(red.chi, ideal);
    report["chi_reduced_trace"] = red.trace;
  }
  const std::vector<CollapseOperator> collapse = collapse_operators(s.noise);
  const Trajectory traj = propagate_lindblad(
      [&](double t) { return qutrit_drive_hamiltonian(g.pulses, s.error, t); }, collapse,
      QutritKet::ground().projector(), TimeGrid::over(g.duration(), s.steps),
      std::max(1, s.steps / 200));
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  out.write("trajectory.csv", csv.str());
  out.write("gate_report.json", report.dump(2) + "\n");
}

void cmd_qpt(const Settings& s, const Node& root, Artifacts& out, int) {
  const Node q = root.child("qpt");
  q.allow({"project_psd", "simulated_prerotations"});
  const GateSchedule g = synthesize_qubit_gate(s.gate, s.envelope, s.split);
  const ComplexMatrix superop = qutrit_channel(g.pulses, s.noise, s.error, s.steps);
  QptOptions opt;
  opt.sampling = {s.shots, s.seed};
  opt.project_psd = q.boolean("project_psd", false);
  if (q.boolean("simulated_prerotations", false)) opt.simulated_prerotations = s.noise;
  const QptResult r = run_qpt(superop, target_u1(s.gate), opt);
  out.write("qpt_record.json", r.record.to_json() + "\n");
  out.write("chi_full.csv", chi_csv(r.chi, process_basis_labels()));
  out.write("chi_reduced.csv", chi_csv(r.reduced.chi, reduced_basis_labels()));
  out.write("chi_reduced_target.csv", chi_csv(r.reduced_target, reduced_basis_labels()));
  json summary{{"gate", params_json(s.gate, s.gate_label)},
               {"noise", s.noise_label},
               {"shots", s.shots ? json(*s.shots) : json(nullptr)},
               {"f_att", r.f_att},
               {"f_unatt", r.f_unatt},
               {"chi_reduced_trace", r.reduced.trace},
               {"chi_residual", r.chi_residual},
               {"max_mle_residual", r.max_mle_residual}};
  out.write("qpt_summary.json", summary.dump(2) + "\n");
}

json fit_json(const RbRecord& r) {
  return {{"A", r.fit.a},   {"p", r.fit.p},           {"B", r.fit.b},
          {"F_avg", r.fit.f_avg}, {"no_decay", r.no_decay}, {"ssr", r.fit.ssr}};
}

void cmd_rb(const Settings& s, const Node& root, Artifacts& out, int threads) {
  const Node rb = root.child("rb");
  rb.allow({"lengths", "randomizations", "interleaved", "depolarizing"});
  RbConfig cfg;
  if (rb.has("lengths")) {
    const json& l = rb.raw("lengths");
    if (!l.is_array() || l.empty()) config_error(rb.path("lengths"), "expected a non-empty array");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_number_integer() || l[i].get<int>() < 1) {
        config_error(rb.path("lengths") + "/" + std::to_string(i), "sequence lengths must be integers >= 1");
      }
      cfg.lengths.push_back(l[i].get<int>());
    }
  } else {
    for (int m = 1; m <= 20; ++m) cfg.lengths.push_back(m);
  }
  cfg.randomizations = static_cast<int>(rb.integer("randomizations", 100, 1));
  cfg.depolarizing = rb.number("depolarizing", 0.0);
  if (cfg.depolarizing < 0.0 || cfg.depolarizing > 1.0) config_error(rb.path("depolarizing"), "must lie in [0, 1]");
  const std::vector<std::string> gates = rb.strings("interleaved", {"X_pi", "X_pi_2", "H", "Z_pi"});
  const CliffordGroup& group = CliffordGroup::instance();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    bool ok = false;
    try {
      ok = group.find(target_u1(named_qubit_gate(gates[i]))).has_value();
    } catch (const Error&) {
    }
    if (!ok) config_error(rb.path("interleaved") + "/" + std::to_string(i), "not a named Clifford gate");
  }
  cfg.seed = s.seed;
  cfg.noise = s.noise;
  cfg.error = s.error;
  cfg.envelope = s.envelope;
  cfg.split = s.split;
  cfg.steps = s.steps;
  cfg.threads = threads;

  json summary{{"noise", s.noise_label}, {"randomizations", cfg.randomizations}};
  json inter = json::array();
  std::optional<RbRecord> reference;
  auto write_record = [&](const std::string& name, const RbRecord& r) {
    std::ostringstream o;
    write_rb_csv(o, r);
    out.write(name, o.str());
  };
  if (gates.empty()) reference = run_rb(cfg).reference;
  for (const std::string& g : gates) {
    cfg.interleaved = g;
    const RbResult r = run_rb(cfg);
    if (!reference) reference = r.reference;
    write_record("rb_interleaved_" + g + ".csv", *r.interleaved);
    json j = fit_json(*r.interleaved);
    j["gate"] = g;
    j["F_gate"] = r.f_gate ? json(*r.f_gate) : json(nullptr);
    if (!r.note.empty()) j["note"] = r.note;
    inter.push_back(j);
  }
  write_record("rb_reference.csv", *reference);
  summary["reference"] = fit_json(*reference);
  summary["interleaved"] = inter;
  out.write("rb_summary.json", summary.dump(2) + "\n");
}

std::vector<double> parse_axis(const Node& parent, const std::string& key, double lo, double hi, int n,
                               double unit) {
  const Node a = parent.child(key);
  a.allow({"min", "max", "points"});
  const double mn = a.number("min", lo), mx = a.number("max", hi);
  const long pts = a.integer("points", n, 1);
  if (pts > 1 && !(mx > mn)) config_error(a.path("max"), "max must exceed min");
  std::vector<double> out;
  for (long i = 0; i < pts; ++i) out.push_back(unit * (pts == 1 ? mn : mn + (mx - mn) * i / (pts - 1)));
  return out;
}

void cmd_sweep(const Settings& s, const Node& root, Artifacts& out, int threads) {
  const Node sw = root.child("sweep");
  sw.allow({"gates", "families", "epsilon", "detuning_mhz"});
  const std::vector<std::string> gates = sw.strings("gates", {"H", "T"});
  const std::vector<std::string> families = sw.strings("families", {"holonomic", "dynamic"});
  const std::vector<double> eps = parse_axis(sw, "epsilon", -0.1, 0.1, 21, 1.0);
  const std::vector<double> det = parse_axis(sw, "detuning_mhz", -1.0, 1.0, 21, kMHz);
  json summary = json::array();
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    GateFamily fam;
    if (families[fi] == "holonomic") fam = GateFamily::holonomic;
    else if (families[fi] == "dynamic") fam = GateFamily::dynamic;
    else config_error(sw.path("families") + "/" + std::to_string(fi), "expected 'holonomic' or 'dynamic'");
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      CrosstalkConfig cfg{fam, gates[gi], eps, det, s.envelope, s.steps, threads};
      try {
        crosstalk_schedule(fam, gates[gi], s.envelope);
      } catch (const Error& e) {
        config_error(sw.path("gates") + "/" + std::to_string(gi), e.what());
      }
      const FidelityGrid grid = crosstalk_sweep(cfg);
      const std::string stem = "sweep_" + families[fi] + "_" + gates[gi];
      std::ostringstream csv;
      write_grid_csv(csv, grid);
      out.write(stem + ".csv", csv.str());
      json side{{"settings", json::parse(crosstalk_settings_json(cfg))},
                {"settings_hash", hex(crosstalk_settings_hash(cfg))},
                {"mean_fidelity", grid.mean()},
                {"min_fidelity", grid.fidelity.minCoeff()}};
      out.write(stem + ".json", side.dump(2) + "\n");
      summary.push_back({{"family", families[fi]}, {"gate", gates[gi]}, {"mean_fidelity", grid.mean()}});
    }
  }
  out.write("sweep_summary.json", summary.dump(2) + "\n");
}

void cmd_cavity(const Settings& s, const Node& root, Artifacts& out, int threads) {
  const Node c = root.child("cavity");
  c.allow({"gate", "decoherence", "swap_coupling_mhz", "coupling_mhz", "ramp_ns"});
  CavityPipelineConfig cfg;
  std::string label;
  cfg.gate = parse_gate(c, "gate", "X_pi", true, label);
  cfg.include_decoherence = c.boolean("decoherence", true);
  cfg.swap_coupling = c.positive("swap_coupling_mhz", 0.845) * kMHz;
  if (c.has("coupling_mhz")) cfg.coupling = c.positive("coupling_mhz", 1.0) * kMHz;
  cfg.ramp = c.number("ramp_ns", 10.0) * kNs;
  if (cfg.ramp < 0.0) config_error(c.path("ramp_ns"), "must be >= 0");
  cfg.sampling = {s.shots, s.seed};
  cfg.steps = s.steps;
  cfg.threads = threads;
  const CavityPipelineResult r = cavity_pipeline(cfg);
  out.write("cavity_chi.csv", chi_csv(r.gate.chi, reduced_basis_labels()));
  out.write("cavity_chi_reference.csv", chi_csv(r.reference.chi, reduced_basis_labels()));
  out.write("cavity_chi_target.csv", chi_csv(r.chi_target, reduced_basis_labels()));
  json summary{{"gate", params_json(cfg.gate, label)},
               {"decoherence", cfg.include_decoherence},
               {"gate_duration_s", r.gate_duration},
               {"swap_duration_s", r.swap_duration},
               {"decode_phase", r.decode_phase},
               {"f_att", r.gate.f_att},
               {"f_unatt", r.gate.f_unatt},
               {"chi_trace", r.gate.trace},
               {"reference_f_att", r.reference.f_att},
               {"loss", r.loss}};
  out.write("cavity_summary.json", summary.dump(2) + "\n");
}

Trace read_trace(const Settings& s, const Node& n, const std::string& key, int detrend) {
  const fs::path p = s.base_dir / n.string(key, "");
  if (!n.has(key)) config_error(n.path(key), "trace file required");
  std::ifstream f(p);
  if (!f) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  return read_trace_csv(f, p.filename().string(), detrend);
}

void cmd_calibrate(const Settings& s, const Node& root, Artifacts& out, int) {
  const Node c = root.child("calibrate");
  c.allow({"kind", "trace", "traces", "points", "detrend_degree"});
  const std::string kind = c.string("kind", "");
  const int detrend = static_cast<int>(c.integer("detrend_degree", -1, -1));
  std::string result;
  if (kind == "ramsey") {
    result = to_json(fit_ramsey(read_trace(s, c, "trace", detrend)));
  } else if (kind == "rabi") {
    result = to_json(fit_rabi(read_trace(s, c, "trace", detrend)));
  } else if (kind == "rate_equation") {
    const Node t = c.child("traces");
    t.allow({"g", "e", "f"});
    result = to_json(fit_rate_equation(read_trace(s, t, "g", detrend), read_trace(s, t, "e", detrend),
                                       read_trace(s, t, "f", detrend)));
  } else if (kind == "chevron") {
    // columns detuning_mhz, rabi_mhz (cycles per microsecond)
    const Trace pts = read_trace(s, c, "points", -1);
    std::vector<ChevronPoint> points;
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back({pts.times[i] * kMHz, pts.values[i] * kMHz});
    result = to_json(fit_chevron(points));
  } else {
    config_error(c.path("kind"), "expected ramsey, rabi, rate_equation or chevron");
  }
  out.write("calibration.json", result + "\n");
}

}  // namespace

json default_config() { return {{"schema_version", 1}}; }

json load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "/: " + std::string(e.what()));
  }
  if (!cfg.is_object()) config_error("", "config must be a JSON object");
  if (!cfg.contains("schema_version")) config_error("/schema_version", "missing");
  if (!cfg["schema_version"].is_number_integer() || cfg["schema_version"].get<int>() != 1) {
    config_error("/schema_version", "unsupported schema version (expected 1)");
  }
  return cfg;
}

int run(const RunOptions& opt, std::ostream& log) {
  static const std::set<std::string> commands = {"gate", "qpt", "rb", "sweep", "cavity", "calibrate"};
  if (!commands.count(opt.command)) {
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + opt.command + "'");
  }
  const json cfg = opt.config.empty() ? default_config() : load_config(opt.config);
  const Settings s = parse_settings(cfg, opt);
  const Node root(&cfg, "");
  const int threads = opt.threads ? std::max(1, *opt.threads)
                                  : static_cast<int>(root.integer("threads", default_threads(), 1));

  json effective = cfg;
  effective["seed"] = s.seed;
  effective["measurement"] = {{"shots", s.shots ? json(*s.shots) : json(nullptr)}};
  effective.erase("threads");
  const std::string config_hash = hex(fnv1a(opt.command + "\n" + effective.dump()));

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + opt.out.string() + ": " + ec.message());
  json manifest{{"tool", "holoqutrit"},
                {"version", HOLO_VERSION},
                {"command", opt.command},
                {"config_hash", config_hash},
                {"seed", s.seed},
                {"threads", threads},
                {"started_utc", utc_now()},
                {"status", "incomplete"}};
  const fs::path manifest_path = opt.out / "manifest.json";
  write_file(manifest_path, manifest.dump(2) + "\n");

  const auto t0 = std::chrono::steady_clock::now();
  Artifacts out(opt.out);
  if (opt.command == "gate") cmd_gate(s, root, out, threads);
  else if (opt.command == "qpt") cmd_qpt(s, root, out, threads);
  else if (opt.command == "rb") cmd_rb(s, root, out, threads);
  else if (opt.command == "sweep") cmd_sweep(s, root, out, threads);
  else if (opt.command == "cavity") cmd_cavity(s, root, out, threads);
  else cmd_calibrate(s, root, out, threads);

  manifest["status"] = "complete";
  manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["artifacts"] = out.names();
  write_file(manifest_path, manifest.dump(2) + "\n");
  log << opt.command << ": wrote " << out.names().size() << " artifacts to " << opt.out.string() << "\n";
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Holonomic qutrit and cavity gate simulator"};
  app.set_version_flag("--version", HOLO_VERSION);
  app.require_subcommand(1, 1);
  RunOptions opt;
  std::string config, out = "out";
  std::uint64_t seed = 0;
  int threads = 0;
  long shots = 0;
  bool exact = false;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"gate", "synthesize a gate, propagate it and report its fidelity"},
      {"qpt", "run the process tomography pipeline"},
      {"rb", "run reference and interleaved randomized benchmarking"},
      {"sweep", "compute crosstalk fidelity grids"},
      {"cavity", "run the Fock-state encode / gate / decode pipeline"},
      {"calibrate", "fit a trace file"}};
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    auto* ex = sub->add_flag("--exact-measurement", exact, "exact expectation values");
    sub->add_option("--shots", shots, "shots per measurement setting")->check(CLI::PositiveNumber)->excludes(ex);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  for (CLI::App* sub : app.get_subcommands()) {
    opt.command = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--threads")) opt.threads = threads;
    if (sub->count("--shots")) opt.shots = shots;
  }
  opt.config = config;
  opt.out = out;
  opt.exact_measurement = exact;
  try {
    return run(opt, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ConfigError: return 2;
      case ErrorCode::IoError: return 3;
      default: return 1;
    }
  }
}

}  // namespace holo
