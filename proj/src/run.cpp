#include "qnet/run.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qnet/analysis.hpp"
#include "qnet/circuit.hpp"
#include "qnet/experiments.hpp"
#include "qnet/io.hpp"
#include "qnet/mapping.hpp"
#include "qnet/tight_binding.hpp"

namespace qnet {

namespace {

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string jarray(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ", ";
    out += format_double(values[k]);
  }
  out += "]";
  return out;
}

std::string jrows(const std::vector<std::vector<double>>& rows) {
  std::string out = "[";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k > 0) out += ", ";
    out += jarray(rows[k]);
  }
  out += "]";
  return out;
}

// One insertion-ordered provenance section, values pre-rendered as JSON.
struct Section {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  void add_raw(const std::string& key, std::string rendered) {
    entries.emplace_back(key, std::move(rendered));
  }
  void add_string(const std::string& key, const std::string& v) {
    add_raw(key, jstr(v));
  }
  void add_number(const std::string& key, double v) {
    add_raw(key, format_double(v));
  }
  void add_integer(const std::string& key, long long v) {
    add_raw(key, std::to_string(v));
  }
  void add_seed(const std::string& key, std::uint64_t v) {
    add_raw(key, std::to_string(v));
  }
  void add_bool(const std::string& key, bool v) {
    add_raw(key, v ? "true" : "false");
  }
};

std::string render_section(const Section& s, int indent) {
  const std::string pad(indent, ' ');
  std::string out = pad + jstr(s.name) + ": {";
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    out += k > 0 ? ",\n" : "\n";
    out += pad + "  " + jstr(s.entries[k].first) + ": " + s.entries[k].second;
  }
  out += "\n" + pad + "}";
  return out;
}

struct ResolvedRun {
  std::string experiment;
  std::string side;
  EnvelopeMethod method = EnvelopeMethod::kAnalyticSignal;
  double t_end = 0.0;
  int stride = 20;
  std::uint64_t seed = 42;
  int threads = 0;
  int initial_site = 0;  // 0-based
  double initial_amplitude = 1.0;
  bool write_realizations = false;

  bool has_quantum = false;
  bool has_circuit = false;
  TightBindingHamiltonian quantum;
  CircuitNetwork circuit;

  double transfer_time = -1.0;  // seconds; < 0 when undefined
  int transfer_target = -1;     // 0-based
  double eta = 0.0;             // time-scale factor; 0 when undefined

  DisorderSpec disorder;
  int n_sites = 0;
  int realization = 0;

  Section run_section;
  Section exp_section;
};

int checked_site_count(const ResolvedRun& r) {
  return r.has_quantum ? r.quantum.n_sites() : r.circuit.n_nodes();
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

int checked_node_index(double raw, int n_sites, const std::string& what) {
  if (raw != std::rint(raw) || raw < 1 || raw > n_sites) {
    throw ConfigError(what + " must be an integer site number in 1.." +
                      std::to_string(n_sites));
  }
  return static_cast<int>(raw) - 1;
}

void resolve_custom(Config& cfg, ResolvedRun& r) {
  r.exp_section.name = "custom";
  if (cfg.has("custom.inductances")) {
    const std::vector<double> raw_r =
        cfg.get_number_array("custom.resistances");
    const std::vector<double> ind = cfg.get_number_array("custom.inductances");
    const std::vector<double> cap =
        cfg.get_number_array("custom.capacitances");
    const std::vector<std::vector<double>> rows =
        cfg.get_number_rows("custom.branches");
    const int n = static_cast<int>(ind.size());
    if (n < 1 || static_cast<int>(cap.size()) != n ||
        (!raw_r.empty() && static_cast<int>(raw_r.size()) != n)) {
      throw ConfigError(
          "custom circuit: inductances and capacitances must have the same "
          "length (resistances too, when given)");
    }
    // A zero resistance entry marks a node without a resistor (lossless).
    Eigen::VectorXd res = Eigen::VectorXd::Constant(n, kLossless);
    for (int k = 0; k < static_cast<int>(raw_r.size()); ++k) {
      if (raw_r[k] != 0.0) res[k] = raw_r[k];
    }
    std::vector<CouplingBranch> branches;
    for (const std::vector<double>& row : rows) {
      if (row.size() != 3) {
        throw ConfigError(
            "custom.branches rows must be [node_a, node_b, inductance]");
      }
      branches.push_back({checked_node_index(row[0], n, "custom.branches"),
                          checked_node_index(row[1], n, "custom.branches"),
                          row[2]});
    }
    r.circuit = make_network(res, to_vector(ind), to_vector(cap), branches);
    r.has_circuit = true;
    const double tol = cfg.get_number("custom.asymmetry_tolerance", 1e-6);
    if (r.side != "circuit") {
      r.quantum = circuit_to_quantum(r.circuit, tol);
      r.has_quantum = true;
    }
    r.exp_section.add_raw("resistances", jarray(raw_r));
    r.exp_section.add_raw("inductances", jarray(ind));
    r.exp_section.add_raw("capacitances", jarray(cap));
    r.exp_section.add_raw("branches", jrows(rows));
    r.exp_section.add_number("asymmetry_tolerance", tol);
    return;
  }

  if (!cfg.has("custom.site_energies")) {
    throw ConfigError(
        "custom experiment: give either custom.inductances (circuit form) or "
        "custom.site_energies (quantum form)");
  }
  const std::vector<double> eps = cfg.get_number_array("custom.site_energies");
  const int n = static_cast<int>(eps.size());
  std::vector<double> gam = cfg.get_number_array("custom.loss_rates");
  if (gam.empty()) gam.assign(n, 0.0);
  if (static_cast<int>(gam.size()) != n) {
    throw ConfigError(
        "custom.loss_rates must match custom.site_energies in length");
  }
  const std::vector<std::vector<double>> rows =
      cfg.get_number_rows("custom.couplings");
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (const std::vector<double>& row : rows) {
    if (row.size() != 3) {
      throw ConfigError(
          "custom.couplings rows must be [site_a, site_b, coupling]");
    }
    const int a = checked_node_index(row[0], n, "custom.couplings");
    const int b = checked_node_index(row[1], n, "custom.couplings");
    couplings(a, b) = row[2];
    couplings(b, a) = row[2];
  }
  r.quantum = make_hamiltonian(to_vector(eps), to_vector(gam), couplings);
  r.has_quantum = true;
  r.exp_section.add_raw("site_energies", jarray(eps));
  r.exp_section.add_raw("loss_rates", jarray(gam));
  r.exp_section.add_raw("couplings", jrows(rows));

  const std::vector<double> cap = cfg.get_number_array("custom.capacitances");
  if (!cap.empty()) {
    if (static_cast<int>(cap.size()) != n) {
      throw ConfigError(
          "custom.capacitances must match custom.site_energies in length");
    }
    r.circuit = quantum_to_circuit(r.quantum, to_vector(cap));
    r.has_circuit = true;
    r.exp_section.add_raw("capacitances", jarray(cap));
  } else if (r.side != "quantum") {
    throw ConfigError(
        "custom quantum form has no circuit realization without "
        "custom.capacitances; set run.side = \"quantum\" or provide them");
  }
}

ResolvedRun resolve(Config& cfg) {
  ResolvedRun r;
  r.experiment = cfg.get_string("run.experiment", "");
  static const std::set<std::string> kExperiments = {"anderson", "ssh",
                                                     "transfer", "b800",
                                                     "custom"};
  if (kExperiments.count(r.experiment) == 0) {
    throw ConfigError(
        "run.experiment must be one of anderson|ssh|transfer|b800|custom"
        " (got '" + r.experiment + "')");
  }
  r.side = cfg.get_string("run.side", "both");
  if (r.side != "quantum" && r.side != "circuit" && r.side != "both") {
    throw ConfigError("run.side must be quantum|circuit|both (got '" +
                      r.side + "')");
  }
  std::string method = cfg.get_string("run.envelope_method", "analytic");
  if (method == "analytic-signal") method = "analytic";
  if (method == "analytic") {
    r.method = EnvelopeMethod::kAnalyticSignal;
  } else if (method == "quadrature") {
    r.method = EnvelopeMethod::kQuadrature;
  } else {
    throw ConfigError(
        "run.envelope_method must be analytic|quadrature (got '" + method +
        "')");
  }
  r.stride = static_cast<int>(cfg.get_integer("run.sample_stride", 20));
  if (r.stride < 1) throw ConfigError("run.sample_stride must be >= 1");
  r.seed = cfg.get_seed("run.seed", 42);
  r.threads = static_cast<int>(cfg.get_integer("run.threads", 0));
  if (r.threads < 0) throw ConfigError("run.threads must be >= 0");
  r.initial_amplitude = cfg.get_number("run.initial_amplitude", 1.0);
  if (!(r.initial_amplitude > 0.0)) {
    throw ConfigError("run.initial_amplitude must be positive");
  }
  r.write_realizations = cfg.get_bool("run.write_realizations", false);

  double default_t_end = 2.0;
  int default_initial = 1;  // 1-based

  if (r.experiment == "anderson") {
    r.n_sites = static_cast<int>(cfg.get_integer("anderson.n_sites", 9));
    r.disorder.delta = cfg.get_number("anderson.delta", 0.0);
    r.disorder.base_inductance =
        cfg.get_number("anderson.base_inductance", 96.05e-3);
    r.disorder.n_realizations =
        static_cast<int>(cfg.get_integer("anderson.n_realizations", 50));
    r.disorder.master_seed = r.seed;
    r.realization =
        static_cast<int>(cfg.get_integer("anderson.realization", 0));
    r.quantum = anderson_quantum(r.n_sites, r.disorder, r.realization);
    r.circuit = anderson_preset(r.n_sites, r.disorder, r.realization);
    r.has_quantum = r.has_circuit = true;
    default_t_end = kAndersonWindow;
    default_initial = (r.n_sites - 1) / 2 + 1;
    r.exp_section.name = "anderson";
    r.exp_section.add_integer("n_sites", r.n_sites);
    r.exp_section.add_number("delta", r.disorder.delta);
    r.exp_section.add_number("base_inductance", r.disorder.base_inductance);
    r.exp_section.add_integer("n_realizations", r.disorder.n_realizations);
    r.exp_section.add_integer("realization", r.realization);
  } else if (r.experiment == "ssh") {
    SshOptions opts;
    opts.n_cells = static_cast<int>(cfg.get_integer("ssh.n_cells", 5));
    const std::string edge = cfg.get_string("ssh.edge_bond", "weak");
    if (edge == "weak") {
      opts.edge_bond = EdgeBond::kWeak;
    } else if (edge == "strong") {
      opts.edge_bond = EdgeBond::kStrong;
    } else {
      throw ConfigError("ssh.edge_bond must be weak|strong (got '" + edge +
                        "')");
    }
    opts.uniform_site_frequency =
        cfg.get_bool("ssh.uniform_site_frequency", true);
    opts.lossy = cfg.get_bool("ssh.lossy", true);
    r.quantum = ssh_quantum(opts);
    r.circuit = ssh_preset(opts);
    r.has_quantum = r.has_circuit = true;
    r.n_sites = 2 * opts.n_cells;
    default_t_end = kSshWindow;
    r.exp_section.name = "ssh";
    r.exp_section.add_integer("n_cells", opts.n_cells);
    r.exp_section.add_string("edge_bond", edge);
    r.exp_section.add_bool("uniform_site_frequency",
                           opts.uniform_site_frequency);
    r.exp_section.add_bool("lossy", opts.lossy);
  } else if (r.experiment == "transfer") {
    const int n = static_cast<int>(cfg.get_integer("transfer.n_sites", 7));
    const double t_f = cfg.get_number("transfer.t_f", 5.6);
    const bool lossy = cfg.get_bool("transfer.lossy", true);
    TransferPreset preset = transfer_preset(n, t_f, lossy);
    r.quantum = std::move(preset.quantum);
    r.circuit = std::move(preset.circuit);
    r.has_quantum = r.has_circuit = true;
    r.n_sites = n;
    r.transfer_time = t_f;
    r.transfer_target = checked_node_index(
        static_cast<double>(cfg.get_integer("transfer.target_site", n)), n,
        "transfer.target_site");
    default_t_end = kTransferWindowFactor * t_f;
    r.exp_section.name = "transfer";
    r.exp_section.add_integer("n_sites", n);
    r.exp_section.add_number("t_f", t_f);
    r.exp_section.add_bool("lossy", lossy);
    r.exp_section.add_integer("target_site", r.transfer_target + 1);
  } else if (r.experiment == "b800") {
    const bool lossy = cfg.get_bool("b800.lossy", true);
    B800Preset preset = b800_preset(lossy);
    r.quantum = std::move(preset.platform);
    r.circuit = std::move(preset.circuit);
    r.has_quantum = r.has_circuit = true;
    r.eta = preset.eta;
    r.n_sites = r.quantum.n_sites();
    default_t_end = kB800Window;
    r.exp_section.name = "b800";
    r.exp_section.add_bool("lossy", lossy);
  } else {
    resolve_custom(cfg, r);
    r.n_sites = checked_site_count(r);
  }

  r.t_end = cfg.get_number("run.t_end", default_t_end);
  if (!(r.t_end > 0.0)) throw ConfigError("run.t_end must be positive");
  const long long init1 =
      cfg.get_integer("run.initial_site", default_initial);
  const int n = checked_site_count(r);
  if (init1 < 1 || init1 > n) {
    throw ConfigError("run.initial_site must be in 1.." + std::to_string(n) +
                      " (got " + std::to_string(init1) + ")");
  }
  r.initial_site = static_cast<int>(init1) - 1;

  r.run_section.name = "run";
  r.run_section.add_string("experiment", r.experiment);
  r.run_section.add_string("side", r.side);
  r.run_section.add_number("t_end", r.t_end);
  r.run_section.add_integer("sample_stride", r.stride);
  r.run_section.add_seed("seed", r.seed);
  r.run_section.add_integer("threads", r.threads);
  r.run_section.add_integer("initial_site", init1);
  r.run_section.add_number("initial_amplitude", r.initial_amplitude);
  r.run_section.add_string("envelope_method", method);
  r.run_section.add_bool("write_realizations", r.write_realizations);
  return r;
}

std::string render_provenance(const ResolvedRun& r,
                              const std::string& command) {
  std::string out = "{\n  \"command\": " + jstr(command) +
                    ",\n  \"config\": {\n";
  out += render_section(r.run_section, 4);
  out += ",\n";
  out += render_section(r.exp_section, 4);
  out += "\n  }\n}\n";
  return out;
}

// t[,t_physical_ps],site_1..site_N table.  ps_per_second > 0 adds the
// physical-time column (ring experiment convention).
std::string trajectory_csv(const Eigen::VectorXd& times,
                           const Eigen::MatrixXd& values,
                           double ps_per_second) {
  std::vector<std::string> cells;
  cells.push_back("t");
  if (ps_per_second > 0.0) cells.push_back("t_physical_ps");
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    cells.push_back("site_" + std::to_string(j + 1));
  }
  std::string out = csv_row(cells);
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    cells.clear();
    cells.push_back(format_double(times[k]));
    if (ps_per_second > 0.0) {
      cells.push_back(format_double(times[k] * ps_per_second));
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      cells.push_back(format_double(values(k, j)));
    }
    out += csv_row(cells);
  }
  return out;
}

Eigen::VectorXd interp_at(const Eigen::VectorXd& xs, const Eigen::MatrixXd& ys,
                          double x) {
  const Eigen::Index n = xs.size();
  if (x <= xs[0]) return ys.row(0).transpose();
  if (x >= xs[n - 1]) return ys.row(n - 1).transpose();
  const double* begin = xs.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, x) - begin;
  const Eigen::Index lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ((1.0 - w) * ys.row(lo) + w * ys.row(hi)).transpose();
}

std::string path_join(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

}  // namespace

void run_experiment(Config& cfg, const std::string& out_dir) {
  ResolvedRun r = resolve(cfg);
  cfg.reject_unknown();
  ensure_directory(out_dir);

  const bool want_quantum = r.side != "circuit";
  const bool want_circuit = r.side != "quantum";
  if (want_quantum && !r.has_quantum) {
    throw ConfigError("this configuration defines no quantum side");
  }
  if (want_circuit && !r.has_circuit) {
    throw ConfigError(
        "this configuration defines no circuit side; set run.side = "
        "\"quantum\"");
  }
  const double ps_per_second = r.eta > 0.0 ? 1e12 / r.eta : 0.0;

  QuantumTrajectory q;
  if (want_quantum) {
    const Eigen::VectorXd times =
        Eigen::VectorXd::LinSpaced(1001, 0.0, r.t_end);
    q = propagate_expm(r.quantum, unit_excitation(r.quantum, r.initial_site),
                       times);
    write_text_file(path_join(out_dir, "trajectory_quantum.csv"),
                    trajectory_csv(q.times, q.populations, ps_per_second));
  }

  CircuitTrajectory c;
  EnvelopeSeries env;
  if (want_circuit) {
    const CircuitState init =
        unit_excitation(r.circuit, r.initial_site, r.initial_amplitude);
    c = simulate(r.circuit, init, r.t_end, 0.0, r.stride);
    env = envelope(c, r.circuit, r.method);
    write_text_file(
        path_join(out_dir, "trajectory_circuit.csv"),
        trajectory_csv(c.times, c.squared_voltages, ps_per_second));
    write_text_file(path_join(out_dir, "envelope.csv"),
                    trajectory_csv(env.times, env.envelope, ps_per_second));
  }

  JsonWriter w;
  w.begin_object();
  w.key("experiment").string(r.experiment);
  w.key("side").string(r.side);
  if (r.has_quantum) {
    w.key("weak_coupling_ratio").number(weak_coupling_ratio(r.quantum));
  }
  if (want_quantum) {
    const Eigen::Index last = q.n_samples() - 1;
    const Eigen::VectorXd final_pops =
        q.populations.row(last).transpose();
    w.key("return_probability").number(final_pops[r.initial_site]);
    w.key("participation_ratio_final").number(participation_ratio(final_pops));
    w.key("spread_variance_final").number(spread_variance(final_pops));
    w.key("quantum_energy_final").number(final_pops.sum());
  }
  if (want_circuit) {
    w.key("decay_rate").number(fit_decay_rate(c.times, energy_series(r.circuit, c)));
  } else {
    w.key("decay_rate").number(fit_decay_rate(q.times, quantum_energy(q)));
  }
  if (want_quantum && want_circuit) {
    const AgreementReport report = compare_populations(q, env);
    w.key("agreement_mae").number(report.global_mae);
    w.key("agreement_l2").number(report.global_l2);
    w.key("agreement_worst_site").integer(report.worst_site + 1);
    w.key("agreement_window_start").number(report.window_start);
    w.key("agreement_window_end").number(report.window_end);
  }
  if (r.transfer_time > 0.0) {
    const TransferEfficiency eff =
        want_quantum
            ? transfer_efficiency(q, r.transfer_target, r.transfer_time)
            : transfer_efficiency(env, r.transfer_target, r.transfer_time);
    w.key("transfer_efficiency").number(eff.at_time);
    w.key("transfer_efficiency_peak").number(eff.peak_in_window);
  }
  if (r.eta > 0.0) {
    w.key("eta").number(r.eta);
    w.key("physical_window_ps").number(r.t_end * ps_per_second);
  }
  w.end_object();
  write_text_file(path_join(out_dir, "metrics.json"), w.take());
  write_text_file(path_join(out_dir, "provenance.json"),
                  render_provenance(r, "run"));
}

void synthesize_experiment(Config& cfg, const std::string& out_dir) {
  ResolvedRun r = resolve(cfg);
  cfg.reject_unknown();
  if (!r.has_circuit) {
    throw ConfigError("synthesis needs a circuit; this configuration defines "
                      "none");
  }
  ensure_directory(out_dir);

  const int n = r.circuit.n_nodes();
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(n);
  v0[r.initial_site] = r.initial_amplitude;
  const SynthesisResult synthesis = synthesize_controls(r.circuit, v0);

  std::string components =
      csv_row({"element", "R", "L", "C", "L_nm"});
  for (int k = 0; k < n; ++k) {
    components += csv_row({"node_" + std::to_string(k + 1),
                           format_double(r.circuit.resistances[k]),
                           format_double(r.circuit.inductances[k]),
                           format_double(r.circuit.capacitances[k]), ""});
  }
  for (const CouplingBranch& br : r.circuit.branches) {
    components += csv_row({"branch_" + std::to_string(br.node_a + 1) + "_" +
                               std::to_string(br.node_b + 1),
                           "", "", "", format_double(br.inductance)});
  }
  write_text_file(path_join(out_dir, "components.csv"), components);

  std::string codes =
      csv_row({"parameter", "voltage", "code", "quantization_error"});
  for (const SynthesisEntry& entry : synthesis.entries) {
    codes += csv_row({entry.name, format_double(entry.voltage),
                      std::to_string(entry.code),
                      format_double(entry.quantization_error)});
  }
  write_text_file(path_join(out_dir, "dac_codes.csv"), codes);
}

void run_ensemble(Config& cfg, const std::string& out_dir) {
  ResolvedRun r = resolve(cfg);
  cfg.reject_unknown();
  if (r.experiment != "anderson") {
    throw ConfigError(
        "ensemble requires the disordered-chain experiment "
        "(run.experiment = \"anderson\")");
  }
  ensure_directory(out_dir);

  const bool include_circuit = r.side != "quantum";
  const EnsembleResult result = run_anderson_ensemble(
      r.disorder, r.t_end, r.n_sites, r.threads, include_circuit);

  std::vector<std::string> cells;
  cells.push_back("t");
  for (int j = 0; j < r.n_sites; ++j) {
    cells.push_back("site_" + std::to_string(j + 1) + "_quantum");
  }
  if (include_circuit) {
    for (int j = 0; j < r.n_sites; ++j) {
      cells.push_back("site_" + std::to_string(j + 1) + "_circuit");
    }
  }
  std::string mean_csv = csv_row(cells);
  for (Eigen::Index k = 0; k < result.quantum_times.size(); ++k) {
    cells.clear();
    const double t = result.quantum_times[k];
    cells.push_back(format_double(t));
    for (int j = 0; j < r.n_sites; ++j) {
      cells.push_back(format_double(result.quantum_mean(k, j)));
    }
    if (include_circuit) {
      const Eigen::VectorXd row =
          interp_at(result.circuit_times, result.circuit_mean, t);
      for (int j = 0; j < r.n_sites; ++j) {
        cells.push_back(format_double(row[j]));
      }
    }
    mean_csv += csv_row(cells);
  }
  write_text_file(path_join(out_dir, "ensemble_mean.csv"), mean_csv);

  JsonWriter w;
  w.begin_object();
  w.key("experiment").string(r.experiment);
  w.key("delta").number(r.disorder.delta);
  w.key("n_realizations").integer(r.disorder.n_realizations);
  w.key("n_sites").integer(r.n_sites);
  w.key("initial_site").integer(result.initial_site + 1);
  w.key("return_probability").number(result.return_probability);
  w.key("mean_participation_ratio").number(result.mean_participation_ratio);
  w.key("times").begin_array();
  for (Eigen::Index k = 0; k < result.quantum_times.size(); ++k) {
    w.number(result.quantum_times[k]);
  }
  w.end_array();
  w.key("variance_curve").begin_array();
  for (Eigen::Index k = 0; k < result.variance_curve.size(); ++k) {
    w.number(result.variance_curve[k]);
  }
  w.end_array();
  w.end_object();
  write_text_file(path_join(out_dir, "ensemble_metrics.json"), w.take());

  if (r.write_realizations) {
    for (int idx = 0; idx < r.disorder.n_realizations; ++idx) {
      const TightBindingHamiltonian h =
          anderson_quantum(r.n_sites, r.disorder, idx);
      const QuantumTrajectory q = propagate_expm(
          h, unit_excitation(h, result.initial_site), result.quantum_times);
      write_text_file(
          path_join(out_dir,
                    "realization_" + std::to_string(idx) + "_quantum.csv"),
          trajectory_csv(q.times, q.populations, 0.0));
    }
  }
  write_text_file(path_join(out_dir, "provenance.json"),
                  render_provenance(r, "ensemble"));
}

std::string presets_listing() {
  auto describe = [](const CircuitNetwork& net) {
    auto uniques = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      std::string out;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) out += "/";
        out += format_double(v[k]);
      }
      return out;
    };
    std::vector<double> r_values, l_values, c_values, b_values;
    for (int k = 0; k < net.n_nodes(); ++k) {
      if (node_lossy(net, k)) r_values.push_back(net.resistances[k]);
      l_values.push_back(net.inductances[k]);
      c_values.push_back(net.capacitances[k]);
    }
    for (const CouplingBranch& br : net.branches) {
      b_values.push_back(br.inductance);
    }
    std::string out = "    R = " +
                      (r_values.empty() ? std::string("none (lossless)")
                                        : uniques(r_values) + " ohm");
    out += "; L = " + uniques(l_values) + " H";
    out += "; C = " + uniques(c_values) + " F";
    out += "; L_nm = " + uniques(b_values) + " H\n";
    return out;
  };

  std::string out;
  {
    DisorderSpec spec;
    const CircuitNetwork net = anderson_preset(9, spec, 0);
    out += "anderson  disordered open chain, 9 sites; coupling inductors "
           "drawn from [L(1-delta), L(1+delta)]\n";
    out += describe(net);
  }
  {
    const CircuitNetwork net = ssh_preset(SshOptions{});
    out += "ssh       alternating-bond open chain, 10 sites (weak-bond "
           "termination by default)\n";
    out += describe(net);
  }
  {
    const TransferPreset preset = transfer_preset();
    out += "transfer  engineered-coupling chain, 7 sites, transfer time "
           "5.6 s\n";
    out += describe(preset.circuit);
  }
  {
    const B800Preset preset = b800_preset();
    out += "b800      ring, 9 sites; platform time = physical time x eta, "
           "eta = " + format_double(preset.eta) + "\n";
    out += describe(preset.circuit);
  }
  return out;
}

}  // namespace qnet
