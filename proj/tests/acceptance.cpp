// Acceptance gates for the transport toolkit.  Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "qnet/analysis.hpp"
#include "qnet/circuit.hpp"
#include "qnet/errors.hpp"
#include "qnet/experiments.hpp"
#include "qnet/mapping.hpp"
#include "qnet/tight_binding.hpp"

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

Outcome criterion_1_lossless_transfer() {
  const auto start = std::chrono::steady_clock::now();
  const qnet::TransferPreset preset = qnet::transfer_preset(7, 5.6, false);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(101, 0.0, 5.6);
  const qnet::QuantumTrajectory traj = qnet::propagate_expm(
      preset.quantum, qnet::unit_excitation(preset.quantum, 0), times);
  const double final_population = traj.populations(100, 6);
  const double elapsed = seconds_since(start);
  Outcome out;
  out.ok = final_population >= 0.999 && elapsed < 1.0;
  out.detail = "site-7 population " + fmt(final_population) + " at t_f, " +
               fmt(elapsed) + " s";
  return out;
}

Outcome criterion_2_lossy_transfer() {
  const qnet::TransferPreset preset = qnet::transfer_preset(7, 5.6, true);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(1001, 0.0, 6.72);
  const qnet::QuantumTrajectory traj = qnet::propagate_expm(
      preset.quantum, qnet::unit_excitation(preset.quantum, 0), times);
  const qnet::TransferEfficiency eff =
      qnet::transfer_efficiency(traj, 6, 5.6);
  Outcome out;
  out.ok = eff.at_time >= 0.58 && eff.at_time <= 0.64;
  out.detail = "efficiency " + fmt(eff.at_time) +
               " (analytic uniform-loss baseline 0.609)";
  return out;
}

Outcome criterion_3_quantum_circuit_agreement() {
  const auto start = std::chrono::steady_clock::now();
  const qnet::SshOptions opts;
  const qnet::TightBindingHamiltonian h = qnet::ssh_quantum(opts);
  const qnet::CircuitNetwork net = qnet::ssh_preset(opts);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(1001, 0.0, 2.0);
  const qnet::QuantumTrajectory q =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), times);
  const qnet::CircuitTrajectory c =
      qnet::simulate(net, qnet::unit_excitation(net, 0), 2.0, 0.0, 20);
  const qnet::EnvelopeSeries env = qnet::envelope(c, net);
  const qnet::AgreementReport report = qnet::compare_populations(q, env);
  const double elapsed = seconds_since(start);
  Outcome out;
  out.ok = report.global_mae < 0.05 && elapsed < 10.0;
  out.detail = "global MAE " + fmt(report.global_mae) + " over [" +
               fmt(report.window_start) + ", " + fmt(report.window_end) +
               "] s, " + fmt(elapsed) + " s";
  return out;
}

Outcome criterion_4_loss_mapping() {
  const qnet::CircuitNetwork net = qnet::ssh_preset(5);
  const qnet::CircuitTrajectory traj =
      qnet::simulate(net, qnet::unit_excitation(net, 0), 2.0, 0.0, 20);
  const double rate =
      qnet::fit_decay_rate(traj.times, qnet::energy_series(net, traj));
  const double target = 1.0 / (900.0 * 1.5e-3);
  Outcome out;
  out.ok = std::abs(rate / target - 1.0) < 0.02;
  out.detail = "fitted " + fmt(rate) + " s^-1 vs 1/(RC) = " + fmt(target);
  return out;
}

Outcome criterion_5_anderson_localization() {
  const auto start = std::chrono::steady_clock::now();
  const double deltas[3] = {0.0, 0.5, 0.9};
  const double return_anchor[3] = {0.0090, 0.0572, 0.0738};
  const double pr_anchor[3] = {4.648, 3.985, 3.134};
  double returns[3];
  double prs[3];
  for (int i = 0; i < 3; ++i) {
    qnet::DisorderSpec spec;
    spec.delta = deltas[i];
    spec.n_realizations = 50;
    spec.master_seed = 42;
    const qnet::EnsembleResult result =
        qnet::run_anderson_ensemble(spec, 2.0, 9, 0, false);
    returns[i] = result.return_probability;
    prs[i] = result.mean_participation_ratio;
  }
  const double elapsed = seconds_since(start);
  bool ok = returns[0] < returns[1] && returns[1] < returns[2] &&
            prs[0] > prs[1] && prs[1] > prs[2] && elapsed < 120.0;
  for (int i = 0; i < 3; ++i) {
    ok = ok && std::abs(returns[i] - return_anchor[i]) < 1e-3 &&
         std::abs(prs[i] - pr_anchor[i]) < 1e-2;
  }
  Outcome out;
  out.ok = ok;
  out.detail = "returns " + fmt(returns[0]) + " < " + fmt(returns[1]) +
               " < " + fmt(returns[2]) + "; PR " + fmt(prs[0]) + " > " +
               fmt(prs[1]) + " > " + fmt(prs[2]) + "; " + fmt(elapsed) + " s";
  return out;
}

Outcome criterion_6_ssh_edge_state() {
  const qnet::SshOptions opts;  // weak-bond termination, lossy
  const qnet::TightBindingHamiltonian h = qnet::ssh_quantum(opts);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(4001, 0.0, 2.0);
  const qnet::QuantumTrajectory edge =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), times);
  const qnet::QuantumTrajectory bulk =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 4), times);
  const double edge_retention = edge.populations.col(0).mean();
  const double bulk_retention = bulk.populations.col(4).mean();
  const double ratio = edge_retention / bulk_retention;
  Outcome out;
  out.ok = ratio >= 2.0 && std::abs(ratio / 3.4733 - 1.0) < 0.02;
  out.detail = "edge/bulk retention ratio " + fmt(ratio) +
               " (regression anchor 3.4733)";
  return out;
}

Outcome criterion_7_b800_mapping() {
  const qnet::B800Preset preset = qnet::b800_preset();
  const qnet::TightBindingHamiltonian mapped =
      qnet::circuit_to_quantum(preset.circuit);
  const double eps = mapped.site_energies[0];
  const double j = mapped.couplings(0, 1);
  const double window_ps = 3.2 / preset.eta * 1e12;
  Outcome out;
  out.ok = std::abs(eps / 446.4 - 1.0) < 0.005 &&
           std::abs(j / -0.9 - 1.0) < 0.08 &&
           std::abs(window_ps / 0.608 - 1.0) < 0.02;
  out.detail = "epsilon " + fmt(eps) + " rad/s, J " + fmt(j) +
               " rad/s, window " + fmt(window_ps) + " ps";
  return out;
}

Outcome criterion_8_platform_limits() {
  const double f_max = qnet::max_site_frequency();
  const double step = qnet::dac_step(qnet::CoreConfig{});
  Outcome out;
  out.ok = std::abs(f_max / 1591.5 - 1.0) < 0.001 &&
           std::abs(step - 1.2207e-3) < 1e-7;
  out.detail = "f_max " + fmt(f_max) + " Hz, DAC step " + fmt(step * 1e3) +
               " mV";
  return out;
}

Outcome criterion_9_numerical_guarantees() {
  std::string detail;
  bool ok = true;

  {  // Propagator cross-check on the SSH preset.
    const qnet::TightBindingHamiltonian h = qnet::ssh_quantum(qnet::SshOptions{});
    const qnet::QuantumTrajectory ode =
        qnet::propagate_ode(h, qnet::unit_excitation(h, 0), 2.0);
    const qnet::QuantumTrajectory ref =
        qnet::propagate_expm(h, qnet::unit_excitation(h, 0), ode.times);
    const double dev = (ode.amplitudes - ref.amplitudes).cwiseAbs().maxCoeff();
    ok = ok && dev < 1e-6;
    detail += "expm-vs-ode " + fmt(dev);
  }

  {  // Mapping round trip.
    const qnet::TightBindingHamiltonian h = qnet::ssh_quantum(qnet::SshOptions{});
    const qnet::TightBindingHamiltonian back = qnet::circuit_to_quantum(
        qnet::quantum_to_circuit(h, Eigen::VectorXd::Constant(10, 1.5e-3)));
    const double dev = std::max(
        {(back.site_energies - h.site_energies).cwiseAbs().maxCoeff() /
             h.site_energies.maxCoeff(),
         (back.couplings - h.couplings).cwiseAbs().maxCoeff() /
             h.couplings.cwiseAbs().maxCoeff(),
         (back.loss_rates - h.loss_rates).cwiseAbs().maxCoeff() /
             h.loss_rates.maxCoeff()});
    ok = ok && dev < 1e-9;
    detail += ", round-trip " + fmt(dev);
  }

  {  // Lossless circuit energy drift.
    qnet::SshOptions lossless;
    lossless.lossy = false;
    const qnet::CircuitNetwork net = qnet::ssh_preset(lossless);
    const qnet::CircuitTrajectory traj =
        qnet::simulate(net, qnet::unit_excitation(net, 0), 2.0, 0.0, 20);
    const Eigen::VectorXd energy = qnet::energy_series(net, traj);
    const double drift =
        (energy.array() / energy[0] - 1.0).abs().maxCoeff();
    ok = ok && drift < 1e-6;
    detail += ", energy drift " + fmt(drift);
  }

  {  // Weak-coupling second-order form: accurate at J/eps = 0.017, not 0.5.
    Eigen::MatrixXd weak_j(2, 2);
    weak_j << 0.0, -7.5836, -7.5836, 0.0;
    const qnet::TightBindingHamiltonian weak = qnet::make_hamiltonian(
        Eigen::VectorXd::Constant(2, 457.6202), Eigen::VectorXd::Zero(2),
        weak_j);
    const qnet::QuantumTrajectory so =
        qnet::propagate_second_order(weak, qnet::unit_excitation(weak, 0), 2.0);
    const qnet::QuantumTrajectory ref =
        qnet::propagate_expm(weak, qnet::unit_excitation(weak, 0), so.times);
    const double weak_dev =
        (so.populations - ref.populations).cwiseAbs().maxCoeff();

    Eigen::MatrixXd strong_j(2, 2);
    strong_j << 0.0, -50.0, -50.0, 0.0;
    const qnet::TightBindingHamiltonian strong = qnet::make_hamiltonian(
        Eigen::VectorXd::Constant(2, 100.0), Eigen::VectorXd::Zero(2),
        strong_j);
    const qnet::QuantumTrajectory so2 = qnet::propagate_second_order(
        strong, qnet::unit_excitation(strong, 0), 1.0);
    const qnet::QuantumTrajectory ref2 =
        qnet::propagate_expm(strong, qnet::unit_excitation(strong, 0),
                             so2.times);
    const double strong_dev =
        (so2.populations - ref2.populations).cwiseAbs().maxCoeff();
    ok = ok && weak_dev < 0.01 && strong_dev > 0.05;
    detail += ", weak-coupling dev " + fmt(weak_dev) + " / breakdown " +
              fmt(strong_dev);
  }

  Outcome out;
  out.ok = ok;
  out.detail = detail;
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    std::function<Outcome()> body;
  };
  const Entry entries[] = {
      {1, "lossless perfect transfer", criterion_1_lossless_transfer},
      {2, "lossy transfer efficiency", criterion_2_lossy_transfer},
      {3, "quantum-circuit agreement", criterion_3_quantum_circuit_agreement},
      {4, "loss-rate mapping", criterion_4_loss_mapping},
      {5, "anderson localization", criterion_5_anderson_localization},
      {6, "ssh edge retention", criterion_6_ssh_edge_state},
      {7, "b800 parameter mapping", criterion_7_b800_mapping},
      {8, "platform limits", criterion_8_platform_limits},
      {9, "numerical guarantees", criterion_9_numerical_guarantees},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    Outcome outcome;
    try {
      outcome = entry.body();
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    std::cout << (outcome.ok ? "PASS" : "FAIL") << " criterion " << entry.id
              << " (" << entry.label << "): " << outcome.detail << "\n";
    if (!outcome.ok) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failing\n";
    return 1;
  }
  std::cout << "all 9 criteria passing\n";
  return 0;
}
