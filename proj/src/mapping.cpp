#include "qnet/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qnet {

namespace {

constexpr double kSpeedOfLightCmPerS = 2.99792458e10;

std::string node_name(const char* prefix, Eigen::Index node) {
  return std::string(prefix) + "_" + std::to_string(node + 1);
}

std::string branch_name(Eigen::Index a, Eigen::Index b) {
  return "L_" + std::to_string(a + 1) + "_" + std::to_string(b + 1);
}

}  // namespace

double dac_step(const CoreConfig& cfg) {
  if (cfg.dac_bits <= 0 || cfg.dac_bits > 30 ||
      !(cfg.dac_full_scale > 0.0) || !std::isfinite(cfg.dac_full_scale)) {
    throw Error("dac_step: DAC must have positive full scale and 1..30 bits");
  }
  return cfg.dac_full_scale / static_cast<double>(1 << cfg.dac_bits);
}

TightBindingHamiltonian circuit_to_quantum(const CircuitNetwork& net,
                                           double asymmetry_tolerance) {
  if (!(asymmetry_tolerance >= 0.0)) {
    throw Error("circuit_to_quantum: asymmetry tolerance must be >= 0");
  }
  const Eigen::Index n = net.n_nodes();

  // eps_n^2 = (1/C_n) (1/L_n + sum over incident branches 1/L_nm)
  Eigen::VectorXd inverse_l = net.inductances.cwiseInverse();
  for (const CouplingBranch& br : net.branches) {
    inverse_l[br.node_a] += 1.0 / br.inductance;
    inverse_l[br.node_b] += 1.0 / br.inductance;
  }
  Eigen::VectorXd eps =
      (inverse_l.array() / net.capacitances.array()).sqrt().matrix();

  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (const CouplingBranch& br : net.branches) {
    const Eigen::Index a = br.node_a;
    const Eigen::Index b = br.node_b;
    // The coupling seen from each end of the branch; the tight-binding
    // picture needs the two to agree.
    const double j_from_a =
        -1.0 / (2.0 * eps[a] * br.inductance * net.capacitances[a]);
    const double j_from_b =
        -1.0 / (2.0 * eps[b] * br.inductance * net.capacitances[b]);
    const double scale = std::max(std::abs(j_from_a), std::abs(j_from_b));
    if (std::abs(j_from_a - j_from_b) > asymmetry_tolerance * scale) {
      throw AsymmetryBeyondTolerance(
          "circuit_to_quantum: branch " + branch_name(a, b) +
          " couples asymmetrically (" + std::to_string(j_from_a) + " vs " +
          std::to_string(j_from_b) + " rad/s); the two ends must satisfy " +
          "eps_n C_n = eps_m C_m within the tolerance");
    }
    const double j = -1.0 / (2.0 * br.inductance *
                             std::sqrt(eps[a] * net.capacitances[a] * eps[b] *
                                       net.capacitances[b]));
    couplings(a, b) = j;
    couplings(b, a) = j;
  }

  Eigen::VectorXd loss = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (node_lossy(net, k)) {
      loss[k] = 1.0 / (net.resistances[k] * net.capacitances[k]);
    }
  }
  return make_hamiltonian(eps, loss, couplings);
}

CircuitNetwork quantum_to_circuit(const TightBindingHamiltonian& h,
                                  const Eigen::VectorXd& capacitances) {
  const Eigen::Index n = h.n_sites();
  if (capacitances.size() != n) {
    throw DimensionMismatch("quantum_to_circuit: " + std::to_string(n) +
                            " sites but " + std::to_string(capacitances.size()) +
                            " capacitances");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!std::isfinite(capacitances[k]) || !(capacitances[k] > 0.0)) {
      throw Error("quantum_to_circuit: capacitance of node " +
                  std::to_string(k + 1) + " must be positive and finite");
    }
  }

  std::vector<CouplingBranch> branches;
  Eigen::VectorXd inverse_l_branch_sum = Eigen::VectorXd::Zero(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double j = h.couplings(a, b);
      if (j == 0.0) continue;
      if (j > 0.0) {
        throw PositiveJUnsupported(
            "quantum_to_circuit: coupling between sites " +
            std::to_string(a + 1) + " and " + std::to_string(b + 1) + " is " +
            std::to_string(j) +
            " rad/s; inductive branches realize negative couplings only");
      }
      const double l_branch =
          1.0 / (2.0 * std::abs(j) *
                 std::sqrt(h.site_energies[a] * capacitances[a] *
                           h.site_energies[b] * capacitances[b]));
      branches.push_back(
          {static_cast<int>(a), static_cast<int>(b), l_branch});
      inverse_l_branch_sum[a] += 1.0 / l_branch;
      inverse_l_branch_sum[b] += 1.0 / l_branch;
    }
  }

  Eigen::VectorXd inductances(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double inverse_l = h.site_energies[k] * h.site_energies[k] *
                                 capacitances[k] -
                             inverse_l_branch_sum[k];
    if (!(inverse_l > 0.0)) {
      throw InfeasibleInductance(
          "quantum_to_circuit: node " + std::to_string(k + 1) +
          " needs 1/L_n = " + std::to_string(inverse_l) +
          " 1/H; its couplings exceed what the site frequency supports");
    }
    inductances[k] = 1.0 / inverse_l;
  }

  Eigen::VectorXd resistances(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    resistances[k] = h.loss_rates[k] > 0.0
                         ? 1.0 / (h.loss_rates[k] * capacitances[k])
                         : kLossless;
  }
  return make_network(resistances, inductances, capacitances, branches);
}

TightBindingHamiltonian rescale(const TightBindingHamiltonian& h, double eta) {
  if (!std::isfinite(eta) || !(eta > 0.0)) {
    throw Error("rescale: eta must be positive and finite");
  }
  return make_hamiltonian(h.site_energies / eta, h.loss_rates / eta,
                          h.couplings / eta);
}

double wavenumber_to_angular(double wavenumber_cm) {
  if (!std::isfinite(wavenumber_cm)) {
    throw Error("wavenumber_to_angular: wavenumber must be finite");
  }
  return 2.0 * std::numbers::pi * kSpeedOfLightCmPerS * wavenumber_cm;
}

SynthesisResult synthesize_controls(const CircuitNetwork& net,
                                    const Eigen::VectorXd& initial_voltages,
                                    const CoreConfig& cfg) {
  const Eigen::Index n = net.n_nodes();
  if (initial_voltages.size() != n) {
    throw DimensionMismatch("synthesize_controls: " + std::to_string(n) +
                            " nodes but " +
                            std::to_string(initial_voltages.size()) +
                            " initial voltages");
  }
  for (double v : {cfg.r_f1, cfg.r_f2, cfg.r_f3, cfg.c_f1, cfg.phi}) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw Error("synthesize_controls: front-end constants must be positive");
    }
  }

  SynthesisResult result;
  result.dac_step = dac_step(cfg);
  const int max_code = (1 << cfg.dac_bits) - 1;
  const double r_gain = cfg.r_f2 / (cfg.r_f1 * cfg.phi);
  const double lc_gain = cfg.r_f2 * cfg.r_f3 * cfg.c_f1 / (cfg.r_f1 * cfg.phi);

  auto push = [&](const std::string& name, double voltage) {
    if (!std::isfinite(voltage) || voltage < 0.0 ||
        voltage > cfg.dac_full_scale) {
      throw ControlOutOfRange(
          "synthesize_controls: " + name + " needs " +
          std::to_string(voltage) + " V, outside the DAC range [0, " +
          std::to_string(cfg.dac_full_scale) + "] V");
    }
    SynthesisEntry entry;
    entry.name = name;
    entry.voltage = voltage;
    entry.code = std::min(
        static_cast<int>(std::lround(voltage / result.dac_step)), max_code);
    entry.quantization_error = voltage - entry.code * result.dac_step;
    result.entries.push_back(entry);
  };

  for (Eigen::Index k = 0; k < n; ++k) {
    push(node_name("R", k),
         node_lossy(net, k) ? r_gain / net.resistances[k] : 0.0);
    push(node_name("L", k), lc_gain / net.inductances[k]);
    push(node_name("C", k), lc_gain / net.capacitances[k]);
  }
  for (const CouplingBranch& br : net.branches) {
    push(branch_name(br.node_a, br.node_b), lc_gain / br.inductance);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    push(node_name("IC", k), (cfg.r_f2 / cfg.r_f1) * initial_voltages[k]);
  }
  return result;
}

double max_site_frequency(const CoreConfig& cfg) {
  const double lc_gain = cfg.r_f2 * cfg.r_f3 * cfg.c_f1 / (cfg.r_f1 * cfg.phi);
  // Smallest synthesizable L and C put the control voltage at full scale.
  const double l_min = lc_gain / cfg.dac_full_scale;
  const double c_min = lc_gain / cfg.dac_full_scale;
  return 1.0 / (2.0 * std::numbers::pi * std::sqrt(l_min * c_min));
}

}  // namespace qnet
