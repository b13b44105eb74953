#include "qnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "qnet/analysis.hpp"
#include "qnet/mapping.hpp"

namespace qnet {

namespace {

// Shared node components of the disordered chain, the alternating chain and
// the ring realization.
constexpr double kNodeInductance = 3.35e-3;    // henries
constexpr double kNodeCapacitance = 1.5e-3;    // farads
constexpr double kAndersonResistance = 1e3;    // ohms
constexpr double kSshResistance = 900.0;       // ohms
constexpr double kStrongBondInductance = 96.05e-3;  // henries
constexpr double kWeakBondInductance = 192.1e-3;    // henries

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void check_disorder(const DisorderSpec& spec) {
  if (!(spec.delta >= 0.0) || !(spec.delta < 1.0)) {
    throw Error("disorder: delta must lie in [0, 1), got " +
                std::to_string(spec.delta));
  }
  if (!(spec.base_inductance > 0.0)) {
    throw Error("disorder: base inductance must be positive");
  }
  if (spec.n_realizations < 1) {
    throw Error("disorder: need at least 1 realization");
  }
}

double sampled_bond_inductance(const DisorderSpec& spec, int realization,
                               int bond) {
  const double u = bond_uniform(spec.master_seed, realization, bond);
  return spec.base_inductance * (1.0 - spec.delta + 2.0 * spec.delta * u);
}

void check_realization(const DisorderSpec& spec, int realization_index) {
  if (realization_index < 0 || realization_index >= spec.n_realizations) {
    throw Error("disorder: realization " + std::to_string(realization_index) +
                " outside 0.." + std::to_string(spec.n_realizations - 1));
  }
}

// Bond inductances of the alternating chain, site-1 termination per options.
std::vector<double> ssh_bond_inductances(const SshOptions& opts) {
  if (opts.n_cells < 2) {
    throw Error("ssh_preset: need at least 2 cells, got " +
                std::to_string(opts.n_cells));
  }
  const int n_bonds = 2 * opts.n_cells - 1;
  const double first = opts.edge_bond == EdgeBond::kWeak
                           ? kWeakBondInductance
                           : kStrongBondInductance;
  const double second = opts.edge_bond == EdgeBond::kWeak
                            ? kStrongBondInductance
                            : kWeakBondInductance;
  std::vector<double> bonds(n_bonds);
  for (int b = 0; b < n_bonds; ++b) bonds[b] = b % 2 == 0 ? first : second;
  return bonds;
}

}  // namespace

double bond_uniform(std::uint64_t master_seed, int realization, int bond) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(realization + 1));
  h = splitmix64(h ^ static_cast<std::uint64_t>(bond + 1));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

CircuitNetwork anderson_preset(int n_sites, const DisorderSpec& spec,
                               int realization_index) {
  check_disorder(spec);
  check_realization(spec, realization_index);
  if (n_sites < 2) {
    throw Error("anderson_preset: need at least 2 sites");
  }
  std::vector<CouplingBranch> branches;
  branches.reserve(n_sites - 1);
  for (int b = 0; b < n_sites - 1; ++b) {
    branches.push_back(
        {b, b + 1, sampled_bond_inductance(spec, realization_index, b)});
  }
  return make_network(
      Eigen::VectorXd::Constant(n_sites, kAndersonResistance),
      Eigen::VectorXd::Constant(n_sites, kNodeInductance),
      Eigen::VectorXd::Constant(n_sites, kNodeCapacitance), branches);
}

TightBindingHamiltonian anderson_quantum(int n_sites, const DisorderSpec& spec,
                                         int realization_index) {
  check_disorder(spec);
  check_realization(spec, realization_index);
  if (n_sites < 2) {
    throw Error("anderson_quantum: need at least 2 sites");
  }
  // Nominal site frequency of a node loaded by its own inductor and one
  // nominal coupling inductor; the disorder lives purely in the couplings.
  const double eps = std::sqrt(
      (1.0 / kNodeCapacitance) *
      (1.0 / kNodeInductance + 1.0 / spec.base_inductance));
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (int b = 0; b < n_sites - 1; ++b) {
    const double l_bond = sampled_bond_inductance(spec, realization_index, b);
    const double j = -1.0 / (2.0 * eps * l_bond * kNodeCapacitance);
    couplings(b, b + 1) = j;
    couplings(b + 1, b) = j;
  }
  return make_hamiltonian(
      Eigen::VectorXd::Constant(n_sites, eps),
      Eigen::VectorXd::Constant(
          n_sites, 1.0 / (kAndersonResistance * kNodeCapacitance)),
      couplings);
}

EnsembleResult run_anderson_ensemble(const DisorderSpec& spec, double t_end,
                                     int n_sites, int n_threads,
                                     bool include_circuit) {
  check_disorder(spec);
  if (!(t_end > 0.0)) {
    throw Error("run_anderson_ensemble: t_end must be positive");
  }
  const int n_real = spec.n_realizations;
  const int initial_site = (n_sites - 1) / 2;
  const Eigen::VectorXd q_times = Eigen::VectorXd::LinSpaced(201, 0.0, t_end);

  // One step size for every realization — chosen for the fastest network the
  // disorder interval can produce — so all circuit runs share a sample grid
  // and average pointwise.
  const double l_bond_min = spec.base_inductance * (1.0 - spec.delta);
  const double eps_bound =
      std::sqrt((1.0 / kNodeCapacitance) *
                (1.0 / kNodeInductance + 2.0 / l_bond_min));
  const double circuit_dt = default_time_step(eps_bound);

  // Per-realization slots, reduced sequentially afterwards, so the result is
  // independent of which worker ran which realization.
  std::vector<Eigen::MatrixXd> q_pops(n_real);
  std::vector<Eigen::MatrixXd> c_pops(n_real);
  Eigen::VectorXd c_times;
  std::vector<double> returns(n_real), prs(n_real);

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n_real) return;
      try {
        const TightBindingHamiltonian h = anderson_quantum(n_sites, spec, r);
        const QuantumTrajectory q =
            propagate_expm(h, unit_excitation(h, initial_site), q_times);
        q_pops[r] = q.populations;
        returns[r] = q.populations(q.n_samples() - 1, initial_site);
        prs[r] = participation_ratio(
            q.populations.row(q.n_samples() - 1).transpose());
        if (include_circuit) {
          const CircuitNetwork net = anderson_preset(n_sites, spec, r);
          const CircuitTrajectory c = simulate(
              net, unit_excitation(net, initial_site), t_end, circuit_dt, 20);
          const EnvelopeSeries env =
              envelope(c, net, EnvelopeMethod::kAnalyticSignal);
          c_pops[r] = env.envelope;
          if (r == 0) c_times = env.times;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int workers = n_threads > 0
                    ? n_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_real);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  EnsembleResult result;
  result.initial_site = initial_site;
  result.quantum_times = q_times;
  result.quantum_mean = Eigen::MatrixXd::Zero(q_times.size(), n_sites);
  for (int r = 0; r < n_real; ++r) result.quantum_mean += q_pops[r];
  result.quantum_mean /= n_real;
  if (include_circuit) {
    result.circuit_times = c_times;
    result.circuit_mean =
        Eigen::MatrixXd::Zero(c_times.size(), n_sites);
    for (int r = 0; r < n_real; ++r) result.circuit_mean += c_pops[r];
    result.circuit_mean /= n_real;
  }
  result.return_probability = 0.0;
  result.mean_participation_ratio = 0.0;
  for (int r = 0; r < n_real; ++r) {
    result.return_probability += returns[r];
    result.mean_participation_ratio += prs[r];
  }
  result.return_probability /= n_real;
  result.mean_participation_ratio /= n_real;

  result.variance_curve.resize(q_times.size());
  for (Eigen::Index k = 0; k < q_times.size(); ++k) {
    result.variance_curve[k] =
        spread_variance(result.quantum_mean.row(k).transpose());
  }
  return result;
}

CircuitNetwork ssh_preset(const SshOptions& opts) {
  const std::vector<double> bonds = ssh_bond_inductances(opts);
  const int n = 2 * opts.n_cells;
  std::vector<CouplingBranch> branches;
  branches.reserve(bonds.size());
  for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
    branches.push_back({b, b + 1, bonds[b]});
  }

  Eigen::VectorXd inductances =
      Eigen::VectorXd::Constant(n, kNodeInductance);
  if (opts.uniform_site_frequency) {
    // Every node should see the same total inverse inductance as a bulk node
    // (own inductor plus one strong and one weak bond).
    const double target = 1.0 / kNodeInductance +
                          1.0 / kStrongBondInductance +
                          1.0 / kWeakBondInductance;
    Eigen::VectorXd bond_sum = Eigen::VectorXd::Zero(n);
    for (const CouplingBranch& br : branches) {
      bond_sum[br.node_a] += 1.0 / br.inductance;
      bond_sum[br.node_b] += 1.0 / br.inductance;
    }
    inductances = (target - bond_sum.array()).inverse().matrix();
  }
  const double r = opts.lossy ? kSshResistance : kLossless;
  return make_network(Eigen::VectorXd::Constant(n, r), inductances,
                      Eigen::VectorXd::Constant(n, kNodeCapacitance),
                      branches);
}

CircuitNetwork ssh_preset(int n_cells) {
  SshOptions opts;
  opts.n_cells = n_cells;
  return ssh_preset(opts);
}

TightBindingHamiltonian ssh_quantum(const SshOptions& opts) {
  const std::vector<double> bonds = ssh_bond_inductances(opts);
  const int n = 2 * opts.n_cells;
  const double eps = std::sqrt((1.0 / kNodeCapacitance) *
                               (1.0 / kNodeInductance +
                                1.0 / kStrongBondInductance +
                                1.0 / kWeakBondInductance));
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
    const double j = -1.0 / (2.0 * eps * bonds[b] * kNodeCapacitance);
    couplings(b, b + 1) = j;
    couplings(b + 1, b) = j;
  }
  const double gamma =
      opts.lossy ? 1.0 / (kSshResistance * kNodeCapacitance) : 0.0;
  return make_hamiltonian(Eigen::VectorXd::Constant(n, eps),
                          Eigen::VectorXd::Constant(n, gamma), couplings);
}

Eigen::VectorXd transfer_couplings(int n_sites, double t_f) {
  if (n_sites < 2) {
    throw Error("transfer_couplings: need at least 2 sites");
  }
  if (!(t_f > 0.0)) {
    throw Error("transfer_couplings: transfer time must be positive");
  }
  Eigen::VectorXd j(n_sites - 1);
  for (int k = 1; k < n_sites; ++k) {
    j[k - 1] = std::numbers::pi / (2.0 * t_f) *
               std::sqrt(static_cast<double>(k) *
                         static_cast<double>(n_sites - k));
  }
  return j;
}

TransferPreset transfer_preset(int n_sites, double t_f, bool lossy) {
  const Eigen::VectorXd j = transfer_couplings(n_sites, t_f);
  constexpr double kResistance = 1.5e3;
  constexpr double kEndCapacitance = 7.54e-3;
  constexpr double kInnerCapacitance = 7.58e-3;

  TransferPreset preset;
  preset.transfer_time = t_f;

  if (n_sites == 7) {
    // The tabulated seven-node realization.
    Eigen::VectorXd c(7);
    c << kEndCapacitance, kInnerCapacitance, kInnerCapacitance,
        kEndCapacitance, kInnerCapacitance, kInnerCapacitance,
        kEndCapacitance;
    Eigen::VectorXd l_bond(6);
    l_bond << 321.36e-3, 181.97e-3, 75.45e-3, 75.45e-3, 181.97e-3, 321.36e-3;
    std::vector<CouplingBranch> branches;
    for (int b = 0; b < 6; ++b) branches.push_back({b, b + 1, l_bond[b]});
    const double r = lossy ? kResistance : kLossless;
    preset.circuit = make_network(
        Eigen::VectorXd::Constant(7, r),
        Eigen::VectorXd::Constant(7, 1.11e-3), c, branches);

    const double eps = natural_frequencies(preset.circuit).mean();
    Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(7, 7);
    for (int b = 0; b < 6; ++b) {
      couplings(b, b + 1) = j[b];
      couplings(b + 1, b) = j[b];
    }
    Eigen::VectorXd loss = Eigen::VectorXd::Zero(7);
    if (lossy) loss = (kResistance * c.array()).inverse().matrix();
    preset.quantum = make_hamiltonian(Eigen::VectorXd::Constant(7, eps),
                                      loss, couplings);
    return preset;
  }

  // General size: build the quantum chain at the seven-node site frequency,
  // then realize the sign-flipped couplings (populations are gauge
  // invariant) with uniform end-node capacitances.
  const TransferPreset seven = transfer_preset(7, t_f, lossy);
  const double eps = seven.quantum.site_energies[0];
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (int b = 0; b < n_sites - 1; ++b) {
    couplings(b, b + 1) = j[b];
    couplings(b + 1, b) = j[b];
  }
  const Eigen::VectorXd c =
      Eigen::VectorXd::Constant(n_sites, kEndCapacitance);
  Eigen::VectorXd loss = Eigen::VectorXd::Zero(n_sites);
  if (lossy) loss = (kResistance * c.array()).inverse().matrix();
  preset.quantum = make_hamiltonian(
      Eigen::VectorXd::Constant(n_sites, eps), loss, couplings);

  const TightBindingHamiltonian flipped = make_hamiltonian(
      preset.quantum.site_energies, preset.quantum.loss_rates, -couplings);
  preset.circuit = quantum_to_circuit(flipped, c);
  return preset;
}

B800Preset b800_preset(bool lossy) {
  constexpr int n = 9;
  constexpr double kRingBondInductance = 806.90e-3;  // henries
  constexpr double kRingResistance = 1e3;            // ohms

  B800Preset preset;
  preset.eta = kB800Eta;

  std::vector<CouplingBranch> branches;
  for (int k = 0; k < n; ++k) {
    branches.push_back({k, (k + 1) % n, kRingBondInductance});
  }
  const double r = lossy ? kRingResistance : kLossless;
  preset.circuit = make_network(
      Eigen::VectorXd::Constant(n, r),
      Eigen::VectorXd::Constant(n, kNodeInductance),
      Eigen::VectorXd::Constant(n, kNodeCapacitance), branches);

  const double eps_phys = wavenumber_to_angular(12450.0);
  const double j_phys = wavenumber_to_angular(-27.0);
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const int m = (k + 1) % n;
    couplings(k, m) = j_phys;
    couplings(m, k) = j_phys;
  }
  // Loss enters through the circuit resistors; expressed at physical scale
  // so that rescaling by eta reproduces the platform rates exactly.
  const double gamma_platform =
      lossy ? 1.0 / (kRingResistance * kNodeCapacitance) : 0.0;
  preset.physical = make_hamiltonian(
      Eigen::VectorXd::Constant(n, eps_phys),
      Eigen::VectorXd::Constant(n, gamma_platform * preset.eta), couplings);
  preset.platform = rescale(preset.physical, preset.eta);
  return preset;
}

}  // namespace qnet
