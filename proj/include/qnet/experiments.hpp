#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qnet/circuit.hpp"
#include "qnet/errors.hpp"
#include "qnet/tight_binding.hpp"

namespace qnet {

// Default evolution windows (platform seconds) for the bundled presets.
inline constexpr double kAndersonWindow = 2.0;
inline constexpr double kSshWindow = 2.0;
inline constexpr double kTransferWindowFactor = 1.2;  // times transfer_time
inline constexpr double kB800Window = 3.2;

// Platform-to-physical time scaling of the B800 ring: platform dynamics run
// eta times slower than the molecular dynamics they emulate.
inline constexpr double kB800Eta = 5.2615e12;

// Disordered-chain ensemble description: each coupling inductor is drawn
// uniformly from [L(1-delta), L(1+delta)] around the base inductance.
struct DisorderSpec {
  double delta = 0.0;                  // in [0, 1)
  double base_inductance = 96.05e-3;   // henries
  int n_realizations = 50;
  std::uint64_t master_seed = 42;
};

// Deterministic per-bond uniform variate in [0, 1): a counter-based
// splitmix64 chain over (master_seed, realization, bond), so ensembles are
// reproducible and independent of evaluation order.
double bond_uniform(std::uint64_t master_seed, int realization, int bond);

// Disordered open chain, one realization: 3.35 mH / 1.5 mF / 1 kOhm nodes
// with nearest-neighbor coupling inductors drawn uniformly from
// [L(1-delta), L(1+delta)].
CircuitNetwork anderson_preset(int n_sites, const DisorderSpec& spec,
                               int realization_index);

// Tight-binding counterpart with the disorder carried entirely by the
// couplings: uniform nominal site frequency, J_b = -1/(2 eps L_b C) per
// sampled bond, uniform loss 1/(RC).
TightBindingHamiltonian anderson_quantum(int n_sites, const DisorderSpec& spec,
                                         int realization_index);

struct EnsembleResult {
  int initial_site = 0;             // excitation injected here (0-based)
  Eigen::VectorXd quantum_times;
  Eigen::MatrixXd quantum_mean;     // mean quantum populations per sample
  Eigen::VectorXd circuit_times;
  Eigen::MatrixXd circuit_mean;     // mean circuit envelope populations
  double return_probability = 0.0;  // mean initial-site population at t_end
  double mean_participation_ratio = 0.0;  // mean of final-sample PR values
  Eigen::VectorXd variance_curve;   // spread variance of quantum_mean rows
};

// Disorder ensemble, averaged pointwise over realizations.  The excitation
// starts at the central site.  Realizations fan out over n_threads workers
// (0 = hardware default); results do not depend on scheduling order.
// include_circuit = false skips the circuit-side runs (quantum only).
EnsembleResult run_anderson_ensemble(const DisorderSpec& spec, double t_end,
                                     int n_sites = 9, int n_threads = 0,
                                     bool include_circuit = true);

// Which bond pattern terminates the chain at site 1.  The weak-bond
// termination hosts the protected edge state whose long retention the
// dynamics experiments probe; the strong-bond termination is the
// topologically trivial alternative.
enum class EdgeBond { kWeak, kStrong };

struct SshOptions {
  int n_cells = 5;  // two sites per cell
  EdgeBond edge_bond = EdgeBond::kWeak;
  // Trim the end nodes' inductors so every node shares the bulk natural
  // frequency despite having one neighbor less; keeps the network exactly
  // equivalent to the uniform-frequency tight-binding chain.
  bool uniform_site_frequency = true;
  bool lossy = true;  // 900-ohm node resistors when true
};

// Alternating-bond open chain: 96.05 mH and 192.1 mH coupling inductors
// (coupling ratio exactly 2), 3.35 mH / 1.5 mF nodes.
CircuitNetwork ssh_preset(const SshOptions& opts);
CircuitNetwork ssh_preset(int n_cells);

// Ideal alternating-coupling chain: uniform site frequency, couplings in
// the exact ratio 2, uniform loss 1/(RC) when lossy.
TightBindingHamiltonian ssh_quantum(const SshOptions& opts);

// J_n = pi/(2 t_f) sqrt(n (N - n)) for n = 1..N-1: the coupling profile
// that relocates a single-site excitation to the mirror site at t_f.
Eigen::VectorXd transfer_couplings(int n_sites, double t_f);

struct TransferPreset {
  TightBindingHamiltonian quantum;
  CircuitNetwork circuit;
  double transfer_time = 0.0;  // seconds
};

// Engineered-coupling chain.  The quantum side uses transfer_couplings with
// a uniform site frequency taken from the circuit realization (its mean node
// natural frequency) and per-node losses 1/(R C_n); the seven-node circuit
// side is the tabulated platform realization.  For other sizes the circuit
// is synthesized from the (sign-flipped) couplings at the seven-node site
// frequency — populations are unaffected by the sign gauge.
TransferPreset transfer_preset(int n_sites = 7, double t_f = 5.6,
                               bool lossy = true);

struct B800Preset {
  TightBindingHamiltonian physical;  // molecular-scale rates, rad/s
  TightBindingHamiltonian platform;  // physical rescaled by eta
  CircuitNetwork circuit;            // tabulated ring realization
  double eta = kB800Eta;
};

// Nine-chromophore ring: site energy 12450 cm^-1, nearest-neighbor coupling
// -27 cm^-1, brought to platform rates by eta; the circuit ring uses
// 806.90 mH coupling inductors on 3.35 mH / 1.5 mF / 1 kOhm nodes.
B800Preset b800_preset(bool lossy = true);

}  // namespace qnet
