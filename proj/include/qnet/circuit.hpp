#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "qnet/errors.hpp"

namespace qnet {

// A missing resistor (lossless node) is stored as +infinity; the -V/R term
// is then omitted from the dynamics entirely rather than approximated.
inline constexpr double kLossless = std::numeric_limits<double>::infinity();

// One coupling inductor between two node oscillators.  Branches are kept
// normalized with node_a < node_b; the branch current flows from node_a to
// node_b when positive.
struct CouplingBranch {
  int node_a = 0;
  int node_b = 0;
  double inductance = 0.0;  // henries
};

// Inductively coupled RLC oscillator network: each node is a parallel R-L-C
// tank, nodes are linked pairwise by coupling inductors.
struct CircuitNetwork {
  Eigen::VectorXd resistances;   // ohms; kLossless marks a lossless node
  Eigen::VectorXd inductances;   // henries
  Eigen::VectorXd capacitances;  // farads
  std::vector<CouplingBranch> branches;  // sorted by (node_a, node_b)

  int n_nodes() const { return static_cast<int>(inductances.size()); }
  int n_branches() const { return static_cast<int>(branches.size()); }
};

struct CircuitState {
  Eigen::VectorXd voltages;         // V_n across each capacitor
  Eigen::VectorXd node_currents;    // I_n through each oscillator inductor
  Eigen::VectorXd branch_currents;  // I_nm through each coupling inductor
  double time = 0.0;                // seconds
};

struct CircuitTrajectory {
  Eigen::VectorXd times;            // strictly increasing, seconds
  Eigen::MatrixXd voltages;         // n_samples x n_nodes
  Eigen::MatrixXd node_currents;    // n_samples x n_nodes
  Eigen::MatrixXd branch_currents;  // n_samples x n_branches
  Eigen::MatrixXd squared_voltages; // voltages^2, the measured quantity

  int n_samples() const { return static_cast<int>(times.size()); }
  int n_nodes() const { return static_cast<int>(voltages.cols()); }
};

// Validating constructor.  Normalizes branch orientation to node_a < node_b
// and sorts branches; rejects non-positive component values, out-of-range or
// self-coupling branches, and duplicate branches.
CircuitNetwork make_network(const Eigen::VectorXd& resistances,
                            const Eigen::VectorXd& inductances,
                            const Eigen::VectorXd& capacitances,
                            std::vector<CouplingBranch> branches);

bool node_lossy(const CircuitNetwork& net, int node);

// Copy of the network with every resistor removed (all nodes lossless).
CircuitNetwork without_resistors(const CircuitNetwork& net);

// All-zero state except V_node = amplitude (volts) at t = 0 — the platform's
// initial-condition convention for injecting an excitation at one site.
CircuitState unit_excitation(const CircuitNetwork& net, int node,
                             double amplitude = 1.0);

// Node natural frequencies eps_n = sqrt((1/C_n)(1/L_n + sum_m 1/L_nm)), rad/s.
Eigen::VectorXd natural_frequencies(const CircuitNetwork& net);

// Step-size policy: same resolution rule as the quantum propagators, applied
// to the fastest node natural frequency.
double max_time_step(const CircuitNetwork& net);
double default_time_step(const CircuitNetwork& net);

// Time derivative of the state under Kirchhoff's laws:
//   dV_n/dt  = (1/C_n) [ -V_n/R_n - I_n - sum_{m>n} I_nm + sum_{m<n} I_mn ]
//   dI_n/dt  = V_n / L_n
//   dI_nm/dt = (V_n - V_m) / L_nm          (n < m)
// The -V/R term is dropped on lossless nodes.
CircuitState derivative(const CircuitNetwork& net, const CircuitState& s);

// Fixed-step RK4 integration.  dt <= 0 selects default_time_step; stride <= 0
// keeps at most ~2000 samples.  The final time is always sampled.
CircuitTrajectory simulate(const CircuitNetwork& net, const CircuitState& init,
                           double t_end, double dt = 0.0, int stride = 0);

// Stored electrical energy (joules):
//   Q_cl = 1/2 [ sum_n C_n V_n^2 + L_n I_n^2 + sum_{nm} L_nm I_nm^2 ].
double circuit_energy(const CircuitNetwork& net, const CircuitState& s);

// Q_cl evaluated at every sample of a trajectory.
Eigen::VectorXd energy_series(const CircuitNetwork& net,
                              const CircuitTrajectory& traj);

// State at one sample of a trajectory.
CircuitState state_at(const CircuitTrajectory& traj, int sample);

}  // namespace qnet
