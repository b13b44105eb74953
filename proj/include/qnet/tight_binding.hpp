#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qnet/errors.hpp"

namespace qnet {

using Complex = std::complex<double>;

// Single-excitation tight-binding Hamiltonian with per-site losses.
// All frequencies (site energies and couplings) are angular frequencies in
// rad/s; loss rates are amplitude-squared decay rates in 1/s.  The effective
// propagation matrix is diag(eps_n - i*Gamma_n/2) + J.
struct TightBindingHamiltonian {
  Eigen::VectorXd site_energies;  // eps_n > 0, rad/s
  Eigen::VectorXd loss_rates;     // Gamma_n >= 0, 1/s
  Eigen::MatrixXd couplings;      // J_nm, rad/s; symmetric, zero diagonal

  int n_sites() const { return static_cast<int>(site_energies.size()); }
};

struct QuantumState {
  Eigen::VectorXcd amplitudes;  // c_n, dimensionless
  double time = 0.0;            // seconds
};

// Uniformly useful container for sampled dynamics: one row per time sample.
struct QuantumTrajectory {
  Eigen::VectorXd times;        // strictly increasing, seconds
  Eigen::MatrixXcd amplitudes;  // n_samples x n_sites
  Eigen::MatrixXd populations;  // |amplitudes|^2, same shape

  int n_samples() const { return static_cast<int>(times.size()); }
  int n_sites() const { return static_cast<int>(amplitudes.cols()); }
};

// Validating constructor: rejects shape mismatches, asymmetric or
// nonzero-diagonal coupling matrices, nonpositive site energies and negative
// loss rates.
TightBindingHamiltonian make_hamiltonian(const Eigen::VectorXd& site_energies,
                                         const Eigen::VectorXd& loss_rates,
                                         const Eigen::MatrixXd& couplings);

// Dense complex propagation matrix diag(eps - i*Gamma/2) + J.
Eigen::MatrixXcd hamiltonian_matrix(const TightBindingHamiltonian& h);

// State with c_site = 1 (site is a 0-based index), all others zero, t = 0.
QuantumState unit_excitation(const TightBindingHamiltonian& h, int site);

// Step-size policy shared by all fixed-step integrators in the library.
// Steps larger than max_time_step are rejected (fewer than 200 samples per
// fastest oscillation); default_time_step resolves the fastest oscillation
// with 600 steps per period, which keeps the RK4 phase error below the 1e-6
// cross-propagator tolerance on windows of a few seconds.
double max_time_step(double max_angular_frequency);
double default_time_step(double max_angular_frequency);
double max_time_step(const TightBindingHamiltonian& h);
double default_time_step(const TightBindingHamiltonian& h);

// Decimation helper: smallest stride such that n_steps/stride <= max_samples.
int default_sample_stride(long n_steps, long max_samples = 2000);

// Exact propagation through the eigendecomposition of the (generally
// non-Hermitian) propagation matrix, sampled at the given times.  times must
// be strictly increasing and start at c0.time.
QuantumTrajectory propagate_expm(const TightBindingHamiltonian& h,
                                 const QuantumState& c0,
                                 const Eigen::VectorXd& times);

// Fixed-step RK4 integration of i dc/dt = H c; the independent cross-check
// for propagate_expm.  dt <= 0 selects default_time_step; stride <= 0 selects
// default_sample_stride.  The final time is always sampled.
QuantumTrajectory propagate_ode(const TightBindingHamiltonian& h,
                                const QuantumState& c0, double t_end,
                                double dt = 0.0, int stride = 0);

// Weak-coupling second-order form d^2c/dt^2 = -eps^2 c - eps * sum 2 J c,
// integrated with RK4 from the first-order-consistent initial velocity
// dc/dt(0) = -i H c0.  Only lossless Hamiltonians are supported; the form is
// derived without loss.  Exists to quantify the weak-coupling approximation.
QuantumTrajectory propagate_second_order(const TightBindingHamiltonian& h,
                                         const QuantumState& c0, double t_end,
                                         double dt = 0.0, int stride = 0);

// Total quantum energy Q_q(t) = sum_n |c_n(t)|^2 per sample.
Eigen::VectorXd quantum_energy(const QuantumTrajectory& traj);

// max |J_nm| / min eps_n; callers should warn above kWeakCouplingWarnThreshold.
double weak_coupling_ratio(const TightBindingHamiltonian& h);

inline constexpr double kWeakCouplingWarnThreshold = 0.1;

}  // namespace qnet
