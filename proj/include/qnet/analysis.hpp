#pragma once

#include <Eigen/Dense>

#include "qnet/circuit.hpp"
#include "qnet/errors.hpp"
#include "qnet/tight_binding.hpp"

namespace qnet {

enum class EnvelopeMethod {
  kAnalyticSignal,  // discrete Hilbert transform; needs no model knowledge
  kQuadrature,      // z_n = V_n + i (dV_n/dt)/eps_n; exact per sample
};

// Slowly-varying envelope of the squared node voltages, normalized so the
// sites sum to 1 at t = 0 (using the exact initial-state energy norm).  This
// is the circuit-side quantity directly comparable to quantum populations.
struct EnvelopeSeries {
  Eigen::VectorXd times;     // seconds
  Eigen::MatrixXd envelope;  // n_samples x n_sites, squared and normalized
  EnvelopeMethod method = EnvelopeMethod::kAnalyticSignal;
  // One period of the fastest carrier; comparisons discard this much at each
  // window edge, where the analytic-signal method rings.
  double carrier_period = 0.0;

  int n_samples() const { return static_cast<int>(times.size()); }
  int n_sites() const { return static_cast<int>(envelope.cols()); }
};

struct AgreementReport {
  Eigen::VectorXd per_site_mae;  // mean |envelope - population| per site
  double global_mae = 0.0;       // mean over all compared samples and sites
  double global_l2 = 0.0;        // ||difference||_2 / ||reference||_2
  int worst_site = 0;            // 0-based site with the largest MAE
  double window_start = 0.0;     // compared time window, seconds
  double window_end = 0.0;
};

struct TransferEfficiency {
  double at_time = 0.0;         // value at the sample nearest the read time
  double peak_in_window = 0.0;  // local maximum within +-5% of the read time
};

// Envelope extraction.  Preconditions: uniform sampling and at least 20
// samples per period of the fastest node frequency (UndersampledSignal).
// The analytic-signal method squares the magnitude of the discrete
// Hilbert-transform analytic signal of each V_n; the quadrature method
// evaluates |z_n|^2 with z_n = V_n + i (dV_n/dt)/eps_n, eps_n from
// natural_frequencies and dV_n/dt exact from the sampled state.  Both are
// normalized by the t = 0 quadrature norm, which is exact there.
EnvelopeSeries envelope(
    const CircuitTrajectory& traj, const CircuitNetwork& net,
    EnvelopeMethod method = EnvelopeMethod::kAnalyticSignal);

// Quantum populations vs circuit envelope on the overlapping time range,
// linearly resampled onto the coarser grid, discarding one carrier period at
// each window edge.  Throws DisjointTimeRanges when no overlap survives.
AgreementReport compare_populations(const QuantumTrajectory& q,
                                    const EnvelopeSeries& e);

// Least-squares slope of log(energy) against time, negated; the decay rate
// of an exponentially relaxing energy series.  Requires >= 10 samples and
// strictly positive energies (NonpositiveEnergy).
double fit_decay_rate(const Eigen::VectorXd& times,
                      const Eigen::VectorXd& energy);

// Population (or normalized envelope) of target_site read at transfer_time:
// the nearest-sample value plus the local maximum within +-5% of the read
// time.  transfer_time must lie inside the sampled window (TimeOutOfRange).
TransferEfficiency transfer_efficiency(const QuantumTrajectory& traj,
                                       int target_site, double transfer_time);
TransferEfficiency transfer_efficiency(const EnvelopeSeries& series,
                                       int target_site, double transfer_time);

// (sum p)^2 / sum p^2 — the number of effectively occupied sites.  Requires
// nonnegative entries with a positive sum (AllZero).
double participation_ratio(const Eigen::VectorXd& populations);

// Variance of position under the (internally normalized) population
// distribution; the one-argument form uses site indices 0..n-1 as positions.
double spread_variance(const Eigen::VectorXd& populations,
                       const Eigen::VectorXd& positions);
double spread_variance(const Eigen::VectorXd& populations);

}  // namespace qnet
