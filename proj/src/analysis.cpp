#include "qnet/analysis.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qnet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform grid step; throws when sampling is nonuniform.
double uniform_step(const Eigen::VectorXd& times) {
  if (times.size() < 2) {
    throw UndersampledSignal("envelope: need at least 2 samples");
  }
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) {
    throw UndersampledSignal("envelope: times must be strictly increasing");
  }
  const double tol = 1e-6 * dt;
  for (Eigen::Index k = 1; k < times.size(); ++k) {
    if (std::abs(times[k] - times[k - 1] - dt) > tol) {
      throw UndersampledSignal(
          "envelope: sampling must be uniform (step varies at sample " +
          std::to_string(k) + ")");
    }
  }
  return dt;
}

// Exact per-node d|z|^2 ingredients at one stored sample.
Eigen::VectorXd quadrature_squared(const CircuitNetwork& net,
                                   const CircuitTrajectory& traj, int sample,
                                   const Eigen::VectorXd& eps) {
  const CircuitState s = state_at(traj, sample);
  const CircuitState d = derivative(net, s);
  return (s.voltages.array().square() +
          (d.voltages.array() / eps.array()).square())
      .matrix();
}

// Magnitude-squared analytic signal of one real series, via the discrete
// Hilbert transform: keep DC and Nyquist, double the positive frequencies,
// drop the negative ones.
Eigen::VectorXd analytic_squared(Eigen::FFT<double>& fft,
                                 const Eigen::VectorXd& signal) {
  const int n = static_cast<int>(signal.size());
  std::vector<double> in(signal.data(), signal.data() + n);
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, in);
  const int half = n / 2;
  for (int k = 1; k < (n + 1) / 2; ++k) spectrum[k] *= 2.0;
  for (int k = half + 1; k < n; ++k) spectrum[k] = 0.0;
  std::vector<std::complex<double>> analytic;
  fft.inv(analytic, spectrum);
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) out[k] = std::norm(analytic[k]);
  return out;
}

// Linear interpolation of the rows of `values` (sampled at `xs`) onto `x`.
Eigen::VectorXd interp_row(const Eigen::VectorXd& xs,
                           const Eigen::MatrixXd& values, double x) {
  const Eigen::Index n = xs.size();
  if (x <= xs[0]) return values.row(0);
  if (x >= xs[n - 1]) return values.row(n - 1);
  const double* begin = xs.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, x) - begin;
  const Eigen::Index lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - w) * values.row(lo) + w * values.row(hi);
}

Eigen::Index nearest_sample(const Eigen::VectorXd& times, double t) {
  const double* begin = times.data();
  const Eigen::Index n = times.size();
  const Eigen::Index hi =
      std::min<Eigen::Index>(std::upper_bound(begin, begin + n, t) - begin,
                             n - 1);
  const Eigen::Index lo = hi > 0 ? hi - 1 : 0;
  return (t - times[lo] <= times[hi] - t) ? lo : hi;
}

TransferEfficiency efficiency_from(const Eigen::VectorXd& times,
                                   const Eigen::MatrixXd& values,
                                   int target_site, double transfer_time) {
  if (target_site < 0 || target_site >= values.cols()) {
    throw DimensionMismatch("transfer_efficiency: site " +
                            std::to_string(target_site + 1) +
                            " out of range for " +
                            std::to_string(values.cols()) + " sites");
  }
  const Eigen::Index n = times.size();
  if (n == 0 || transfer_time < times[0] || transfer_time > times[n - 1]) {
    throw TimeOutOfRange("transfer_efficiency: read time " +
                         std::to_string(transfer_time) +
                         " s lies outside the sampled window");
  }
  TransferEfficiency result;
  const Eigen::Index at = nearest_sample(times, transfer_time);
  result.at_time = values(at, target_site);

  const double half_width = 0.05 * std::abs(transfer_time);
  const double lo = transfer_time - half_width;
  const double hi = transfer_time + half_width;
  result.peak_in_window = result.at_time;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (times[k] < lo || times[k] > hi) continue;
    result.peak_in_window = std::max(result.peak_in_window,
                                     values(k, target_site));
  }
  return result;
}

}  // namespace

EnvelopeSeries envelope(const CircuitTrajectory& traj,
                        const CircuitNetwork& net, EnvelopeMethod method) {
  if (traj.n_nodes() != net.n_nodes()) {
    throw DimensionMismatch("envelope: trajectory has " +
                            std::to_string(traj.n_nodes()) +
                            " nodes, network has " +
                            std::to_string(net.n_nodes()));
  }
  const double dt = uniform_step(traj.times);
  const Eigen::VectorXd eps = natural_frequencies(net);
  const double carrier_period = kTwoPi / eps.maxCoeff();
  const double samples_per_period = carrier_period / dt;
  if (samples_per_period < 20.0 * (1.0 - 1e-9)) {
    throw UndersampledSignal(
        "envelope: " + std::to_string(samples_per_period) +
        " samples per carrier period; need at least 20");
  }

  const int n_samples = traj.n_samples();
  const int n_nodes = traj.n_nodes();

  // The t = 0 norm comes from the quadrature signal, which is exact there;
  // it anchors both methods to the true initial energy content.
  const double norm0 = quadrature_squared(net, traj, 0, eps).sum();
  if (!(norm0 > 0.0)) {
    throw AllZero("envelope: the initial state carries no signal");
  }

  EnvelopeSeries series;
  series.times = traj.times;
  series.method = method;
  series.carrier_period = carrier_period;
  series.envelope.resize(n_samples, n_nodes);

  if (method == EnvelopeMethod::kQuadrature) {
    for (int k = 0; k < n_samples; ++k) {
      series.envelope.row(k) =
          quadrature_squared(net, traj, k, eps).transpose() / norm0;
    }
  } else {
    Eigen::FFT<double> fft;
    for (int site = 0; site < n_nodes; ++site) {
      series.envelope.col(site) =
          analytic_squared(fft, traj.voltages.col(site)) / norm0;
    }
  }
  return series;
}

AgreementReport compare_populations(const QuantumTrajectory& q,
                                    const EnvelopeSeries& e) {
  if (q.n_sites() != e.n_sites()) {
    throw DimensionMismatch("compare_populations: " +
                            std::to_string(q.n_sites()) + " sites vs " +
                            std::to_string(e.n_sites()));
  }
  if (q.n_samples() < 2 || e.n_samples() < 2) {
    throw DisjointTimeRanges("compare_populations: need sampled trajectories");
  }
  const double trim = std::max(e.carrier_period, 0.0);
  const double lo = std::max(q.times[0], e.times[0]) + trim;
  const double hi =
      std::min(q.times[q.n_samples() - 1], e.times[e.n_samples() - 1]) - trim;
  if (!(hi > lo)) {
    throw DisjointTimeRanges(
        "compare_populations: no overlapping time range survives trimming");
  }

  // Resample onto the coarser of the two grids, restricted to [lo, hi].
  const double q_step = (q.times[q.n_samples() - 1] - q.times[0]) /
                        (q.n_samples() - 1);
  const double e_step = (e.times[e.n_samples() - 1] - e.times[0]) /
                        (e.n_samples() - 1);
  const Eigen::VectorXd& grid = q_step >= e_step ? q.times : e.times;

  std::vector<double> ts;
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    if (grid[k] >= lo && grid[k] <= hi) ts.push_back(grid[k]);
  }
  if (ts.size() < 2) {
    throw DisjointTimeRanges(
        "compare_populations: fewer than 2 shared samples");
  }

  const int n_sites = q.n_sites();
  Eigen::MatrixXd abs_diff = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(ts.size()), n_sites);
  double diff_sq = 0.0;
  double ref_sq = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Eigen::VectorXd pop = interp_row(q.times, q.populations, ts[k]);
    const Eigen::VectorXd env = interp_row(e.times, e.envelope, ts[k]);
    abs_diff.row(static_cast<Eigen::Index>(k)) =
        (env - pop).cwiseAbs().transpose();
    diff_sq += (env - pop).squaredNorm();
    ref_sq += pop.squaredNorm();
  }

  AgreementReport report;
  report.per_site_mae = abs_diff.colwise().mean();
  report.global_mae = abs_diff.mean();
  report.global_l2 = ref_sq > 0.0 ? std::sqrt(diff_sq / ref_sq)
                                  : std::sqrt(diff_sq);
  report.per_site_mae.maxCoeff(&report.worst_site);
  report.window_start = ts.front();
  report.window_end = ts.back();
  return report;
}

double fit_decay_rate(const Eigen::VectorXd& times,
                      const Eigen::VectorXd& energy) {
  if (times.size() != energy.size()) {
    throw DimensionMismatch("fit_decay_rate: " + std::to_string(times.size()) +
                            " times vs " + std::to_string(energy.size()) +
                            " energies");
  }
  if (times.size() < 10) {
    throw DimensionMismatch("fit_decay_rate: need at least 10 samples, got " +
                            std::to_string(times.size()));
  }
  if ((energy.array() <= 0.0).any() || !energy.allFinite()) {
    throw NonpositiveEnergy(
        "fit_decay_rate: energies must be strictly positive and finite");
  }
  const Eigen::ArrayXd t = times.array() - times.mean();
  const double t_var = t.square().sum();
  if (!(t_var > 0.0)) {
    throw Error("fit_decay_rate: times must not be all equal");
  }
  const Eigen::ArrayXd y = energy.array().log();
  const double slope = (t * (y - y.mean())).sum() / t_var;
  return -slope;
}

TransferEfficiency transfer_efficiency(const QuantumTrajectory& traj,
                                       int target_site, double transfer_time) {
  return efficiency_from(traj.times, traj.populations, target_site,
                         transfer_time);
}

TransferEfficiency transfer_efficiency(const EnvelopeSeries& series,
                                       int target_site, double transfer_time) {
  return efficiency_from(series.times, series.envelope, target_site,
                         transfer_time);
}

double participation_ratio(const Eigen::VectorXd& populations) {
  if ((populations.array() < 0.0).any()) {
    throw Error("participation_ratio: populations must be nonnegative");
  }
  const double total = populations.sum();
  if (!(total > 0.0)) {
    throw AllZero("participation_ratio: populations sum to zero");
  }
  return total * total / populations.squaredNorm();
}

double spread_variance(const Eigen::VectorXd& populations,
                       const Eigen::VectorXd& positions) {
  if (populations.size() != positions.size()) {
    throw DimensionMismatch("spread_variance: " +
                            std::to_string(populations.size()) +
                            " populations vs " +
                            std::to_string(positions.size()) + " positions");
  }
  if ((populations.array() < 0.0).any()) {
    throw Error("spread_variance: populations must be nonnegative");
  }
  const double total = populations.sum();
  if (!(total > 0.0)) {
    throw AllZero("spread_variance: populations sum to zero");
  }
  const double mean = populations.dot(positions) / total;
  return populations.dot((positions.array() - mean).square().matrix()) / total;
}

double spread_variance(const Eigen::VectorXd& populations) {
  return spread_variance(
      populations,
      Eigen::VectorXd::LinSpaced(populations.size(), 0.0,
                                 static_cast<double>(populations.size() - 1)));
}

}  // namespace qnet
