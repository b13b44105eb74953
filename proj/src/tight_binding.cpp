#include "qnet/tight_binding.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace qnet {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_finite_vector(const Eigen::VectorXd& v, const char* name) {
  if (!v.allFinite()) {
    throw NonFiniteResult(std::string(name) + " contains non-finite entries");
  }
}

bool all_loss_rates_equal(const Eigen::VectorXd& g) {
  if (g.size() == 0) return true;
  return (g.array() - g[0]).abs().maxCoeff() <= 1e-15 * (1.0 + std::abs(g[0]));
}

void check_times_grid(const Eigen::VectorXd& times, double t0) {
  if (times.size() == 0) {
    throw DimensionMismatch("sample time grid is empty");
  }
  if (std::abs(times[0] - t0) > 1e-12 * (1.0 + std::abs(t0))) {
    throw DimensionMismatch("sample time grid must start at the state's time");
  }
  for (Eigen::Index k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw DimensionMismatch("sample time grid must be strictly increasing");
    }
  }
}

// Shared RK4 driver over a complex state vector y' = f(y).  Samples every
// `stride` steps plus the final step; returns (times, one row of y per
// sample).
template <typename Rhs>
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> integrate_rk4(
    const Eigen::VectorXcd& y0, double t0, double t_end, double dt, int stride,
    Rhs&& rhs) {
  const double span = t_end - t0;
  if (!(span > 0.0)) {
    throw DimensionMismatch("integration window must have positive length");
  }
  long n_steps =
      std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-12)));
  // Round the step count up to a multiple of the sampling stride so every
  // stored sample (including the final one at t_end) lies on a uniform grid.
  if (stride > 1) n_steps = ((n_steps + stride - 1) / stride) * stride;
  const double h = span / static_cast<double>(n_steps);

  std::vector<long> sample_steps;
  sample_steps.push_back(0);
  for (long k = stride; k < n_steps; k += stride) sample_steps.push_back(k);
  sample_steps.push_back(n_steps);

  Eigen::VectorXd times(static_cast<Eigen::Index>(sample_steps.size()));
  Eigen::MatrixXcd rows(static_cast<Eigen::Index>(sample_steps.size()),
                        y0.size());

  Eigen::VectorXcd y = y0;
  std::size_t cursor = 0;
  auto record = [&](long step) {
    if (cursor < sample_steps.size() && sample_steps[cursor] == step) {
      const auto i = static_cast<Eigen::Index>(cursor);
      times[i] = t0 + h * static_cast<double>(step);
      rows.row(i) = y.transpose();
      ++cursor;
    }
  };
  record(0);

  Eigen::VectorXcd k1, k2, k3, k4;
  for (long step = 1; step <= n_steps; ++step) {
    k1 = rhs(y);
    k2 = rhs(y + (0.5 * h) * k1);
    k3 = rhs(y + (0.5 * h) * k2);
    k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(step);
  }
  times[times.size() - 1] = t_end;  // avoid accumulated rounding on the label
  return {std::move(times), std::move(rows)};
}

}  // namespace

TightBindingHamiltonian make_hamiltonian(const Eigen::VectorXd& site_energies,
                                         const Eigen::VectorXd& loss_rates,
                                         const Eigen::MatrixXd& couplings) {
  const Eigen::Index n = site_energies.size();
  if (n == 0) {
    throw DimensionMismatch("Hamiltonian needs at least one site");
  }
  if (loss_rates.size() != n || couplings.rows() != n || couplings.cols() != n) {
    throw DimensionMismatch(
        "site_energies, loss_rates and couplings must share one dimension");
  }
  check_finite_vector(site_energies, "site_energies");
  check_finite_vector(loss_rates, "loss_rates");
  if (!couplings.allFinite()) {
    throw NonFiniteResult("couplings contains non-finite entries");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(site_energies[i] > 0.0)) {
      throw NonpositiveSiteEnergy("site_energies[" + std::to_string(i) +
                                  "] = " + std::to_string(site_energies[i]) +
                                  " must be > 0");
    }
    if (loss_rates[i] < 0.0) {
      throw NonpositiveSiteEnergy("loss_rates[" + std::to_string(i) +
                                  "] must be >= 0");
    }
  }
  const double j_scale = couplings.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(1.0, j_scale);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(couplings(i, i)) > tol) {
      throw AsymmetricCoupling("couplings must have a zero diagonal (entry " +
                               std::to_string(i) + ")");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(couplings(i, j) - couplings(j, i)) > tol) {
        throw AsymmetricCoupling("couplings[" + std::to_string(i) + "][" +
                                 std::to_string(j) + "] != couplings[" +
                                 std::to_string(j) + "][" + std::to_string(i) +
                                 "]");
      }
    }
  }
  return TightBindingHamiltonian{site_energies, loss_rates, couplings};
}

Eigen::MatrixXcd hamiltonian_matrix(const TightBindingHamiltonian& h) {
  Eigen::MatrixXcd m = h.couplings.cast<Complex>();
  for (int i = 0; i < h.n_sites(); ++i) {
    m(i, i) = Complex(h.site_energies[i], -0.5 * h.loss_rates[i]);
  }
  return m;
}

QuantumState unit_excitation(const TightBindingHamiltonian& h, int site) {
  if (site < 0 || site >= h.n_sites()) {
    throw DimensionMismatch("excitation site index out of range");
  }
  QuantumState s;
  s.amplitudes = Eigen::VectorXcd::Zero(h.n_sites());
  s.amplitudes[site] = 1.0;
  s.time = 0.0;
  return s;
}

double max_time_step(double max_angular_frequency) {
  return 2.0 * std::numbers::pi / (200.0 * max_angular_frequency);
}

double default_time_step(double max_angular_frequency) {
  return 2.0 * std::numbers::pi / (600.0 * max_angular_frequency);
}

double max_time_step(const TightBindingHamiltonian& h) {
  return max_time_step(h.site_energies.maxCoeff());
}

double default_time_step(const TightBindingHamiltonian& h) {
  return default_time_step(h.site_energies.maxCoeff());
}

int default_sample_stride(long n_steps, long max_samples) {
  if (n_steps <= max_samples) return 1;
  return static_cast<int>((n_steps + max_samples - 1) / max_samples);
}

QuantumTrajectory propagate_expm(const TightBindingHamiltonian& h,
                                 const QuantumState& c0,
                                 const Eigen::VectorXd& times) {
  if (c0.amplitudes.size() != h.n_sites()) {
    throw DimensionMismatch("state dimension does not match Hamiltonian");
  }
  check_times_grid(times, c0.time);

  const int n = h.n_sites();
  const Eigen::Index n_t = times.size();
  Eigen::MatrixXcd amps(n_t, n);

  if (all_loss_rates_equal(h.loss_rates)) {
    // Uniform loss factors out of the dynamics: diagonalize the real
    // symmetric part (always well-conditioned) and damp by exp(-Gamma*t/2).
    Eigen::MatrixXd sym = h.couplings;
    sym.diagonal() = h.site_energies;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
      throw NonFiniteResult("eigendecomposition of the Hamiltonian failed");
    }
    const Eigen::VectorXcd lambda = es.eigenvalues().cast<Complex>();
    const Eigen::MatrixXcd v = es.eigenvectors().cast<Complex>();
    const Eigen::VectorXcd a0 = v.transpose() * c0.amplitudes;
    const double gamma = h.loss_rates.size() > 0 ? h.loss_rates[0] : 0.0;
    for (Eigen::Index k = 0; k < n_t; ++k) {
      const double t = times[k] - c0.time;
      const Eigen::VectorXcd phases =
          ((-kI * t) * lambda.array()).exp().matrix();
      amps.row(k) = (std::exp(-0.5 * gamma * t) *
                     (v * phases.cwiseProduct(a0)))
                        .transpose();
    }
  } else {
    const Eigen::MatrixXcd m = hamiltonian_matrix(h);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    const double residual =
        es.info() == Eigen::Success
            ? (m * es.eigenvectors() -
               es.eigenvectors() * es.eigenvalues().asDiagonal())
                      .cwiseAbs()
                      .maxCoeff() /
                  std::max(1.0, m.cwiseAbs().maxCoeff())
            : 1.0;
    if (residual <= 1e-10) {
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(es.eigenvectors());
      const Eigen::VectorXcd a0 = lu.solve(c0.amplitudes);
      for (Eigen::Index k = 0; k < n_t; ++k) {
        const double t = times[k] - c0.time;
        const Eigen::VectorXcd phases =
            ((-kI * t) * es.eigenvalues().array()).exp().matrix();
        amps.row(k) =
            (es.eigenvectors() * phases.cwiseProduct(a0)).transpose();
      }
    } else {
      // Defective or ill-conditioned eigenbasis: fall back to dense matrix
      // exponentials per sample (small n, so cubic cost per sample is fine).
      for (Eigen::Index k = 0; k < n_t; ++k) {
        const double t = times[k] - c0.time;
        const Eigen::MatrixXcd u = ((-kI * t) * m).exp();
        amps.row(k) = (u * c0.amplitudes).transpose();
      }
    }
  }

  if (!amps.allFinite()) {
    throw NonFiniteResult("propagation produced non-finite amplitudes");
  }
  return QuantumTrajectory{times, amps, amps.cwiseAbs2()};
}

QuantumTrajectory propagate_ode(const TightBindingHamiltonian& h,
                                const QuantumState& c0, double t_end,
                                double dt, int stride) {
  if (c0.amplitudes.size() != h.n_sites()) {
    throw DimensionMismatch("state dimension does not match Hamiltonian");
  }
  if (dt <= 0.0) dt = default_time_step(h);
  const double dt_max = max_time_step(h);
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw StepTooLarge("dt = " + std::to_string(dt) +
                       " s exceeds the resolution limit " +
                       std::to_string(dt_max) + " s");
  }
  if (stride <= 0) {
    stride = default_sample_stride(
        static_cast<long>(std::ceil((t_end - c0.time) / dt)));
  }
  const Eigen::MatrixXcd m = hamiltonian_matrix(h);
  auto [times, amps] = integrate_rk4(
      c0.amplitudes, c0.time, t_end, dt, stride,
      [&m](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        return -kI * (m * y);
      });
  if (!amps.allFinite()) {
    throw NonFiniteResult("propagation produced non-finite amplitudes");
  }
  Eigen::MatrixXd pops = amps.cwiseAbs2();
  return QuantumTrajectory{std::move(times), std::move(amps), std::move(pops)};
}

QuantumTrajectory propagate_second_order(const TightBindingHamiltonian& h,
                                         const QuantumState& c0, double t_end,
                                         double dt, int stride) {
  if (c0.amplitudes.size() != h.n_sites()) {
    throw DimensionMismatch("state dimension does not match Hamiltonian");
  }
  if (h.loss_rates.size() > 0 && h.loss_rates.cwiseAbs().maxCoeff() != 0.0) {
    throw LossNotSupported(
        "the second-order weak-coupling form is derived without loss");
  }
  if (dt <= 0.0) dt = default_time_step(h);
  const double dt_max = max_time_step(h);
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw StepTooLarge("dt = " + std::to_string(dt) +
                       " s exceeds the resolution limit " +
                       std::to_string(dt_max) + " s");
  }
  const int n = h.n_sites();
  if (stride <= 0) {
    stride = default_sample_stride(
        static_cast<long>(std::ceil((t_end - c0.time) / dt)));
  }

  // Integrate the stacked state (c, v) with v = dc/dt.  The initial velocity
  // is taken from the first-order dynamics at t=0, v0 = -i H c0, so that no
  // counter-rotating component is injected at the start.
  const Eigen::MatrixXcd m = hamiltonian_matrix(h);
  Eigen::VectorXcd y0(2 * n);
  y0.head(n) = c0.amplitudes;
  y0.tail(n) = -kI * (m * c0.amplitudes);

  const Eigen::ArrayXcd eps = h.site_energies.cast<Complex>().array();
  const Eigen::ArrayXcd eps_sq = eps.square();
  const Eigen::MatrixXcd j = h.couplings.cast<Complex>();

  auto [times, rows] = integrate_rk4(
      y0, c0.time, t_end, dt, stride,
      [&, n](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        Eigen::VectorXcd out(2 * n);
        const Eigen::VectorXcd c = y.head(n);
        out.head(n) = y.tail(n);
        out.tail(n) =
            (-eps_sq * c.array() - eps * (2.0 * (j * c)).array()).matrix();
        return out;
      });

  const Eigen::MatrixXcd amps = rows.leftCols(n);
  if (!amps.allFinite()) {
    throw NonFiniteResult("propagation produced non-finite amplitudes");
  }
  return QuantumTrajectory{std::move(times), amps, amps.cwiseAbs2()};
}

Eigen::VectorXd quantum_energy(const QuantumTrajectory& traj) {
  if (traj.n_samples() == 0) {
    throw DimensionMismatch("trajectory is empty");
  }
  return traj.populations.rowwise().sum();
}

double weak_coupling_ratio(const TightBindingHamiltonian& h) {
  const double j_max = h.couplings.cwiseAbs().maxCoeff();
  const double eps_min = h.site_energies.minCoeff();
  return j_max / eps_min;
}

}  // namespace qnet
