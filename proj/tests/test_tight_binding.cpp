#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "qnet/errors.hpp"
#include "qnet/tight_binding.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

qnet::TightBindingHamiltonian two_site(double eps, double j, double gamma) {
  Eigen::VectorXd site_energies = Eigen::VectorXd::Constant(2, eps);
  Eigen::VectorXd loss_rates = Eigen::VectorXd::Constant(2, gamma);
  Eigen::MatrixXd couplings(2, 2);
  couplings << 0.0, j, j, 0.0;
  return qnet::make_hamiltonian(site_energies, loss_rates, couplings);
}

qnet::TightBindingHamiltonian chain(int n, double eps, double j,
                                    double gamma) {
  Eigen::VectorXd site_energies = Eigen::VectorXd::Constant(n, eps);
  Eigen::VectorXd loss_rates = Eigen::VectorXd::Constant(n, gamma);
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    couplings(k, k + 1) = j;
    couplings(k + 1, k) = j;
  }
  return qnet::make_hamiltonian(site_energies, loss_rates, couplings);
}

}  // namespace

TEST_CASE("make_hamiltonian accepts the two-site reference values") {
  const qnet::TightBindingHamiltonian h = two_site(453.81, -7.647, 0.0);
  CHECK(h.n_sites() == 2);
  CHECK(h.couplings(0, 1) == doctest::Approx(-7.647));
  const Eigen::MatrixXcd m = qnet::hamiltonian_matrix(h);
  CHECK(m(0, 0).real() == doctest::Approx(453.81));
  CHECK(m(0, 0).imag() == doctest::Approx(0.0));
  CHECK(m(1, 0).real() == doctest::Approx(-7.647));
}

TEST_CASE("make_hamiltonian accepts a single uncoupled site") {
  Eigen::VectorXd eps(1), gamma(1);
  eps << 1.0;
  gamma << 0.0;
  const qnet::TightBindingHamiltonian h =
      qnet::make_hamiltonian(eps, gamma, Eigen::MatrixXd::Zero(1, 1));
  CHECK(h.n_sites() == 1);
  CHECK(qnet::weak_coupling_ratio(h) == 0.0);
}

TEST_CASE("make_hamiltonian rejects invalid input") {
  Eigen::VectorXd eps = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(2);

  Eigen::MatrixXd asym(2, 2);
  asym << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(qnet::make_hamiltonian(eps, gamma, asym),
                  qnet::AsymmetricCoupling);

  CHECK_THROWS_AS(qnet::make_hamiltonian(eps, Eigen::VectorXd::Zero(3),
                                         Eigen::MatrixXd::Zero(2, 2)),
                  qnet::DimensionMismatch);

  Eigen::VectorXd bad_eps(2);
  bad_eps << 1.0, -1.0;
  CHECK_THROWS_AS(
      qnet::make_hamiltonian(bad_eps, gamma, Eigen::MatrixXd::Zero(2, 2)),
      qnet::NonpositiveSiteEnergy);
}

TEST_CASE("propagate_expm: global phase of an uncoupled site") {
  Eigen::VectorXd eps(1), gamma(1);
  eps << 1.0;
  gamma << 0.0;
  const qnet::TightBindingHamiltonian h =
      qnet::make_hamiltonian(eps, gamma, Eigen::MatrixXd::Zero(1, 1));
  Eigen::VectorXd times(2);
  times << 0.0, kPi;
  const qnet::QuantumTrajectory traj =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), times);
  const std::complex<double> c = traj.amplitudes(1, 0);
  CHECK(c.real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(c.imag()) < 1e-12);
}

TEST_CASE("propagate_expm: pure decay of a lossy site") {
  Eigen::VectorXd eps(1), gamma(1);
  eps << 1.0;
  gamma << 2.0;
  const qnet::TightBindingHamiltonian h =
      qnet::make_hamiltonian(eps, gamma, Eigen::MatrixXd::Zero(1, 1));
  Eigen::VectorXd times(2);
  times << 0.0, 1.0;
  const qnet::QuantumTrajectory traj =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), times);
  CHECK(traj.populations(1, 0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("propagate_expm: two-site Rabi oscillation and closed form") {
  const double j = 5.0;
  const qnet::TightBindingHamiltonian h = two_site(100.0, -j, 0.0);
  const double t_swap = kPi / (2.0 * j);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(101, 0.0, t_swap);
  const qnet::QuantumTrajectory traj =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), times);

  CHECK(std::abs(traj.populations(100, 0) - 0.0) < 1e-9);
  CHECK(std::abs(traj.populations(100, 1) - 1.0) < 1e-9);
  for (Eigen::Index k = 0; k < traj.n_samples(); ++k) {
    const double t = traj.times[k];
    CHECK(std::abs(traj.populations(k, 0) - std::cos(j * t) * std::cos(j * t)) <
          1e-9);
    CHECK(std::abs(traj.populations(k, 1) - std::sin(j * t) * std::sin(j * t)) <
          1e-9);
  }
}

TEST_CASE("populations match amplitude magnitudes") {
  const qnet::TightBindingHamiltonian h = two_site(100.0, -5.0, 0.3);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(11, 0.0, 1.0);
  const qnet::QuantumTrajectory traj =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), times);
  for (Eigen::Index k = 0; k < traj.n_samples(); ++k) {
    for (Eigen::Index n = 0; n < traj.n_sites(); ++n) {
      CHECK(std::abs(traj.populations(k, n) -
                     std::norm(traj.amplitudes(k, n))) < 1e-12);
    }
  }
}

TEST_CASE("propagate_ode agrees with propagate_expm on the Rabi case") {
  const double j = 5.0;
  const qnet::TightBindingHamiltonian h = two_site(100.0, -j, 0.0);
  const double t_end = kPi / (2.0 * j);
  const qnet::QuantumTrajectory ode =
      qnet::propagate_ode(h, qnet::unit_excitation(h, 0), t_end);
  const qnet::QuantumTrajectory ref =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), ode.times);
  const double max_dev =
      (ode.amplitudes - ref.amplitudes).cwiseAbs().maxCoeff();
  CHECK(max_dev < 1e-6);
}

TEST_CASE("propagate_ode conserves the norm of a lossless chain") {
  const qnet::TightBindingHamiltonian h = chain(9, 453.81, -7.65, 0.0);
  const qnet::QuantumTrajectory traj =
      qnet::propagate_ode(h, qnet::unit_excitation(h, 4), 2.0);
  const Eigen::VectorXd energy = qnet::quantum_energy(traj);
  CHECK((energy.array() - 1.0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("propagate_ode rejects steps beyond the resolution rule") {
  const qnet::TightBindingHamiltonian h = chain(3, 453.81, -7.65, 0.0);
  CHECK_THROWS_AS(
      qnet::propagate_ode(h, qnet::unit_excitation(h, 0), 1.0, 1.0 / 453.81),
      qnet::StepTooLarge);
  CHECK(qnet::max_time_step(h) ==
        doctest::Approx(2.0 * kPi / (200.0 * 453.81)));
  CHECK(qnet::default_time_step(h) < qnet::max_time_step(h));
}

TEST_CASE("propagate_second_order is exact for an uncoupled site") {
  Eigen::VectorXd eps(1), gamma(1);
  eps << 1.0;
  gamma << 0.0;
  const qnet::TightBindingHamiltonian h =
      qnet::make_hamiltonian(eps, gamma, Eigen::MatrixXd::Zero(1, 1));
  const qnet::QuantumTrajectory so =
      qnet::propagate_second_order(h, qnet::unit_excitation(h, 0), 2.0);
  const qnet::QuantumTrajectory ref =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), so.times);
  const double max_dev = (so.amplitudes - ref.amplitudes).cwiseAbs().maxCoeff();
  CHECK(max_dev < 1e-8);
}

TEST_CASE("propagate_second_order tracks the weak-coupling regime") {
  const qnet::TightBindingHamiltonian h = two_site(457.6202, -7.5836, 0.0);
  const qnet::QuantumTrajectory so =
      qnet::propagate_second_order(h, qnet::unit_excitation(h, 0), 2.0);
  const qnet::QuantumTrajectory ref =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), so.times);
  const double max_dev =
      (so.populations - ref.populations).cwiseAbs().maxCoeff();
  CHECK(max_dev < 0.01);
}

TEST_CASE("propagate_second_order breaks down outside weak coupling") {
  const qnet::TightBindingHamiltonian h = two_site(100.0, -50.0, 0.0);
  const qnet::QuantumTrajectory so =
      qnet::propagate_second_order(h, qnet::unit_excitation(h, 0), 1.0);
  const qnet::QuantumTrajectory ref =
      qnet::propagate_expm(h, qnet::unit_excitation(h, 0), so.times);
  const double max_dev =
      (so.populations - ref.populations).cwiseAbs().maxCoeff();
  CHECK(max_dev > 0.05);
}

TEST_CASE("propagate_second_order rejects lossy Hamiltonians") {
  const qnet::TightBindingHamiltonian h = two_site(100.0, -5.0, 0.5);
  CHECK_THROWS_AS(
      qnet::propagate_second_order(h, qnet::unit_excitation(h, 0), 1.0),
      qnet::LossNotSupported);
}

TEST_CASE("quantum_energy: closed, uniformly lossy, and SSH-rate cases") {
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(51, 0.0, 1.0);

  const qnet::TightBindingHamiltonian closed = two_site(457.62, -7.58, 0.0);
  const Eigen::VectorXd e0 = qnet::quantum_energy(
      qnet::propagate_expm(closed, qnet::unit_excitation(closed, 0), times));
  CHECK((e0.array() - 1.0).abs().maxCoeff() < 1e-8);

  const double gamma = 0.740741;
  const qnet::TightBindingHamiltonian lossy = two_site(457.62, -7.58, gamma);
  const Eigen::VectorXd e1 = qnet::quantum_energy(
      qnet::propagate_expm(lossy, qnet::unit_excitation(lossy, 0), times));
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    CHECK(std::abs(e1[k] - std::exp(-gamma * times[k])) < 1e-6);
  }
  CHECK(e1[50] == doctest::Approx(0.4767).epsilon(2e-3));
}

TEST_CASE("uniform loss factorizes out of the populations") {
  const double gamma = 0.9;
  const qnet::TightBindingHamiltonian lossless = two_site(300.0, -4.0, 0.0);
  const qnet::TightBindingHamiltonian lossy = two_site(300.0, -4.0, gamma);
  const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(41, 0.0, 2.0);
  const qnet::QuantumTrajectory a =
      qnet::propagate_expm(lossless, qnet::unit_excitation(lossless, 0), times);
  const qnet::QuantumTrajectory b =
      qnet::propagate_expm(lossy, qnet::unit_excitation(lossy, 0), times);
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double factor = std::exp(-gamma * times[k]);
    for (Eigen::Index n = 0; n < 2; ++n) {
      CHECK(std::abs(b.populations(k, n) - factor * a.populations(k, n)) <
            1e-8);
    }
  }
}

TEST_CASE("time reversal recovers the initial state") {
  const qnet::TightBindingHamiltonian h = chain(5, 453.81, -7.65, 0.0);
  Eigen::VectorXd times(2);
  times << 0.0, 1.5;
  const qnet::QuantumState c0 = qnet::unit_excitation(h, 2);
  const qnet::QuantumTrajectory fwd = qnet::propagate_expm(h, c0, times);

  qnet::QuantumState mid;
  mid.amplitudes = fwd.amplitudes.row(1).transpose().conjugate();
  mid.time = 0.0;
  const qnet::QuantumTrajectory back = qnet::propagate_expm(h, mid, times);
  const Eigen::VectorXcd recovered =
      back.amplitudes.row(1).transpose().conjugate();
  CHECK((recovered - c0.amplitudes).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("weak_coupling_ratio reports max|J|/min(eps)") {
  CHECK(qnet::weak_coupling_ratio(two_site(1.0, -0.5, 0.0)) ==
        doctest::Approx(0.5));
  const qnet::TightBindingHamiltonian ssh_like =
      two_site(457.6202, -7.5836, 0.0);
  CHECK(qnet::weak_coupling_ratio(ssh_like) ==
        doctest::Approx(0.01657).epsilon(1e-3));
  CHECK(qnet::kWeakCouplingWarnThreshold == doctest::Approx(0.1));
}

TEST_CASE("sample stride controls trajectory density") {
  const qnet::TightBindingHamiltonian h = two_site(100.0, -5.0, 0.0);
  const qnet::QuantumTrajectory dense =
      qnet::propagate_ode(h, qnet::unit_excitation(h, 0), 0.1, 0.0, 1);
  const qnet::QuantumTrajectory sparse =
      qnet::propagate_ode(h, qnet::unit_excitation(h, 0), 0.1, 0.0, 10);
  CHECK(dense.n_samples() > sparse.n_samples());
  CHECK(sparse.times[1] == doctest::Approx(10.0 * dense.times[1]).epsilon(0.01));
  // Defaults bound the stored sample count.
  const qnet::QuantumTrajectory capped =
      qnet::propagate_ode(h, qnet::unit_excitation(h, 0), 10.0);
  CHECK(capped.n_samples() <= 2001);
}

TEST_CASE("unit_excitation is normalized and sited") {
  const qnet::TightBindingHamiltonian h = chain(4, 100.0, -1.0, 0.0);
  const qnet::QuantumState s = qnet::unit_excitation(h, 2);
  CHECK(s.amplitudes.size() == 4);
  CHECK(std::abs(s.amplitudes.norm() - 1.0) < 1e-12);
  CHECK(std::abs(s.amplitudes[2] - std::complex<double>(1.0, 0.0)) < 1e-12);
  CHECK(s.time == 0.0);
}
