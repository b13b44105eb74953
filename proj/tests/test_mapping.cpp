#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "qnet/circuit.hpp"
#include "qnet/errors.hpp"
#include "qnet/experiments.hpp"
#include "qnet/mapping.hpp"
#include "qnet/tight_binding.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

qnet::CircuitNetwork symmetric_pair(double r, double l, double c, double l_x) {
  Eigen::VectorXd res = Eigen::VectorXd::Constant(2, r);
  Eigen::VectorXd ind = Eigen::VectorXd::Constant(2, l);
  Eigen::VectorXd cap = Eigen::VectorXd::Constant(2, c);
  return qnet::make_network(res, ind, cap, {{0, 1, l_x}});
}

const qnet::SynthesisEntry& find_entry(const qnet::SynthesisResult& result,
                                       const std::string& name) {
  for (const qnet::SynthesisEntry& e : result.entries) {
    if (e.name == name) return e;
  }
  REQUIRE_MESSAGE(false, ("missing synthesis entry " + name));
  return result.entries.front();
}

}  // namespace

TEST_CASE("circuit_to_quantum: symmetric pair reference values") {
  const qnet::CircuitNetwork net =
      symmetric_pair(qnet::kLossless, 3.35e-3, 1.5e-3, 96.05e-3);
  const qnet::TightBindingHamiltonian h = qnet::circuit_to_quantum(net);
  CHECK(h.site_energies[0] == doctest::Approx(453.81).epsilon(1e-4));
  CHECK(h.site_energies[1] == doctest::Approx(453.81).epsilon(1e-4));
  CHECK(h.couplings(0, 1) == doctest::Approx(-7.647).epsilon(1e-3));
  CHECK(h.loss_rates.maxCoeff() == 0.0);
}

TEST_CASE("circuit_to_quantum: SSH preset energies, couplings, losses") {
  const qnet::TightBindingHamiltonian h =
      qnet::circuit_to_quantum(qnet::ssh_preset(5));
  CHECK(h.n_sites() == 10);
  for (int n = 0; n < 10; ++n) {
    CHECK(h.site_energies[n] == doctest::Approx(457.62).epsilon(1e-4));
    CHECK(h.loss_rates[n] == doctest::Approx(0.7407).epsilon(1e-3));
  }
  // Weak-terminated chain: first bond is the weak one.
  CHECK(h.couplings(0, 1) == doctest::Approx(-3.792).epsilon(1e-3));
  CHECK(h.couplings(1, 2) == doctest::Approx(-7.583).epsilon(1e-3));
  CHECK(h.couplings(1, 2) / h.couplings(0, 1) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("circuit_to_quantum: uncoupled tank") {
  Eigen::VectorXd res(1), ind(1), cap(1);
  res << 1000.0;
  ind << 3.35e-3;
  cap << 1.5e-3;
  const qnet::CircuitNetwork net = qnet::make_network(res, ind, cap, {});
  const qnet::TightBindingHamiltonian h = qnet::circuit_to_quantum(net);
  CHECK(h.site_energies[0] ==
        doctest::Approx(1.0 / std::sqrt(3.35e-3 * 1.5e-3)));
  CHECK(h.couplings.cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.loss_rates[0] == doctest::Approx(1.0 / (1000.0 * 1.5e-3)));
}

TEST_CASE("circuit_to_quantum flags bonds whose two ends disagree") {
  Eigen::VectorXd res = Eigen::VectorXd::Constant(2, qnet::kLossless);
  Eigen::VectorXd ind = Eigen::VectorXd::Constant(2, 3.35e-3);
  Eigen::VectorXd cap(2);
  cap << 1.5e-3, 1.8e-3;
  const qnet::CircuitNetwork net =
      qnet::make_network(res, ind, cap, {{0, 1, 96.05e-3}});
  CHECK_THROWS_AS(qnet::circuit_to_quantum(net),
                  qnet::AsymmetryBeyondTolerance);
  // A loose tolerance accepts the same network with the geometric-mean J.
  const qnet::TightBindingHamiltonian h = qnet::circuit_to_quantum(net, 0.5);
  CHECK(h.couplings(0, 1) < 0.0);
}

TEST_CASE("quantum_to_circuit inverts the symmetric pair") {
  const Eigen::VectorXd eps = Eigen::VectorXd::Constant(2, 453.8125);
  const Eigen::VectorXd gamma = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd j(2, 2);
  j << 0.0, -7.6475, -7.6475, 0.0;
  const qnet::TightBindingHamiltonian h =
      qnet::make_hamiltonian(eps, gamma, j);
  const qnet::CircuitNetwork net =
      qnet::quantum_to_circuit(h, Eigen::VectorXd::Constant(2, 1.5e-3));
  CHECK(net.branches.size() == 1);
  CHECK(net.branches[0].inductance == doctest::Approx(96.05e-3).epsilon(1e-3));
  CHECK(net.inductances[0] == doctest::Approx(3.35e-3).epsilon(1e-3));
  CHECK_FALSE(qnet::node_lossy(net, 0));
}

TEST_CASE("quantum_to_circuit / circuit_to_quantum round trip") {
  const qnet::TightBindingHamiltonian h = qnet::ssh_quantum(qnet::SshOptions{});
  const qnet::CircuitNetwork net =
      qnet::quantum_to_circuit(h, Eigen::VectorXd::Constant(10, 1.5e-3));
  const qnet::TightBindingHamiltonian back = qnet::circuit_to_quantum(net);
  CHECK((back.site_energies - h.site_energies).cwiseAbs().maxCoeff() /
            h.site_energies.maxCoeff() <
        1e-9);
  CHECK((back.couplings - h.couplings).cwiseAbs().maxCoeff() /
            h.couplings.cwiseAbs().maxCoeff() <
        1e-9);
  CHECK((back.loss_rates - h.loss_rates).cwiseAbs().maxCoeff() /
            h.loss_rates.maxCoeff() <
        1e-9);
}

TEST_CASE("quantum_to_circuit rejects infeasible and positive couplings") {
  const Eigen::VectorXd eps = Eigen::VectorXd::Constant(2, 1.0);
  const Eigen::VectorXd gamma = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd strong(2, 2);
  strong << 0.0, -10.0, -10.0, 0.0;
  CHECK_THROWS_AS(
      qnet::quantum_to_circuit(qnet::make_hamiltonian(eps, gamma, strong),
                               Eigen::VectorXd::Constant(2, 1.0)),
      qnet::InfeasibleInductance);

  Eigen::MatrixXd positive(2, 2);
  positive << 0.0, 0.1, 0.1, 0.0;
  CHECK_THROWS_AS(
      qnet::quantum_to_circuit(qnet::make_hamiltonian(eps, gamma, positive),
                               Eigen::VectorXd::Constant(2, 1.0)),
      qnet::PositiveJUnsupported);
}

TEST_CASE("rescale maps physical pigment values onto the platform") {
  const double eta = 5.2615e12;
  const double eps_phys = qnet::wavenumber_to_angular(12450.0);
  const double j_phys = qnet::wavenumber_to_angular(-27.0);
  CHECK(eps_phys == doctest::Approx(2.3452e15).epsilon(1e-4));

  const Eigen::VectorXd eps = Eigen::VectorXd::Constant(2, eps_phys);
  const Eigen::VectorXd gamma = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd j(2, 2);
  j << 0.0, j_phys, j_phys, 0.0;
  const qnet::TightBindingHamiltonian h =
      qnet::make_hamiltonian(eps, gamma, j);
  const qnet::TightBindingHamiltonian scaled = qnet::rescale(h, eta);
  CHECK(scaled.site_energies[0] == doctest::Approx(445.7).epsilon(2e-3));
  CHECK(scaled.couplings(0, 1) == doctest::Approx(-0.967).epsilon(2e-3));
  // Ratios survive the rescale exactly.
  CHECK(scaled.couplings(0, 1) / scaled.site_energies[0] ==
        doctest::Approx(j_phys / eps_phys).epsilon(1e-12));

  const qnet::TightBindingHamiltonian same = qnet::rescale(h, 1.0);
  CHECK((same.site_energies - h.site_energies).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(qnet::rescale(h, 0.0), qnet::Error);
}

TEST_CASE("synthesize_controls reproduces the reference control voltages") {
  Eigen::VectorXd res(1), ind(1), cap(1);
  res << 1000.0;
  ind << 3.35e-3;
  cap << 1.5e-3;
  const qnet::CircuitNetwork net = qnet::make_network(res, ind, cap, {});
  Eigen::VectorXd v0(1);
  v0 << 0.5;
  const qnet::SynthesisResult result = qnet::synthesize_controls(net, v0);

  CHECK(result.dac_step == doctest::Approx(5.0 / 4096.0).epsilon(1e-12));

  const qnet::SynthesisEntry& r_entry = find_entry(result, "R_1");
  CHECK(r_entry.voltage == doctest::Approx(5e-3).epsilon(1e-9));
  CHECK(r_entry.code == 4);

  const qnet::SynthesisEntry& l_entry = find_entry(result, "L_1");
  CHECK(l_entry.voltage == doctest::Approx(0.14925).epsilon(1e-4));
  CHECK(l_entry.code == 122);

  const qnet::SynthesisEntry& c_entry = find_entry(result, "C_1");
  CHECK(c_entry.voltage == doctest::Approx(1.0 / 3.0).epsilon(1e-4));

  const qnet::SynthesisEntry& ic_entry = find_entry(result, "IC_1");
  CHECK(ic_entry.voltage == doctest::Approx(0.25).epsilon(1e-9));

  for (const qnet::SynthesisEntry& e : result.entries) {
    CHECK(e.code >= 0);
    CHECK(e.code <= 4095);
    CHECK(std::abs(e.quantization_error) <= result.dac_step / 2.0 + 1e-12);
    CHECK(e.voltage == doctest::Approx(e.code * result.dac_step +
                                       e.quantization_error));
  }
}

TEST_CASE("synthesize_controls names branch controls after their nodes") {
  const qnet::CircuitNetwork net =
      symmetric_pair(1000.0, 3.35e-3, 1.5e-3, 96.05e-3);
  Eigen::VectorXd v0(2);
  v0 << 1.0, 0.0;
  const qnet::SynthesisResult result = qnet::synthesize_controls(net, v0);
  const qnet::SynthesisEntry& branch = find_entry(result, "L_1_2");
  CHECK(branch.voltage == doctest::Approx(5e-4 / 96.05e-3).epsilon(1e-6));
}

TEST_CASE("synthesize_controls rejects values outside the DAC range") {
  Eigen::VectorXd res(1), ind(1), cap(1);
  res << 1000.0;
  ind << 0.01e-3;  // needs 50 V on a 5 V DAC
  cap << 1.5e-3;
  const qnet::CircuitNetwork net = qnet::make_network(res, ind, cap, {});
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(qnet::synthesize_controls(net, v0),
                  qnet::ControlOutOfRange);
  try {
    qnet::synthesize_controls(net, v0);
  } catch (const qnet::ControlOutOfRange& e) {
    CHECK(std::string(e.what()).find("L_1") != std::string::npos);
  }
}

TEST_CASE("platform frequency ceiling and DAC step") {
  CHECK(qnet::max_site_frequency() ==
        doctest::Approx(1.0e4 / (2.0 * kPi)).epsilon(1e-12));
  CHECK(qnet::max_site_frequency() == doctest::Approx(1591.5).epsilon(1e-3));
  qnet::CoreConfig cfg;
  CHECK(qnet::dac_step(cfg) == doctest::Approx(1.220703125e-3).epsilon(1e-12));
}

TEST_CASE("wavenumber conversion uses omega = 2 pi c nu") {
  const double c_cm = 2.99792458e10;
  CHECK(qnet::wavenumber_to_angular(1.0) ==
        doctest::Approx(2.0 * kPi * c_cm).epsilon(1e-12));
  CHECK(qnet::wavenumber_to_angular(-27.0) ==
        doctest::Approx(-5.0859e12).epsilon(1e-4));
}
