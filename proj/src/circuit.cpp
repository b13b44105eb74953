#include "qnet/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qnet/tight_binding.hpp"  // shared step-size policy

namespace qnet {

namespace {

void check_state_dims(const CircuitNetwork& net, const CircuitState& s) {
  if (s.voltages.size() != net.n_nodes() ||
      s.node_currents.size() != net.n_nodes() ||
      s.branch_currents.size() != net.n_branches()) {
    throw DimensionMismatch("circuit state does not match the network shape");
  }
}

// dy/dt for the packed state [V; I_node; I_branch].
void packed_derivative(const CircuitNetwork& net, const Eigen::VectorXd& y,
                       Eigen::VectorXd& dy) {
  const int n = net.n_nodes();
  const int nb = net.n_branches();
  const auto v = y.head(n);
  const auto i_node = y.segment(n, n);
  const auto i_branch = y.tail(nb);

  dy.resize(2 * n + nb);
  auto dv = dy.head(n);
  auto di_node = dy.segment(n, n);
  auto di_branch = dy.tail(nb);

  for (int k = 0; k < n; ++k) {
    double sum = -i_node[k];
    if (std::isfinite(net.resistances[k])) {
      sum -= v[k] / net.resistances[k];
    }
    dv[k] = sum;  // branch contributions added below
    di_node[k] = v[k] / net.inductances[k];
  }
  for (int b = 0; b < nb; ++b) {
    const CouplingBranch& br = net.branches[b];
    di_branch[b] = (v[br.node_a] - v[br.node_b]) / br.inductance;
    dv[br.node_a] -= i_branch[b];
    dv[br.node_b] += i_branch[b];
  }
  dv.array() /= net.capacitances.array();
}

}  // namespace

CircuitNetwork make_network(const Eigen::VectorXd& resistances,
                            const Eigen::VectorXd& inductances,
                            const Eigen::VectorXd& capacitances,
                            std::vector<CouplingBranch> branches) {
  const Eigen::Index n = inductances.size();
  if (n == 0) {
    throw DimensionMismatch("network needs at least one node");
  }
  if (resistances.size() != n || capacitances.size() != n) {
    throw DimensionMismatch("R, L, C vectors must share one dimension");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(inductances[k] > 0.0) || !std::isfinite(inductances[k])) {
      throw DimensionMismatch("inductance at node " + std::to_string(k) +
                              " must be positive and finite");
    }
    if (!(capacitances[k] > 0.0) || !std::isfinite(capacitances[k])) {
      throw DimensionMismatch("capacitance at node " + std::to_string(k) +
                              " must be positive and finite");
    }
    // +infinity encodes "no resistor"; any finite value must be positive.
    if (!(resistances[k] > 0.0)) {
      throw DimensionMismatch("resistance at node " + std::to_string(k) +
                              " must be positive (or absent)");
    }
  }
  for (CouplingBranch& br : branches) {
    if (br.node_a > br.node_b) std::swap(br.node_a, br.node_b);
    if (br.node_a < 0 || br.node_b >= static_cast<int>(n)) {
      throw DimensionMismatch("coupling branch references a missing node");
    }
    if (br.node_a == br.node_b) {
      throw AsymmetricCoupling("self-coupling branch at node " +
                               std::to_string(br.node_a));
    }
    if (!(br.inductance > 0.0) || !std::isfinite(br.inductance)) {
      throw DimensionMismatch("coupling inductance must be positive and finite");
    }
  }
  std::sort(branches.begin(), branches.end(),
            [](const CouplingBranch& a, const CouplingBranch& b) {
              return std::pair(a.node_a, a.node_b) <
                     std::pair(b.node_a, b.node_b);
            });
  for (std::size_t b = 1; b < branches.size(); ++b) {
    if (branches[b].node_a == branches[b - 1].node_a &&
        branches[b].node_b == branches[b - 1].node_b) {
      throw AsymmetricCoupling(
          "duplicate coupling branch between nodes " +
          std::to_string(branches[b].node_a) + " and " +
          std::to_string(branches[b].node_b));
    }
  }
  return CircuitNetwork{resistances, inductances, capacitances,
                        std::move(branches)};
}

bool node_lossy(const CircuitNetwork& net, int node) {
  return std::isfinite(net.resistances[node]);
}

CircuitNetwork without_resistors(const CircuitNetwork& net) {
  CircuitNetwork out = net;
  out.resistances.setConstant(kLossless);
  return out;
}

CircuitState unit_excitation(const CircuitNetwork& net, int node,
                             double amplitude) {
  if (node < 0 || node >= net.n_nodes()) {
    throw DimensionMismatch("excitation node index out of range");
  }
  CircuitState s;
  s.voltages = Eigen::VectorXd::Zero(net.n_nodes());
  s.voltages[node] = amplitude;
  s.node_currents = Eigen::VectorXd::Zero(net.n_nodes());
  s.branch_currents = Eigen::VectorXd::Zero(net.n_branches());
  s.time = 0.0;
  return s;
}

Eigen::VectorXd natural_frequencies(const CircuitNetwork& net) {
  Eigen::VectorXd inv_l = net.inductances.cwiseInverse();
  for (const CouplingBranch& br : net.branches) {
    inv_l[br.node_a] += 1.0 / br.inductance;
    inv_l[br.node_b] += 1.0 / br.inductance;
  }
  return (inv_l.array() / net.capacitances.array()).sqrt();
}

double max_time_step(const CircuitNetwork& net) {
  return max_time_step(natural_frequencies(net).maxCoeff());
}

double default_time_step(const CircuitNetwork& net) {
  return default_time_step(natural_frequencies(net).maxCoeff());
}

CircuitState derivative(const CircuitNetwork& net, const CircuitState& s) {
  check_state_dims(net, s);
  const int n = net.n_nodes();
  const int nb = net.n_branches();
  Eigen::VectorXd y(2 * n + nb), dy;
  y << s.voltages, s.node_currents, s.branch_currents;
  packed_derivative(net, y, dy);
  CircuitState rate;
  rate.voltages = dy.head(n);
  rate.node_currents = dy.segment(n, n);
  rate.branch_currents = dy.tail(nb);
  rate.time = s.time;
  return rate;
}

CircuitTrajectory simulate(const CircuitNetwork& net, const CircuitState& init,
                           double t_end, double dt, int stride) {
  check_state_dims(net, init);
  if (dt <= 0.0) dt = default_time_step(net);
  const double dt_max = max_time_step(net);
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw StepTooLarge("dt = " + std::to_string(dt) +
                       " s exceeds the resolution limit " +
                       std::to_string(dt_max) + " s");
  }
  const double span = t_end - init.time;
  if (!(span > 0.0)) {
    throw DimensionMismatch("integration window must have positive length");
  }
  long n_steps =
      std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-12)));
  if (stride <= 0) stride = default_sample_stride(n_steps);
  // Round the step count up to a multiple of the sampling stride so every
  // stored sample (including the final one at t_end) lies on a uniform grid.
  if (stride > 1) n_steps = ((n_steps + stride - 1) / stride) * stride;
  const double h = span / static_cast<double>(n_steps);

  const int n = net.n_nodes();
  const int nb = net.n_branches();

  std::vector<long> sample_steps;
  sample_steps.push_back(0);
  for (long k = stride; k < n_steps; k += stride) sample_steps.push_back(k);
  sample_steps.push_back(n_steps);
  const auto n_samples = static_cast<Eigen::Index>(sample_steps.size());

  CircuitTrajectory traj;
  traj.times.resize(n_samples);
  traj.voltages.resize(n_samples, n);
  traj.node_currents.resize(n_samples, n);
  traj.branch_currents.resize(n_samples, nb);

  Eigen::VectorXd y(2 * n + nb);
  y << init.voltages, init.node_currents, init.branch_currents;

  std::size_t cursor = 0;
  auto record = [&](long step) {
    if (cursor < sample_steps.size() && sample_steps[cursor] == step) {
      const auto i = static_cast<Eigen::Index>(cursor);
      traj.times[i] = init.time + h * static_cast<double>(step);
      traj.voltages.row(i) = y.head(n).transpose();
      traj.node_currents.row(i) = y.segment(n, n).transpose();
      traj.branch_currents.row(i) = y.tail(nb).transpose();
      ++cursor;
    }
  };
  record(0);

  Eigen::VectorXd k1, k2, k3, k4, scratch;
  for (long step = 1; step <= n_steps; ++step) {
    packed_derivative(net, y, k1);
    scratch = y + (0.5 * h) * k1;
    packed_derivative(net, scratch, k2);
    scratch = y + (0.5 * h) * k2;
    packed_derivative(net, scratch, k3);
    scratch = y + h * k3;
    packed_derivative(net, scratch, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(step);
  }
  traj.times[n_samples - 1] = t_end;

  if (!traj.voltages.allFinite()) {
    throw NonFiniteResult("circuit simulation produced non-finite voltages");
  }
  traj.squared_voltages = traj.voltages.cwiseAbs2();
  return traj;
}

double circuit_energy(const CircuitNetwork& net, const CircuitState& s) {
  check_state_dims(net, s);
  double e = 0.5 * (net.capacitances.array() * s.voltages.array().square() +
                    net.inductances.array() * s.node_currents.array().square())
                       .sum();
  for (int b = 0; b < net.n_branches(); ++b) {
    e += 0.5 * net.branches[b].inductance * s.branch_currents[b] *
         s.branch_currents[b];
  }
  return e;
}

Eigen::VectorXd energy_series(const CircuitNetwork& net,
                              const CircuitTrajectory& traj) {
  Eigen::VectorXd e(traj.n_samples());
  for (int k = 0; k < traj.n_samples(); ++k) {
    e[k] = circuit_energy(net, state_at(traj, k));
  }
  return e;
}

CircuitState state_at(const CircuitTrajectory& traj, int sample) {
  if (sample < 0 || sample >= traj.n_samples()) {
    throw DimensionMismatch("trajectory sample index out of range");
  }
  CircuitState s;
  s.voltages = traj.voltages.row(sample).transpose();
  s.node_currents = traj.node_currents.row(sample).transpose();
  s.branch_currents = traj.branch_currents.row(sample).transpose();
  s.time = traj.times[sample];
  return s;
}

}  // namespace qnet
