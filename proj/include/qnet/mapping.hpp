#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qnet/circuit.hpp"
#include "qnet/errors.hpp"
#include "qnet/tight_binding.hpp"

namespace qnet {

// Front-end constants of the reconfigurable platform: feedback resistors and
// capacitor of the synthesis network, the analog multiplier factor, and the
// DAC that sets every control voltage.
struct CoreConfig {
  double r_f1 = 10e3;          // ohms
  double r_f2 = 5e3;           // ohms
  double r_f3 = 1e3;           // ohms
  double c_f1 = 0.1e-6;        // farads
  double phi = 0.1;            // multiplier manufacturing factor
  double dac_full_scale = 5.0; // volts
  int dac_bits = 12;
};

struct SynthesisEntry {
  std::string name;          // e.g. "R_1", "L_2", "L_1_2", "C_3", "IC_1"
  double voltage = 0.0;      // exact control voltage, volts
  int code = 0;              // DAC code, 0 .. 2^bits - 1
  double quantization_error = 0.0;  // voltage - code * step, volts
};

struct SynthesisResult {
  std::vector<SynthesisEntry> entries;  // node R/L/C, branch L, then ICs
  double dac_step = 0.0;                // volts per code
};

// DAC resolution, volts per least-significant bit.
double dac_step(const CoreConfig& cfg);

// Electrical network -> tight-binding Hamiltonian:
//   eps_n  = sqrt((1/C_n)(1/L_n + sum_m 1/L_nm))
//   J_nm   = -1 / (2 L_nm sqrt(eps_n C_n eps_m C_m))
//   Gamma_n = 1/(R_n C_n), 0 for lossless nodes.
// The J expression reduces to -1/(2 eps L_nm C) when the two end nodes share
// eps and C; when they differ, the per-end values -1/(2 eps_n L_nm C_n) and
// -1/(2 eps_m L_nm C_m) must agree within asymmetry_tolerance (relative) or
// the network is outside the mapping's validity and an error is thrown.
TightBindingHamiltonian circuit_to_quantum(const CircuitNetwork& net,
                                           double asymmetry_tolerance = 1e-6);

// Tight-binding Hamiltonian -> electrical network, with the per-node
// capacitances pinned by the caller (the inversion is under-determined by
// one parameter per node).  Only negative couplings are realizable.
CircuitNetwork quantum_to_circuit(const TightBindingHamiltonian& h,
                                  const Eigen::VectorXd& capacitances);

// Divide all rates (eps, J, Gamma) by eta; platform time runs eta times
// slower than physical time (t_platform = eta * t_physical).
TightBindingHamiltonian rescale(const TightBindingHamiltonian& h, double eta);

// Spectroscopic wavenumber (cm^-1) to angular frequency: omega = 2 pi c nu.
double wavenumber_to_angular(double wavenumber_cm);

// Control voltages and DAC codes realizing the network on the platform:
//   V_Rn  = R_f2 / (R_f1 phi R_n)            (0 V when the node is lossless)
//   V_Ln  = R_f2 R_f3 C_f1 / (R_f1 phi L_n)
//   V_Cn  = R_f2 R_f3 C_f1 / (R_f1 phi C_n)
//   V_Lnm = R_f2 R_f3 C_f1 / (R_f1 phi L_nm)
//   V_IC  = (R_f2 / R_f1) V_n(0)
// Voltages outside [0, full scale] are unreachable and raise
// ControlOutOfRange naming the offending parameter.
SynthesisResult synthesize_controls(const CircuitNetwork& net,
                                    const Eigen::VectorXd& initial_voltages,
                                    const CoreConfig& cfg = {});

// Highest reachable site frequency (hertz) with the 1/L and 1/C controls at
// full scale.
double max_site_frequency(const CoreConfig& cfg = {});

}  // namespace qnet
