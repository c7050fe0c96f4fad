#pragma once

// Reference computations for the test suites. These rebuild everything from
// bit operations and textbook formulas and share no numerical code with the
// library beyond the parameter struct.

#include "dtc/hamiltonian.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Diagonal of sum_{i<j} V_ij n_i n_j + F sum_j j n_j, plus the interaction
/// diagonal alone, built by bit loops.
Eigen::VectorXd interaction(const dtc::SimulationParams& p);
Eigen::VectorXd stark(const dtc::SimulationParams& p);

/// Full-period propagator from a second-order (Strang) split of stage one,
/// e^{-iD dt/2} e^{-iX dt} e^{-iD dt/2}, with `steps` steps over the whole
/// period T1 + T2 distributed in proportion to the stage durations. Stage
/// two is diagonal and is stepped as phases.
Eigen::MatrixXcd trotter_floquet(const dtc::SimulationParams& p, long steps = 100'000);

/// exp(-i H2 T2) exp(-i H1 T1) with H1 exponentiated by Pade scaling and
/// squaring (Eigen MatrixFunctions).
Eigen::MatrixXcd expm_floquet(const dtc::SimulationParams& p);

/// C[n] = (1/L) sum_j <psi0| Z_j (U^dag)^n Z_j U^n |psi0> from a dense U,
/// complex-valued so callers can check realness.
std::vector<Complex> heisenberg_autocorrelator(const Eigen::MatrixXcd& u,
                                               const Eigen::VectorXcd& psi0, int sites,
                                               int n_cycles);

/// |sum_{n=1}^N c[n] e^{-i 2 pi k n / N}| / N via std::exp, k = 0..N-1.
std::vector<double> naive_dft_magnitudes(const std::vector<double>& c);

}  // namespace oracle
