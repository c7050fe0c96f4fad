#pragma once

// Stage Hamiltonians of the two-stage drive.
//
//   H1 = (Omega + epsilon) sum_j sigma^x_j + sum_{i<j} V_ij n_i n_j
//   H2 = sum_{i<j} V_ij n_i n_j + F sum_j j n_j        (j = 1..L)
//
// V_ij = V / |i-j|^6 on the pairs admitted by the interaction kernel.

#include "dtc/hilbert.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace dtc {

enum class KernelRange { NN, NNN, NNNN, ALL };

std::string_view to_string(KernelRange range);
KernelRange parse_kernel(std::string_view name);

struct InteractionKernel {
  KernelRange range = KernelRange::NN;
  double V = 0.0;

  /// Largest admitted |i-j|, or L-1 for ALL.
  int max_distance(int sites) const;
  /// V/|i-j|^6 for admitted pairs, zero otherwise (including i == j).
  double coupling(int i, int j) const;
};

struct SimulationParams {
  /// Dense H1 at L sites needs 2^(2L) doubles; 14 sites is about 2 GiB.
  static constexpr int kMaxDenseSites = 14;

  int L = 1;
  double Omega = 0.0;
  double epsilon = 0.0;
  double V = 0.0;
  double F = 0.0;
  double T1 = 1.0;
  double T2 = 10.0;
  KernelRange kernel = KernelRange::NN;

  /// Throws InvalidInput on L < 1, non-positive durations or non-finite rates.
  void validate() const;

  BasisConfig basis() const { return BasisConfig(L); }
  InteractionKernel interaction() const { return {kernel, V}; }
  double period() const { return T1 + T2; }

  bool operator==(const SimulationParams&) const = default;
};

Eigen::VectorXd interaction_diagonal(const SimulationParams& params);
Eigen::VectorXd stark_diagonal(const SimulationParams& params);

/// Dense H1. Real symmetric, so also Hermitian; throws ResourceError above
/// kMaxDenseSites.
Eigen::MatrixXd build_h1(const SimulationParams& params);
Eigen::VectorXd build_h2_diagonal(const SimulationParams& params);

struct StageHamiltonians {
  Eigen::MatrixXd h1;
  Eigen::VectorXd h2_diagonal;
};

StageHamiltonians build_stage_hamiltonians(const SimulationParams& params);

}  // namespace dtc
