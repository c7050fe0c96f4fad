#include "dtc/hamiltonian.hpp"

#include "dtc/errors.hpp"

#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <limits>

namespace dtc {

std::string_view to_string(KernelRange range) {
  switch (range) {
    case KernelRange::NN: return "NN";
    case KernelRange::NNN: return "NNN";
    case KernelRange::NNNN: return "NNNN";
    case KernelRange::ALL: return "ALL";
  }
  return "?";
}

KernelRange parse_kernel(std::string_view name) {
  if (name == "NN") return KernelRange::NN;
  if (name == "NNN") return KernelRange::NNN;
  if (name == "NNNN") return KernelRange::NNNN;
  if (name == "ALL") return KernelRange::ALL;
  throw InvalidInput("unknown interaction kernel '" + std::string(name) +
                     "' (expected NN, NNN, NNNN or ALL)");
}

namespace {

// Pairs with |i-j| above this distance are dropped.
int truncation(KernelRange range) {
  switch (range) {
    case KernelRange::NN: return 1;
    case KernelRange::NNN: return 2;
    case KernelRange::NNNN: return 3;
    case KernelRange::ALL: break;
  }
  return std::numeric_limits<int>::max();
}

}  // namespace

int InteractionKernel::max_distance(int sites) const {
  return std::min(truncation(range), sites - 1);
}

double InteractionKernel::coupling(int i, int j) const {
  const int r = std::abs(i - j);
  if (r == 0 || r > truncation(range)) return 0.0;
  const double r3 = static_cast<double>(r) * r * r;
  return V / (r3 * r3);
}

void SimulationParams::validate() const {
  if (L < 1) throw InvalidInput("L must be >= 1, got " + std::to_string(L));
  if (L > BasisConfig::kMaxSites) {
    throw InvalidInput("L=" + std::to_string(L) + " exceeds the supported maximum");
  }
  if (!(T1 > 0.0) || !std::isfinite(T1)) throw InvalidInput("T1 must be positive and finite");
  if (!(T2 > 0.0) || !std::isfinite(T2)) throw InvalidInput("T2 must be positive and finite");
  for (double rate : {Omega, epsilon, V, F}) {
    if (!std::isfinite(rate)) throw InvalidInput("all rates must be finite");
  }
}

Eigen::VectorXd interaction_diagonal(const SimulationParams& params) {
  params.validate();
  const auto basis = params.basis();
  const auto kernel = params.interaction();
  const int reach = kernel.max_distance(params.L);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dimension()));
  for (int i = 1; i <= params.L; ++i) {
    for (int j = i + 1; j <= std::min(params.L, i + reach); ++j) {
      const double vij = kernel.coupling(i, j);
      const BasisIndex pair = (BasisIndex{1} << (i - 1)) | (BasisIndex{1} << (j - 1));
      for (Eigen::Index b = 0; b < d.size(); ++b) {
        if ((static_cast<BasisIndex>(b) & pair) == pair) d[b] += vij;
      }
    }
  }
  return d;
}

Eigen::VectorXd stark_diagonal(const SimulationParams& params) {
  params.validate();
  const auto basis = params.basis();
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dimension()));
  for (Eigen::Index b = 0; b < d.size(); ++b) {
    long weight = 0;
    for (int j = 1; j <= params.L; ++j) {
      weight += j * BasisConfig::occupation(j, static_cast<BasisIndex>(b));
    }
    d[b] = params.F * static_cast<double>(weight);
  }
  return d;
}

Eigen::MatrixXd build_h1(const SimulationParams& params) {
  params.validate();
  if (params.L > SimulationParams::kMaxDenseSites) {
    throw ResourceError("dense H1 requested for L=" + std::to_string(params.L) +
                        "; the dense guard is L <= " +
                        std::to_string(SimulationParams::kMaxDenseSites));
  }
  const auto n = static_cast<Eigen::Index>(params.basis().dimension());
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n, n);
  h1.diagonal() = interaction_diagonal(params);
  const double flip = params.Omega + params.epsilon;
  for (Eigen::Index b = 0; b < n; ++b) {
    for (int j = 0; j < params.L; ++j) {
      h1(b ^ (Eigen::Index{1} << j), b) = flip;
    }
  }
  return h1;
}

Eigen::VectorXd build_h2_diagonal(const SimulationParams& params) {
  return interaction_diagonal(params) + stark_diagonal(params);
}

StageHamiltonians build_stage_hamiltonians(const SimulationParams& params) {
  return {build_h1(params), build_h2_diagonal(params)};
}

}  // namespace dtc
