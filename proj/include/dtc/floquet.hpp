#pragma once

// One-period propagator U_F = U2 U1 with U1 = exp(-i H1 T1) and the diagonal
// U2 = exp(-i H2 T2), its quasi-energy spectrum and initial-state overlaps.

#include "dtc/hamiltonian.hpp"
#include "dtc/hilbert.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

namespace dtc {

/// H1 = W diag(lambda) W^T. W is real orthogonal because H1 is real symmetric.
struct StageOneFactor {
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd eigenvalues;
  /// Set when H1 = h sum_j sigma^x_j (no interaction); U1 then factorizes
  /// into single-site rotations and is applied site by site.
  std::optional<double> uniform_field;
};

/// Throws InvalidInput if h1 is not symmetric within 1e-12. A pure transverse
/// field is factorized in closed form (Walsh-Hadamard eigenvectors).
std::shared_ptr<const StageOneFactor> diagonalize_stage_one(const Eigen::MatrixXd& h1);

Eigen::MatrixXcd propagator_u1(const StageOneFactor& factor, double T1);
Eigen::MatrixXcd propagator_u1(const Eigen::MatrixXd& h1, double T1);
/// exp(-i d[b] T2) per basis state; U2 is never densified.
Eigen::VectorXcd propagator_u2(const Eigen::VectorXd& h2_diagonal, double T2);

struct QuasiSpectrum {
  Eigen::VectorXd quasi_energies;  // ascending, in (-pi, pi]
  Eigen::MatrixXcd eigenstates;    // column alpha pairs with quasi_energies[alpha]
  double max_residual = 0.0;       // max_alpha |U v - e^{-iE} v|
};

class FloquetPropagator {
 public:
  FloquetPropagator(SimulationParams params, std::shared_ptr<const StageOneFactor> stage_one);

  const SimulationParams& params() const noexcept { return params_; }
  Eigen::Index dimension() const noexcept { return stage_one_phases_.size(); }
  const StageOneFactor& stage_one() const noexcept { return *stage_one_; }
  const Eigen::VectorXcd& stage_one_phases() const noexcept { return stage_one_phases_; }
  /// H2 T2 per basis state; U2 = exp(-i angle).
  const Eigen::VectorXd& stage_two_angles() const noexcept { return stage_two_angles_; }
  const Eigen::VectorXcd& stage_two_phases() const noexcept { return stage_two_phases_; }

  /// states <- U_F states, column by column.
  void apply(Eigen::MatrixXcd& states) const;
  void apply_stage_one(Eigen::MatrixXcd& states) const;
  void apply_stage_two(Eigen::MatrixXcd& states) const;

  /// Dense U_F, built on first use and then shared by all copies.
  const Eigen::MatrixXcd& matrix() const;
  /// Quasi-spectrum, computed on first use and then shared by all copies.
  const QuasiSpectrum& spectrum() const;

 private:
  struct Cache;

  SimulationParams params_;
  std::shared_ptr<const StageOneFactor> stage_one_;
  Eigen::VectorXcd stage_one_phases_;
  Eigen::VectorXd stage_two_angles_;
  Eigen::VectorXcd stage_two_phases_;
  std::shared_ptr<Cache> cache_;
};

FloquetPropagator floquet_operator(const SimulationParams& params);
/// Reuses an H1 factorization; params must produce the same H1.
FloquetPropagator floquet_operator(const SimulationParams& params,
                                   std::shared_ptr<const StageOneFactor> stage_one);

/// Fold an angle into (-pi, pi].
double fold_quasi_energy(double angle);
/// min(|a-b|, 2pi-|a-b|) for angles given mod 2pi.
double circular_distance(double a, double b);

/// Structured route: uses the real factorization held by the propagator.
QuasiSpectrum quasi_spectrum(const FloquetPropagator& prop);
/// General route for any unitary matrix.
QuasiSpectrum quasi_spectrum(const Eigen::MatrixXcd& unitary);

struct OverlapEntry {
  double quasi_energy;
  double overlap;
};

struct OverlapTable {
  std::vector<OverlapEntry> entries;  // ascending quasi-energy
};

OverlapTable overlaps(const QuasiSpectrum& spectrum, const StateVector& psi0);

struct PiPair {
  std::size_t first;   // index of the largest overlap
  std::size_t second;  // index of the runner-up
  double gap;          // circular quasi-energy distance
  double mass;         // combined overlap
};

inline constexpr double kDefaultPiPairTolerance = 0.05;

/// The two largest-overlap entries, if their circular gap is within tol of pi.
std::optional<PiPair> find_pi_pair(const OverlapTable& table,
                                   double tol = kDefaultPiPairTolerance);

}  // namespace dtc
