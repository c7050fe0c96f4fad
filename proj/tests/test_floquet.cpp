#include "dtc/errors.hpp"
#include "dtc/floquet.hpp"
#include "dtc/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

using namespace dtc;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

SimulationParams perfect(int sites) {
  SimulationParams p;
  p.L = sites;
  p.Omega = kPi / 2;
  return p;
}

SimulationParams random_params(std::mt19937_64& rng, int max_sites) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SimulationParams p;
  p.L = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_sites));
  p.Omega = 0.5 + 1.5 * u(rng);
  p.epsilon = -0.3 + 0.6 * u(rng);
  p.V = 0.5 * u(rng);
  p.F = 0.1 * u(rng);
  p.T1 = 0.5 + u(rng);
  p.T2 = 1.0 + 9.0 * u(rng);
  p.kernel = static_cast<KernelRange>(rng() % 4);
  return p;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::VectorXcd random_state(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v.normalized();
}

}  // namespace

TEST(U1, SingleSitePerfectFlip) {
  Eigen::Matrix2cd expected;
  expected << 0, -I, -I, 0;
  EXPECT_LT(max_abs(propagator_u1(build_h1(perfect(1)), 1.0) - expected), 1e-15);
}

TEST(U1, ZeroHamiltonianIsIdentity) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(8, 8);
  EXPECT_LT(max_abs(propagator_u1(zero, 1.3) - Eigen::MatrixXcd::Identity(8, 8)), 1e-15);
}

TEST(U1, UnitaryForRandomH1) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_params(rng, 8);
    EXPECT_LT(linalg::unitarity_defect(propagator_u1(build_h1(p), p.T1)), 1e-10);
  }
}

TEST(U1, TransverseFieldFactorMatchesGeneralSolver) {
  std::mt19937_64 rng(21);
  for (int sites = 1; sites <= 7; ++sites) {
    auto p = perfect(sites);
    p.epsilon = 0.13;
    const auto h1 = build_h1(p);
    const auto factor = diagonalize_stage_one(h1);
    ASSERT_TRUE(factor->uniform_field.has_value());
    const auto& w = factor->eigenvectors;
    EXPECT_LT((w * factor->eigenvalues.asDiagonal() * w.transpose() - h1).cwiseAbs().maxCoeff(),
              1e-13);
    EXPECT_LT((w.transpose() * w - Eigen::MatrixXd::Identity(w.rows(), w.cols()))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-13);

    // Site-by-site application against U1 from the general eigensolver.
    auto eig = linalg::symmetric_eigen(h1);
    const StageOneFactor general{std::move(eig.vectors), std::move(eig.values), std::nullopt};
    const Eigen::MatrixXcd u1 = propagator_u1(general, p.T1);
    Eigen::MatrixXcd block(u1.rows(), 2);
    block.col(0) = random_state(rng, u1.rows());
    block.col(1) = random_state(rng, u1.rows());
    const Eigen::MatrixXcd expected = u1 * block;
    floquet_operator(p).apply_stage_one(block);
    EXPECT_LT(max_abs(block - expected), 1e-12);
  }
  auto interacting = perfect(4);
  interacting.V = 0.1;
  EXPECT_FALSE(diagonalize_stage_one(build_h1(interacting))->uniform_field.has_value());
}

TEST(U1, RejectsAsymmetricInput) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(diagonalize_stage_one(h), InvalidInput);
}

TEST(U2, Examples) {
  EXPECT_EQ(propagator_u2(Eigen::VectorXd::Zero(4), 10.0), Eigen::VectorXcd::Ones(4));
  Eigen::VectorXd d(1);
  d << 0.175;
  EXPECT_LT(std::abs(propagator_u2(d, 10.0)[0] - std::exp(-1.75 * I)), 1e-15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  Eigen::VectorXd big(256);
  for (auto& x : big) x = u(rng);
  EXPECT_LT((propagator_u2(big, 10.0).cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-14);
}

TEST(FloquetOperator, SingleSiteClosedForms) {
  Eigen::Matrix2cd flip;
  flip << 0, -I, -I, 0;
  EXPECT_LT(max_abs(floquet_operator(perfect(1)).matrix() - flip), 1e-15);

  auto p = perfect(1);
  p.F = 0.1;
  Eigen::Matrix2cd expected;
  expected << 0, -I, -I * std::exp(-I), 0;
  EXPECT_LT(max_abs(floquet_operator(p).matrix() - expected), 1e-14);
}

TEST(FloquetOperator, FlipOffIsDiagonal) {
  auto p = perfect(5);
  p.epsilon = -p.Omega;
  p.V = 0.2;
  p.F = 0.03;
  const auto& u = floquet_operator(p).matrix();
  Eigen::MatrixXcd diag = u.diagonal().asDiagonal();
  EXPECT_LT(max_abs(u - diag), 1e-15);
}

TEST(FloquetOperator, MatchesMatrixExponentialOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 12; ++t) {
    const auto p = random_params(rng, 6);
    const auto prop = floquet_operator(p);
    EXPECT_LT(linalg::unitarity_defect(prop.matrix()), 1e-10);
    EXPECT_LT(max_abs(prop.matrix() - oracle::expm_floquet(p)), 1e-10) << "L=" << p.L;
  }
}

TEST(FloquetOperator, MatchesTrotterOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 3; ++t) {
    const auto p = random_params(rng, 4);
    EXPECT_LT(max_abs(floquet_operator(p).matrix() - oracle::trotter_floquet(p)), 1e-6);
  }
}

TEST(FloquetOperator, ApplyAgreesWithDenseMatrix) {
  std::mt19937_64 rng(2);
  SimulationParams p = perfect(7);
  p.epsilon = 0.2;
  p.V = 0.1;
  p.F = 0.03;
  const auto prop = floquet_operator(p);
  Eigen::MatrixXcd states(128, 50);
  for (int c = 0; c < 50; ++c) states.col(c) = random_state(rng, 128);
  const Eigen::MatrixXcd expected = prop.matrix() * states;
  Eigen::MatrixXcd staged = states;
  prop.apply_stage_one(staged);
  prop.apply_stage_two(staged);
  EXPECT_LT(max_abs(staged - expected), 1e-10);
  prop.apply(states);
  EXPECT_LT(max_abs(states - expected), 1e-10);
}

TEST(FloquetOperator, SharedStageOneFactor) {
  auto p = perfect(6);
  p.epsilon = 0.1;
  p.V = 0.1;
  const auto factor = diagonalize_stage_one(build_h1(p));
  p.F = 0.04;
  EXPECT_LT(max_abs(floquet_operator(p, factor).matrix() - floquet_operator(p).matrix()), 1e-13);
  p.L = 5;
  EXPECT_THROW(floquet_operator(p, factor), InvalidInput);
}

TEST(Fold, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(fold_quasi_energy(kPi), kPi);
  EXPECT_DOUBLE_EQ(fold_quasi_energy(-kPi), kPi);
  EXPECT_NEAR(fold_quasi_energy(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(fold_quasi_energy(-7.0), -7.0 + 2 * kPi, 1e-15);
  for (double a = -20; a < 20; a += 0.01) {
    const double f = fold_quasi_energy(a);
    EXPECT_GT(f, -kPi);
    EXPECT_LE(f, kPi);
  }
  EXPECT_NEAR(circular_distance(kPi - 0.1, -kPi + 0.1), 0.2, 1e-15);
}

TEST(QuasiSpectrum, Identity) {
  const auto s = quasi_spectrum(Eigen::MatrixXcd::Identity(8, 8));
  EXPECT_LT(s.quasi_energies.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(QuasiSpectrum, SingleFlipHasPiGap) {
  const auto prop = floquet_operator(perfect(1));
  const auto& s = prop.spectrum();
  ASSERT_EQ(s.quasi_energies.size(), 2);
  EXPECT_NEAR(s.quasi_energies[0], -kPi / 2, 1e-14);
  EXPECT_NEAR(s.quasi_energies[1], kPi / 2, 1e-14);

  const auto table = overlaps(s, z_product_state("1", BasisConfig(1)));
  EXPECT_NEAR(table.entries[0].overlap, 0.5, 1e-14);
  EXPECT_NEAR(table.entries[1].overlap, 0.5, 1e-14);
  const auto pair = find_pi_pair(table, 0.05);
  ASSERT_TRUE(pair.has_value());
  EXPECT_NEAR(pair->gap, kPi, 1e-14);
  EXPECT_NEAR(pair->mass, 1.0, 1e-14);
}

// Both routes, on generic and on heavily degenerate propagators.
TEST(QuasiSpectrum, ResidualOrthonormalityAndRouteAgreement) {
  std::mt19937_64 rng(4);
  std::vector<SimulationParams> cases;
  for (int t = 0; t < 6; ++t) cases.push_back(random_params(rng, 7));
  cases.push_back(perfect(6));  // U_F = (-i)^L X^{(x)L}: two eigenvalues
  auto stark_echo = perfect(6);
  stark_echo.F = 0.05;
  cases.push_back(stark_echo);
  auto flip_off = perfect(5);
  flip_off.epsilon = -flip_off.Omega;
  cases.push_back(flip_off);

  for (const auto& p : cases) {
    const auto prop = floquet_operator(p);
    const auto& u = prop.matrix();
    const auto general = quasi_spectrum(u);
    for (const QuasiSpectrum* s : {&prop.spectrum(), &general}) {
      const auto& v = s->eigenstates;
      const auto dim = v.cols();
      EXPECT_LT(max_abs(v.adjoint() * v - Eigen::MatrixXcd::Identity(dim, dim)), 1e-8);
      Eigen::VectorXcd lambda(dim);
      for (Eigen::Index a = 0; a < dim; ++a) lambda[a] = std::exp(-I * s->quasi_energies[a]);
      EXPECT_LT(max_abs(u * v - v * lambda.asDiagonal()), 1e-8);
      EXPECT_LT(s->max_residual, 1e-8);
      EXPECT_TRUE(std::is_sorted(s->quasi_energies.begin(), s->quasi_energies.end()));
      EXPECT_GT(s->quasi_energies.minCoeff(), -kPi);
      EXPECT_LE(s->quasi_energies.maxCoeff(), kPi);
    }
    // Same multiset on the circle; degenerate values at the branch cut may
    // land on either end of (-pi, pi].
    const auto near = [](const Eigen::VectorXd& e, double x) {
      return std::count_if(e.begin(), e.end(),
                           [x](double y) { return circular_distance(x, y) < 1e-9; });
    };
    for (double x : general.quasi_energies) {
      EXPECT_EQ(near(general.quasi_energies, x), near(prop.spectrum().quasi_energies, x));
    }
  }
}

TEST(QuasiSpectrum, RejectsNonUnitary) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(0, 1) = 0.1;
  EXPECT_THROW(quasi_spectrum(m), InvalidInput);
}

TEST(Overlaps, CompletenessAndEigenvectorInput) {
  std::mt19937_64 rng(9);
  auto p = perfect(6);
  p.epsilon = 0.25;
  p.V = 0.1;
  p.F = 0.03;
  const auto prop = floquet_operator(p);
  const auto& s = prop.spectrum();
  const auto table = overlaps(s, StateVector(BasisConfig(6), random_state(rng, 64)));
  double sum = 0;
  for (const auto& e : table.entries) {
    EXPECT_GE(e.overlap, 0.0);
    EXPECT_LE(e.overlap, 1.0 + 1e-12);
    sum += e.overlap;
  }
  EXPECT_NEAR(sum, 1.0, 1e-8);

  const auto eigen_input =
      overlaps(s, StateVector(BasisConfig(6), s.eigenstates.col(17).normalized()));
  EXPECT_NEAR(eigen_input.entries[17].overlap, 1.0, 1e-10);
  int big = 0;
  for (const auto& e : eigen_input.entries) big += e.overlap > 1e-10;
  EXPECT_EQ(big, 1);

  EXPECT_THROW(overlaps(s, z_product_state("11111", BasisConfig(5))), InvalidInput);
}

TEST(PiPair, RejectsZeroGapAndBadInput) {
  OverlapTable t{{{0.1, 0.45}, {0.1001, 0.45}, {2.0, 0.1}}};
  EXPECT_FALSE(find_pi_pair(t).has_value());
  OverlapTable one{{{0.0, 1.0}}};
  EXPECT_THROW(find_pi_pair(one), InvalidInput);
  EXPECT_THROW(find_pi_pair(t, 0.0), InvalidInput);
}

TEST(PiPair, PicksTopTwoAcrossTheBranchCut) {
  OverlapTable t{{{-kPi / 2 - 0.01, 0.4}, {0.3, 0.1}, {kPi / 2 + 0.01, 0.5}}};
  const auto pair = find_pi_pair(t, 0.05);
  ASSERT_TRUE(pair.has_value());
  EXPECT_EQ(pair->first, 2u);
  EXPECT_EQ(pair->second, 0u);
  EXPECT_NEAR(pair->gap, kPi - 0.02, 1e-14);
  EXPECT_NEAR(pair->mass, 0.9, 1e-15);
  EXPECT_FALSE(find_pi_pair(t, 0.01).has_value());
}
