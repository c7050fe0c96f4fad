#include "dtc/floquet.hpp"

#include "dtc/errors.hpp"
#include "dtc/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

namespace dtc {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kUnitarityTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;
// Eigenvalues of the Hermitian surrogate closer than this are treated as one
// cluster and re-diagonalized against the unitary itself.
constexpr double kClusterGap = 1e-7;
// Weight of the anti-Hermitian part in the surrogate K = A + c B. Any
// irrational-looking value works; collisions are handled by clustering.
constexpr double kMixing = 0.7548776662466927;

Eigen::VectorXcd unit_phases(const Eigen::VectorXd& angles) {
  Eigen::VectorXcd out(angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) out[i] = std::polar(1.0, -angles[i]);
  return out;
}

// W diag(f(lambda T)) W^T for f = cos and f = sin.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> stage_one_parts(const StageOneFactor& factor,
                                                            double T1) {
  const Eigen::ArrayXd angle = factor.eigenvalues.array() * T1;
  const auto& w = factor.eigenvectors;
  Eigen::MatrixXd scaled = w * angle.cos().matrix().asDiagonal();
  Eigen::MatrixXd c;
  c.noalias() = scaled * w.transpose();
  scaled = w * angle.sin().matrix().asDiagonal();
  Eigen::MatrixXd s;
  s.noalias() = scaled * w.transpose();
  return {std::move(c), std::move(s)};
}

// Given orthonormal columns `basis` that (nearly) diagonalize a unitary U,
// their images `image` = U basis, and the Hermitian-surrogate eigenvalues
// `kappa` (ascending), produce eigenpairs of U. Clusters of near-equal kappa
// may mix distinct eigenvalues of U; each is re-diagonalized by a Schur
// decomposition of the projected operator, which is normal and therefore
// diagonal in its Schur form.
struct Eigenpairs {
  Eigen::VectorXcd values;
  double max_residual = 0.0;
};

Eigenpairs resolve_clusters(const Eigen::VectorXd& kappa, Eigen::MatrixXcd& basis,
                            Eigen::MatrixXcd& image) {
  const Eigen::Index n = kappa.size();
  Eigenpairs out;
  out.values.resize(n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && kappa[stop] - kappa[stop - 1] < kClusterGap) ++stop;
    const Eigen::Index m = stop - start;
    if (m == 1) {
      out.values[start] = basis.col(start).dot(image.col(start));
    } else {
      const Eigen::MatrixXcd projected = basis.middleCols(start, m).adjoint() * image.middleCols(start, m);
      Eigen::ComplexSchur<Eigen::MatrixXcd> schur(projected);
      if (schur.info() != Eigen::Success) {
        throw NumericError("Schur decomposition of a " + std::to_string(m) +
                           "-dimensional eigenvalue cluster did not converge");
      }
      const Eigen::MatrixXcd& z = schur.matrixU();
      basis.middleCols(start, m) = (basis.middleCols(start, m) * z).eval();
      image.middleCols(start, m) = (image.middleCols(start, m) * z).eval();
      out.values.segment(start, m) = schur.matrixT().diagonal();
    }
    start = stop;
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    const double r = (image.col(a) - out.values[a] * basis.col(a)).norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

QuasiSpectrum finish_spectrum(const Eigenpairs& pairs, Eigen::MatrixXcd vectors) {
  if (!(pairs.max_residual < kResidualTolerance)) {
    throw NumericError("quasi-spectrum residual " + std::to_string(pairs.max_residual) +
                       " exceeds " + std::to_string(kResidualTolerance));
  }
  const Eigen::Index n = pairs.values.size();
  Eigen::VectorXd energies(n);
  for (Eigen::Index a = 0; a < n; ++a) energies[a] = fold_quasi_energy(-std::arg(pairs.values[a]));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return energies[a] < energies[b]; });

  QuasiSpectrum out;
  out.max_residual = pairs.max_residual;
  out.quasi_energies.resize(n);
  out.eigenstates.resize(vectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.quasi_energies[k] = energies[src];
    out.eigenstates.col(k) = vectors.col(src);
  }
  return out;
}

// h if m == h sum_j sigma^x_j on a 2^L space, exactly.
std::optional<double> uniform_transverse_field(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n < 2 || (n & (n - 1)) != 0) return std::nullopt;
  const double h = m(1, 0);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const bool flip = std::popcount(static_cast<std::uint64_t>(r ^ c)) == 1;
      if (m(r, c) != (flip ? h : 0.0)) return std::nullopt;
    }
  }
  return h;
}

// Column k is the product of |+> (bit 0) and |-> (bit 1) states, with
// eigenvalue h (L - 2 popcount(k)).
StageOneFactor transverse_field_factor(double h, Eigen::Index n) {
  const int sites = std::countr_zero(static_cast<std::uint64_t>(n));
  const double norm = std::pow(2.0, -0.5 * sites);
  StageOneFactor f;
  f.eigenvectors.resize(n, n);
  f.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto kb = static_cast<std::uint64_t>(k);
    f.eigenvalues[k] = h * (sites - 2 * std::popcount(kb));
    for (Eigen::Index b = 0; b < n; ++b) {
      f.eigenvectors(b, k) = (std::popcount(static_cast<std::uint64_t>(b) & kb) & 1) ? -norm : norm;
    }
  }
  f.uniform_field = h;
  return f;
}

}  // namespace

std::shared_ptr<const StageOneFactor> diagonalize_stage_one(const Eigen::MatrixXd& h1) {
  if (h1.rows() != h1.cols()) throw InvalidInput("H1 must be square");
  const double asym = h1.size() ? (h1 - h1.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (!(asym <= kSymmetryTolerance)) {
    throw InvalidInput("H1 is not symmetric (max |h - h^T| = " + std::to_string(asym) + ")");
  }
  if (const auto h = uniform_transverse_field(h1)) {
    return std::make_shared<const StageOneFactor>(transverse_field_factor(*h, h1.rows()));
  }
  auto eig = linalg::symmetric_eigen(h1);
  return std::make_shared<const StageOneFactor>(
      StageOneFactor{std::move(eig.vectors), std::move(eig.values), std::nullopt});
}

Eigen::MatrixXcd propagator_u1(const StageOneFactor& factor, double T1) {
  auto [c, s] = stage_one_parts(factor, T1);
  Eigen::MatrixXcd u1(c.rows(), c.cols());
  u1.real() = c;
  u1.imag() = -s;
  return u1;
}

Eigen::MatrixXcd propagator_u1(const Eigen::MatrixXd& h1, double T1) {
  return propagator_u1(*diagonalize_stage_one(h1), T1);
}

Eigen::VectorXcd propagator_u2(const Eigen::VectorXd& h2_diagonal, double T2) {
  return unit_phases(h2_diagonal * T2);
}

struct FloquetPropagator::Cache {
  std::once_flag matrix_once;
  Eigen::MatrixXcd matrix;
  std::once_flag spectrum_once;
  QuasiSpectrum spectrum;
};

FloquetPropagator::FloquetPropagator(SimulationParams params,
                                     std::shared_ptr<const StageOneFactor> stage_one)
    : params_(params), stage_one_(std::move(stage_one)), cache_(std::make_shared<Cache>()) {
  params_.validate();
  if (!stage_one_) throw InvalidInput("missing stage-one factorization");
  const auto dim = static_cast<Eigen::Index>(params_.basis().dimension());
  if (stage_one_->eigenvectors.rows() != dim || stage_one_->eigenvalues.size() != dim) {
    throw InvalidInput("stage-one factorization has the wrong dimension for L=" +
                       std::to_string(params_.L));
  }
  stage_one_phases_ = unit_phases(stage_one_->eigenvalues * params_.T1);
  stage_two_angles_ = build_h2_diagonal(params_) * params_.T2;
  stage_two_phases_ = unit_phases(stage_two_angles_);
}

void FloquetPropagator::apply_stage_one(Eigen::MatrixXcd& states) const {
  const Eigen::Index n = dimension();
  const Eigen::Index k = states.cols();
  if (states.rows() != n) throw InvalidInput("state block has the wrong dimension");
  if (stage_one_->uniform_field) {
    // exp(-i theta sigma^x) on each site.
    const double theta = *stage_one_->uniform_field * params_.T1;
    const double c = std::cos(theta);
    const Complex s{0.0, -std::sin(theta)};
    for (Eigen::Index bit = 1; bit < n; bit <<= 1) {
      for (Eigen::Index b = 0; b < n; ++b) {
        if (b & bit) continue;
        for (Eigen::Index col = 0; col < k; ++col) {
          const Complex x0 = states(b, col);
          const Complex x1 = states(b | bit, col);
          states(b, col) = c * x0 + s * x1;
          states(b | bit, col) = s * x0 + c * x1;
        }
      }
    }
    return;
  }
  const auto& w = stage_one_->eigenvectors;

  Eigen::MatrixXd stacked(n, 2 * k);
  stacked.leftCols(k) = states.real();
  stacked.rightCols(k) = states.imag();
  Eigen::MatrixXd rotated;
  rotated.noalias() = w.transpose() * stacked;
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const Complex z = Complex{rotated(r, c), rotated(r, c + k)} * stage_one_phases_[r];
      rotated(r, c) = z.real();
      rotated(r, c + k) = z.imag();
    }
  }
  stacked.noalias() = w * rotated;
  states.real() = stacked.leftCols(k);
  states.imag() = stacked.rightCols(k);
}

void FloquetPropagator::apply_stage_two(Eigen::MatrixXcd& states) const {
  if (states.rows() != dimension()) throw InvalidInput("state block has the wrong dimension");
  states = stage_two_phases_.asDiagonal() * states;
}

void FloquetPropagator::apply(Eigen::MatrixXcd& states) const {
  apply_stage_one(states);
  apply_stage_two(states);
}

const Eigen::MatrixXcd& FloquetPropagator::matrix() const {
  std::call_once(cache_->matrix_once, [this] {
    Eigen::MatrixXcd u = propagator_u1(*stage_one_, params_.T1);
    u = stage_two_phases_.asDiagonal() * u;
    const double defect = linalg::unitarity_defect(u);
    if (!(defect < kUnitarityTolerance)) {
      throw NumericError("U_F unitarity defect " + std::to_string(defect));
    }
    cache_->matrix = std::move(u);
  });
  return cache_->matrix;
}

const QuasiSpectrum& FloquetPropagator::spectrum() const {
  std::call_once(cache_->spectrum_once, [this] { cache_->spectrum = quasi_spectrum(*this); });
  return cache_->spectrum;
}

FloquetPropagator floquet_operator(const SimulationParams& params) {
  params.validate();
  return FloquetPropagator(params, diagonalize_stage_one(build_h1(params)));
}

FloquetPropagator floquet_operator(const SimulationParams& params,
                                   std::shared_ptr<const StageOneFactor> stage_one) {
  return FloquetPropagator(params, std::move(stage_one));
}

double fold_quasi_energy(double angle) {
  constexpr double pi = std::numbers::pi;
  double folded = std::remainder(angle, 2.0 * pi);  // [-pi, pi]
  if (folded <= -pi) folded += 2.0 * pi;
  return folded;
}

double circular_distance(double a, double b) {
  constexpr double pi = std::numbers::pi;
  const double d = std::abs(std::remainder(a - b, 2.0 * pi));
  return std::min(d, 2.0 * pi - d);
}

// U_F = D U1 with D = diag(e^{-i theta}) and U1 = C - iS complex symmetric.
// S' = D^{1/2} U1 D^{1/2} is similar to U_F through a diagonal unitary, is
// itself complex symmetric and unitary, so X = Re S' and Y = Im S' are real
// symmetric and commute. Their common orthonormal eigenbasis comes from one
// real symmetric eigensolve of X + cY.
QuasiSpectrum quasi_spectrum(const FloquetPropagator& prop) {
  const Eigen::Index n = prop.dimension();
  const Eigen::VectorXd& theta = prop.stage_two_angles();

  Eigen::VectorXcd half(n);
  for (Eigen::Index a = 0; a < n; ++a) half[a] = std::polar(1.0, -0.5 * theta[a]);

  auto [x, y] = stage_one_parts(prop.stage_one(), prop.params().T1);  // C, S for now
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const Complex rot = half[a] * half[b];  // e^{-i (theta_a + theta_b)/2}
      const double cp = rot.real();
      const double sp = -rot.imag();
      const double c = x(a, b);
      const double s = y(a, b);
      x(a, b) = cp * c - sp * s;
      y(a, b) = -sp * c - cp * s;
    }
  }

  auto eig = linalg::symmetric_eigen(x + kMixing * y);
  Eigen::MatrixXcd image(n, n);
  {
    Eigen::MatrixXd tmp;
    tmp.noalias() = x * eig.vectors;
    image.real() = tmp;
    tmp.noalias() = y * eig.vectors;
    image.imag() = tmp;
  }
  x.resize(0, 0);
  y.resize(0, 0);
  Eigen::MatrixXcd basis = eig.vectors.cast<Complex>();
  eig.vectors.resize(0, 0);

  const Eigenpairs pairs = resolve_clusters(eig.values, basis, image);
  image.resize(0, 0);

  // Undo the similarity: eigenvectors of U_F are D^{1/2} times those of S'.
  basis = half.asDiagonal() * basis;
  return finish_spectrum(pairs, std::move(basis));
}

// A = (U + U^H)/2 and B = (U - U^H)/2i are commuting Hermitian matrices
// sharing U's eigenvectors; eigenvalues of A + cB are cos E - c sin E.
QuasiSpectrum quasi_spectrum(const Eigen::MatrixXcd& unitary) {
  if (unitary.rows() != unitary.cols() || unitary.rows() == 0) {
    throw InvalidInput("quasi_spectrum needs a non-empty square matrix");
  }
  const double defect = linalg::unitarity_defect(unitary);
  if (!(defect < kUnitarityTolerance)) {
    throw InvalidInput("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  const Eigen::MatrixXcd adj = unitary.adjoint();
  const Complex mix{0.0, -0.5 * kMixing};  // c/(2i)
  Eigen::MatrixXcd k = 0.5 * (unitary + adj) + mix * (unitary - adj);
  k = (0.5 * (k + k.adjoint())).eval();
  auto eig = linalg::hermitian_eigen(std::move(k));
  Eigen::MatrixXcd image;
  image.noalias() = unitary * eig.vectors;
  const Eigenpairs pairs = resolve_clusters(eig.values, eig.vectors, image);
  return finish_spectrum(pairs, std::move(eig.vectors));
}

OverlapTable overlaps(const QuasiSpectrum& spectrum, const StateVector& psi0) {
  if (spectrum.eigenstates.rows() != static_cast<Eigen::Index>(psi0.dimension())) {
    throw InvalidInput("initial state dimension " + std::to_string(psi0.dimension()) +
                       " does not match spectrum dimension " +
                       std::to_string(spectrum.eigenstates.rows()));
  }
  const Eigen::VectorXcd amps = spectrum.eigenstates.adjoint() * psi0.amplitudes();
  OverlapTable table;
  table.entries.reserve(static_cast<std::size_t>(amps.size()));
  double total = 0.0;
  for (Eigen::Index a = 0; a < amps.size(); ++a) {
    const double o = std::norm(amps[a]);
    total += o;
    table.entries.push_back({spectrum.quasi_energies[a], o});
  }
  if (!(std::abs(total - 1.0) < 1e-8)) {
    throw NumericError("overlaps sum to " + std::to_string(total) + " instead of 1");
  }
  return table;
}

std::optional<PiPair> find_pi_pair(const OverlapTable& table, double tol) {
  if (table.entries.size() < 2) throw InvalidInput("pi-pair search needs at least two entries");
  if (!(tol > 0.0)) throw InvalidInput("pi-pair tolerance must be positive");
  std::size_t best = 0;
  std::size_t second = 1;
  if (table.entries[second].overlap > table.entries[best].overlap) std::swap(best, second);
  for (std::size_t i = 2; i < table.entries.size(); ++i) {
    const double o = table.entries[i].overlap;
    if (o > table.entries[best].overlap) {
      second = best;
      best = i;
    } else if (o > table.entries[second].overlap) {
      second = i;
    }
  }
  const double gap =
      circular_distance(table.entries[best].quasi_energy, table.entries[second].quasi_energy);
  if (std::abs(gap - std::numbers::pi) > tol) return std::nullopt;
  return PiPair{best, second, gap,
                table.entries[best].overlap + table.entries[second].overlap};
}

}  // namespace dtc
