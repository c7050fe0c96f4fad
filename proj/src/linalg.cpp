#include "dtc/linalg.hpp"

#include "dtc/errors.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include <unistd.h>

namespace dtc::linalg {

namespace {

template <typename Matrix>
std::string diagnostics(const char* routine, lapack_int info, const Matrix& original) {
  std::ostringstream msg;
  msg << routine << " failed (info=" << info << ") on a " << original.rows() << "x"
      << original.cols() << " matrix; max|a_ij|=" << original.cwiseAbs().maxCoeff()
      << ", max|a - a^H|=" << (original - original.adjoint()).cwiseAbs().maxCoeff();
  return msg.str();
}

template <typename Matrix>
void require_square(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("eigensolver needs a square matrix");
}

}  // namespace

SymmetricEigen symmetric_eigen(Eigen::MatrixXd m) {
  require_square(m);
  SymmetricEigen out;
  const auto n = static_cast<lapack_int>(m.rows());
  out.values.resize(n);
  if (n == 0) return out;
  const Eigen::MatrixXd original = n <= 64 ? m : Eigen::MatrixXd{};
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, m.data(), n, out.values.data());
  if (info != 0) {
    throw NumericError(original.size() ? diagnostics("dsyevd", info, original)
                                       : "dsyevd failed (info=" + std::to_string(info) + ")");
  }
  out.vectors = std::move(m);
  return out;
}

HermitianEigen hermitian_eigen(Eigen::MatrixXcd m) {
  require_square(m);
  HermitianEigen out;
  const auto n = static_cast<lapack_int>(m.rows());
  out.values.resize(n);
  if (n == 0) return out;
  const Eigen::MatrixXcd original = n <= 64 ? m : Eigen::MatrixXcd{};
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                     m.data(), n, out.values.data());
  if (info != 0) {
    throw NumericError(original.size() ? diagnostics("zheevd", info, original)
                                       : "zheevd failed (info=" + std::to_string(info) + ")");
  }
  out.vectors = std::move(m);
  return out;
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  return (gram - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

double backend_probe_error() {
  constexpr int n = 160;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) a(i, j) = a(j, i) = dist(rng);
  }
  const auto eig = symmetric_eigen(a);
  const Eigen::MatrixXd back = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  return (back - a).cwiseAbs().maxCoeff();
}

void ensure_sound_backend(char** argv) {
  constexpr double kProbeTolerance = 1e-10;
  const double err = backend_probe_error();
  if (err < kProbeTolerance) return;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr) {
    throw NumericError("LAPACK backend fails its self-check (error " + std::to_string(err) +
                       ") even with OPENBLAS_CORETYPE set");
  }
  setenv("OPENBLAS_CORETYPE", __builtin_cpu_supports("avx512f") ? "SkylakeX" : "Haswell", 1);
  execv("/proc/self/exe", argv);
  throw NumericError("LAPACK backend fails its self-check and re-exec failed");
}

}  // namespace dtc::linalg
