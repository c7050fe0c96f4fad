#pragma once

// Thin wrappers over LAPACK's divide-and-conquer symmetric eigensolvers.

#include <Eigen/Dense>

namespace dtc::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

/// Only the upper triangle of `m` is read. Throws NumericError on failure.
SymmetricEigen symmetric_eigen(Eigen::MatrixXd m);
HermitianEigen hermitian_eigen(Eigen::MatrixXcd m);

/// max_ij |(M^dagger M - I)_ij|
double unitarity_defect(const Eigen::MatrixXcd& m);

/// Reconstruction error of a 160x160 random symmetric eigensolve. Some
/// OpenBLAS 0.3.x builds pick a faulty kernel set on newer Xeons and return
/// garbage here while small problems still pass.
double backend_probe_error();

/// For program entry points. If the probe fails and OPENBLAS_CORETYPE is not
/// set, re-executes the program with a known-good core type; if it is already
/// set, throws NumericError.
void ensure_sound_backend(char** argv);

}  // namespace dtc::linalg
