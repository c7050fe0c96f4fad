#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace oracle {

namespace {

int bit(std::size_t b, int site) { return static_cast<int>((b >> (site - 1)) & 1u); }

int reach(dtc::KernelRange k, int sites) {
  switch (k) {
    case dtc::KernelRange::NN: return 1;
    case dtc::KernelRange::NNN: return 2;
    case dtc::KernelRange::NNNN: return 3;
    case dtc::KernelRange::ALL: return sites;
  }
  return 0;
}

Eigen::MatrixXd dense_h1(const dtc::SimulationParams& p) {
  const std::size_t dim = std::size_t{1} << p.L;
  Eigen::MatrixXd h = interaction(p).asDiagonal();
  for (std::size_t b = 0; b < dim; ++b) {
    for (int j = 0; j < p.L; ++j) h(b ^ (std::size_t{1} << j), b) += p.Omega + p.epsilon;
  }
  return h;
}

}  // namespace

Eigen::VectorXd interaction(const dtc::SimulationParams& p) {
  const std::size_t dim = std::size_t{1} << p.L;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const int r = reach(p.kernel, p.L);
  for (std::size_t b = 0; b < dim; ++b) {
    for (int i = 1; i <= p.L; ++i) {
      for (int j = i + 1; j <= p.L && j - i <= r; ++j) {
        if (bit(b, i) && bit(b, j)) d[b] += p.V / std::pow(double(j - i), 6);
      }
    }
  }
  return d;
}

Eigen::VectorXd stark(const dtc::SimulationParams& p) {
  const std::size_t dim = std::size_t{1} << p.L;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    for (int j = 1; j <= p.L; ++j) d[b] += p.F * j * bit(b, j);
  }
  return d;
}

Eigen::MatrixXcd trotter_floquet(const dtc::SimulationParams& p, long steps) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << p.L);
  const double period = p.T1 + p.T2;
  const long n1 = std::max(1L, std::lround(static_cast<double>(steps) * p.T1 / period));
  const long n2 = std::max(1L, steps - n1);
  const double dt1 = p.T1 / static_cast<double>(n1);
  const double dt2 = p.T2 / static_cast<double>(n2);

  const Eigen::VectorXd d1 = interaction(p);
  Eigen::VectorXcd half(dim), full(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    half[b] = std::exp(Complex(0, -d1[b] * dt1 / 2));
    full[b] = half[b] * half[b];
  }
  const double a = (p.Omega + p.epsilon) * dt1;
  const double c = std::cos(a);
  const Complex ms(0, -std::sin(a));

  // Rows of m are basis states; columns are the evolved unit vectors.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  auto kick = [&] {
    for (int j = 0; j < p.L; ++j) {
      const Eigen::Index mask = Eigen::Index{1} << j;
      for (Eigen::Index col = 0; col < dim; ++col) {
        Complex* v = m.col(col).data();
        for (Eigen::Index b = 0; b < dim; ++b) {
          if (b & mask) continue;
          const Complex x = v[b];
          const Complex y = v[b | mask];
          v[b] = c * x + ms * y;
          v[b | mask] = ms * x + c * y;
        }
      }
    }
  };
  m = half.asDiagonal() * m;
  for (long s = 0; s < n1; ++s) {
    kick();
    m = (s + 1 < n1 ? full : half).asDiagonal() * m;
  }

  const Eigen::VectorXd d2 = interaction(p) + stark(p);
  Eigen::VectorXcd phase = Eigen::VectorXcd::Ones(dim);
  for (long s = 0; s < n2; ++s) {
    for (Eigen::Index b = 0; b < dim; ++b) phase[b] *= std::exp(Complex(0, -d2[b] * dt2));
  }
  return phase.asDiagonal() * m;
}

Eigen::MatrixXcd expm_floquet(const dtc::SimulationParams& p) {
  const Eigen::MatrixXcd gen = Complex(0, -p.T1) * dense_h1(p).cast<Complex>();
  const Eigen::MatrixXcd u1 = gen.exp();
  const Eigen::VectorXd d2 = interaction(p) + stark(p);
  Eigen::VectorXcd phase(d2.size());
  for (Eigen::Index b = 0; b < d2.size(); ++b) phase[b] = std::exp(Complex(0, -d2[b] * p.T2));
  return phase.asDiagonal() * u1;
}

std::vector<Complex> heisenberg_autocorrelator(const Eigen::MatrixXcd& u,
                                               const Eigen::VectorXcd& psi0, int sites,
                                               int n_cycles) {
  const auto dim = u.rows();
  std::vector<Eigen::MatrixXcd> z(sites);
  for (int j = 1; j <= sites; ++j) {
    Eigen::VectorXcd diag(dim);
    for (Eigen::Index b = 0; b < dim; ++b) diag[b] = bit(static_cast<std::size_t>(b), j) ? 1.0 : -1.0;
    z[j - 1] = diag.asDiagonal();
  }
  std::vector<Complex> out;
  Eigen::MatrixXcd un = Eigen::MatrixXcd::Identity(dim, dim);
  for (int n = 0; n <= n_cycles; ++n) {
    Complex acc = 0;
    for (int j = 0; j < sites; ++j) {
      const Eigen::MatrixXcd zt = un.adjoint() * z[j] * un;
      acc += psi0.dot(z[j] * zt * psi0);
    }
    out.push_back(acc / double(sites));
    un = u * un;
  }
  return out;
}

std::vector<double> naive_dft_magnitudes(const std::vector<double>& c) {
  const std::size_t n_total = c.size() - 1;
  std::vector<double> out(n_total);
  for (std::size_t k = 0; k < n_total; ++k) {
    Complex acc = 0;
    for (std::size_t n = 1; n <= n_total; ++n) {
      acc += c[n] * std::exp(Complex(0, -2.0 * std::numbers::pi * double(k) * double(n) /
                                            double(n_total)));
    }
    out[k] = std::abs(acc) / double(n_total);
  }
  return out;
}

}  // namespace oracle
