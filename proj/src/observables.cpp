#include "dtc/observables.hpp"

#include "dtc/errors.hpp"

#include <cmath>
#include <numbers>

namespace dtc {

namespace {

constexpr double kNormDrift = 1e-8;
constexpr double kRealTolerance = 1e-10;
constexpr double kBoundSlack = 1e-9;

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

struct CorrelatorStream::Impl {
  FloquetPropagator prop;
  CorrelatorPath path;
  EvolutionMethod method;
  int sites;
  bool product_input;

  // Columns: psi for the product path; psi, sigma^z_1 psi0, ..., sigma^z_L psi0
  // (each evolved) for the general path.
  Eigen::MatrixXcd block;
  Eigen::VectorXd weights;  // product path: sum_j s_j sigma^z_j(b)
  Eigen::MatrixXd zdiag;    // general path: sigma^z_j(b) in column j-1

  // Spectral powering: block(n) = V diag(e^{-i E n}) coefficients.
  Eigen::MatrixXcd coefficients;

  long n = 0;
  double value = 0.0;
  double max_imaginary = 0.0;

  Impl(const FloquetPropagator& p, const StateVector& psi0, CorrelatorPath requested,
       EvolutionMethod m)
      : prop(p), path(requested), method(m), sites(p.params().L) {
    if (psi0.basis() != p.params().basis()) {
      throw InvalidInput("initial state has L=" + std::to_string(psi0.basis().sites()) +
                         " but the propagator has L=" + std::to_string(sites));
    }
    if (method == EvolutionMethod::Automatic) method = EvolutionMethod::MatrixVector;
    const auto index = psi0.basis_index();
    product_input = index.has_value();
    if (path == CorrelatorPath::Automatic) {
      path = product_input ? CorrelatorPath::ProductState : CorrelatorPath::General;
    }
    if (path == CorrelatorPath::ProductState && !product_input) {
      throw InvalidInput("product-state correlator path needs a z-basis initial state");
    }

    const auto basis = psi0.basis();
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.dimension());
    if (path == CorrelatorPath::ProductState) {
      weights = Eigen::VectorXd::Zero(dim);
      for (int j = 1; j <= sites; ++j) {
        const double s = 2.0 * BasisConfig::occupation(j, *index) - 1.0;
        weights += s * sigma_z_diagonal(j, basis);
      }
      block = psi0.amplitudes();
    } else {
      zdiag.resize(dim, sites);
      block.resize(dim, sites + 1);
      block.col(0) = psi0.amplitudes();
      for (int j = 1; j <= sites; ++j) {
        zdiag.col(j - 1) = sigma_z_diagonal(j, basis);
        block.col(j) = zdiag.col(j - 1).cast<Complex>().cwiseProduct(psi0.amplitudes());
      }
    }
    if (method == EvolutionMethod::SpectralPowering) {
      coefficients = prop.spectrum().eigenstates.adjoint() * block;
    }
    evaluate();
    if (!(std::abs(value - 1.0) < kRealTolerance)) {
      throw NumericError("C[0] = " + std::to_string(value) + " differs from 1");
    }
  }

  void evaluate() {
    if (path == CorrelatorPath::ProductState) {
      value = block.col(0).cwiseAbs2().dot(weights) / sites;
    } else {
      Complex acc{0.0, 0.0};
      for (int j = 0; j < sites; ++j) {
        acc += block.col(j + 1).dot(zdiag.col(j).cast<Complex>().cwiseProduct(block.col(0)));
      }
      acc /= static_cast<double>(sites);
      const double imag = std::abs(acc.imag());
      if (product_input && !(imag <= kRealTolerance)) {
        throw NumericError("autocorrelator has imaginary part " + std::to_string(imag) +
                           " at cycle " + std::to_string(n));
      }
      max_imaginary = std::max(max_imaginary, imag);
      value = acc.real();
    }
    if (!(std::abs(value) <= 1.0 + kBoundSlack)) {
      throw NumericError("|C| = " + std::to_string(std::abs(value)) + " exceeds 1 at cycle " +
                         std::to_string(n));
    }
  }

  void advance() {
    ++n;
    if (method == EvolutionMethod::SpectralPowering) {
      const auto& spectrum = prop.spectrum();
      Eigen::VectorXcd phase(spectrum.quasi_energies.size());
      for (Eigen::Index a = 0; a < phase.size(); ++a) {
        phase[a] = std::polar(1.0, -spectrum.quasi_energies[a] * static_cast<double>(n));
      }
      block.noalias() = spectrum.eigenstates * (phase.asDiagonal() * coefficients);
    } else {
      prop.apply(block);
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        const double drift = std::abs(block.col(c).norm() - 1.0);
        if (!(drift <= kNormDrift)) {
          throw NumericError("state norm drifted by " + std::to_string(drift) + " at cycle " +
                             std::to_string(n));
        }
      }
    }
    evaluate();
  }
};

CorrelatorStream::CorrelatorStream(const FloquetPropagator& prop, const StateVector& psi0,
                                   CorrelatorPath path, EvolutionMethod method)
    : impl_(std::make_unique<Impl>(prop, psi0, path, method)) {}
CorrelatorStream::~CorrelatorStream() = default;
CorrelatorStream::CorrelatorStream(CorrelatorStream&&) noexcept = default;
CorrelatorStream& CorrelatorStream::operator=(CorrelatorStream&&) noexcept = default;

long CorrelatorStream::cycle() const noexcept { return impl_->n; }
double CorrelatorStream::value() const noexcept { return impl_->value; }
double CorrelatorStream::max_imaginary() const noexcept { return impl_->max_imaginary; }
CorrelatorPath CorrelatorStream::path() const noexcept { return impl_->path; }
void CorrelatorStream::advance() { impl_->advance(); }

std::string_view to_string(EvolutionMethod m) {
  switch (m) {
    case EvolutionMethod::Automatic: return "auto";
    case EvolutionMethod::MatrixVector: return "matvec";
    case EvolutionMethod::SpectralPowering: return "spectral";
  }
  return "?";
}

EvolutionMethod parse_method(std::string_view name) {
  for (auto m : {EvolutionMethod::Automatic, EvolutionMethod::MatrixVector,
                 EvolutionMethod::SpectralPowering}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown evolution method '" + std::string(name) + "'");
}

AutocorrelatorSeries autocorrelator_series(const FloquetPropagator& prop, const StateVector& psi0,
                                           int n_cycles, CorrelatorPath path,
                                           EvolutionMethod method,
                                           std::string initial_state_label) {
  if (n_cycles < 1) throw InvalidInput("cycle count must be >= 1");
  if (method == EvolutionMethod::Automatic) {
    method = n_cycles > kSpectralThreshold ? EvolutionMethod::SpectralPowering
                                           : EvolutionMethod::MatrixVector;
  }
  CorrelatorStream stream(prop, psi0, path, method);
  AutocorrelatorSeries series;
  series.n_cycles = n_cycles;
  series.params = prop.params();
  series.initial_state = initial_state_label.empty()
                             ? decode_product_state(psi0).value_or("custom")
                             : std::move(initial_state_label);
  series.values.reserve(static_cast<std::size_t>(n_cycles) + 1);
  series.values.push_back(stream.value());
  for (int n = 1; n <= n_cycles; ++n) {
    stream.advance();
    series.values.push_back(stream.value());
  }
  series.max_imaginary = stream.max_imaginary();
  return series;
}

SpectralResult fourier_spectrum(std::span<const double> values) {
  if (values.size() < 2) throw InvalidInput("spectrum needs at least one cycle");
  const std::size_t n_total = values.size() - 1;
  if (n_total % 2 != 0) {
    throw InvalidInput("cycle count " + std::to_string(n_total) +
                       " is odd; omega = pi is not on the frequency grid");
  }
  const auto big_n = static_cast<long long>(n_total);
  SpectralResult out;
  out.frequencies.resize(n_total);
  out.magnitudes.resize(n_total);
  for (long long k = 0; k < big_n; ++k) {
    Complex acc{0.0, 0.0};
    for (long long n = 1; n <= big_n; ++n) {
      // Reduce k n mod N first so the phase stays exact for long series.
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * n) % big_n) /
                           static_cast<double>(big_n);
      acc += values[static_cast<std::size_t>(n)] * std::polar(1.0, angle);
    }
    out.frequencies[static_cast<std::size_t>(k)] =
        2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(big_n);
    out.magnitudes[static_cast<std::size_t>(k)] = std::abs(acc) / static_cast<double>(big_n);
  }
  out.a_pi = out.magnitudes[n_total / 2];
  return out;
}

SpectralResult fourier_spectrum(const AutocorrelatorSeries& series) {
  return fourier_spectrum(std::span<const double>(series.values));
}

bool SignReversalDetector::feed(long n, double value) {
  if (reversal_) return true;
  if (n < 1) throw InvalidInput("cycle index must start at 1");
  const bool zero = std::abs(value) < kZeroThreshold;
  if (n == 1 || n == 2) {
    // No reference sign exists if the reference itself vanishes.
    if (zero) {
      reversal_ = n;
      return true;
    }
    (n == 1 ? odd_sign_ : even_sign_) = sign_of(value);
    return false;
  }
  const int reference = (n % 2 == 0) ? even_sign_ : odd_sign_;
  if (zero || sign_of(value) != reference) reversal_ = n;
  return reversal_.has_value();
}

LifetimeResult lifetime(const FloquetPropagator& prop, const StateVector& psi0, long n_max,
                        EvolutionMethod method) {
  if (n_max < 2) throw InvalidInput("lifetime needs n_max >= 2");
  if (method == EvolutionMethod::Automatic) {
    method = n_max > kSpectralThreshold ? EvolutionMethod::SpectralPowering
                                        : EvolutionMethod::MatrixVector;
  }
  CorrelatorStream stream(prop, psi0, CorrelatorPath::Automatic, method);
  SignReversalDetector detector;
  for (long n = 1; n <= n_max; ++n) {
    stream.advance();
    if (detector.feed(n, stream.value())) break;
  }
  return {detector.reversal(), n_max};
}

LifetimeResult lifetime_from_series(std::span<const double> values) {
  if (values.size() < 3) throw InvalidInput("lifetime needs n_max >= 2");
  SignReversalDetector detector;
  const long n_max = static_cast<long>(values.size()) - 1;
  for (long n = 1; n <= n_max; ++n) {
    if (detector.feed(n, values[static_cast<std::size_t>(n)])) break;
  }
  return {detector.reversal(), n_max};
}

}  // namespace dtc
