#pragma once

// Stroboscopic autocorrelator
//   C(nT) = (1/L) sum_j <psi0| sigma^z_j (U_F^dagger)^n sigma^z_j U_F^n |psi0>,
// its discrete Fourier spectrum, the subharmonic amplitude at omega = pi and
// the period-doubling lifetime.

#include "dtc/floquet.hpp"
#include "dtc/hilbert.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dtc {

enum class CorrelatorPath {
  Automatic,     // ProductState when psi0 is a z-basis state, General otherwise
  General,       // co-evolve psi and sigma^z_j psi for every site
  ProductState,  // evolve psi only; requires a z-basis psi0
};

enum class EvolutionMethod {
  Automatic,         // SpectralPowering above kSpectralThreshold cycles
  MatrixVector,      // repeated application of U_F
  SpectralPowering,  // diagonalize U_F once, raise phases to the n-th power
};

inline constexpr long kSpectralThreshold = 10'000;

std::string_view to_string(EvolutionMethod m);
/// "auto", "matvec" or "spectral".
EvolutionMethod parse_method(std::string_view name);

struct AutocorrelatorSeries {
  std::vector<double> values;  // C[0..n_cycles]
  int n_cycles = 0;
  SimulationParams params;
  std::string initial_state;
  /// Largest |Im C[n]| discarded; zero for the product-state path.
  double max_imaginary = 0.0;
};

/// Produces C[0], C[1], ... one Floquet cycle at a time.
class CorrelatorStream {
 public:
  CorrelatorStream(const FloquetPropagator& prop, const StateVector& psi0,
                   CorrelatorPath path = CorrelatorPath::Automatic,
                   EvolutionMethod method = EvolutionMethod::MatrixVector);
  ~CorrelatorStream();
  CorrelatorStream(CorrelatorStream&&) noexcept;
  CorrelatorStream& operator=(CorrelatorStream&&) noexcept;

  long cycle() const noexcept;
  double value() const noexcept;
  double max_imaginary() const noexcept;
  CorrelatorPath path() const noexcept;

  /// Moves to the next cycle. Throws NumericError on norm drift above 1e-8.
  void advance();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

AutocorrelatorSeries autocorrelator_series(const FloquetPropagator& prop, const StateVector& psi0,
                                           int n_cycles,
                                           CorrelatorPath path = CorrelatorPath::Automatic,
                                           EvolutionMethod method = EvolutionMethod::MatrixVector,
                                           std::string initial_state_label = {});

struct SpectralResult {
  std::vector<double> frequencies;  // 2 pi k / N, k = 0..N-1
  std::vector<double> magnitudes;   // |X(omega_k)| / N
  double a_pi = 0.0;                // magnitudes[N/2]
};

/// X(omega_k) = sum_{n=1}^{N} C[n] exp(-i omega_k n). C[0] is not summed.
/// Throws InvalidInput unless N = values.size() - 1 is even and positive.
SpectralResult fourier_spectrum(std::span<const double> values);
SpectralResult fourier_spectrum(const AutocorrelatorSeries& series);

struct LifetimeResult {
  std::optional<long> cycles;  // N_c, empty when not observed
  long n_max = 0;

  bool observed() const { return cycles.has_value(); }
};

/// First reversal of the even or odd subsequence against the signs of C[2]
/// and C[1]. Values with |C| < kZeroThreshold count as reversed.
class SignReversalDetector {
 public:
  static constexpr double kZeroThreshold = 1e-12;

  /// Feed C[n] for n = 1, 2, 3, ... in order; returns true once reversed.
  bool feed(long n, double value);
  std::optional<long> reversal() const noexcept { return reversal_; }

 private:
  int odd_sign_ = 0;
  int even_sign_ = 0;
  std::optional<long> reversal_;
};

LifetimeResult lifetime(const FloquetPropagator& prop, const StateVector& psi0, long n_max,
                        EvolutionMethod method = EvolutionMethod::Automatic);
/// Lifetime read off an already computed series C[0..n_max].
LifetimeResult lifetime_from_series(std::span<const double> values);

}  // namespace dtc
