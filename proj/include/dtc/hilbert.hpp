#pragma once

// Computational basis of an L-site two-level chain.
//
// Site j (1-based) lives in bit j-1 of the basis index. A set bit is the
// Rydberg state |r>, a cleared bit the ground state |g>, so sigma^z = +1 on
// |r>. Strings of bits are written with site 1 leftmost.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dtc {

using Complex = std::complex<double>;
using BasisIndex = std::uint64_t;

class BasisConfig {
 public:
  /// Largest chain the library will allocate vectors for.
  static constexpr int kMaxSites = 24;

  explicit BasisConfig(int sites);

  int sites() const noexcept { return sites_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << sites_; }

  /// n_j(b) for 1-based site j. No range check; see occupation_diagonal.
  static int occupation(int site, BasisIndex b) noexcept {
    return static_cast<int>((b >> (site - 1)) & 1u);
  }

  void check_site(int site) const;

  bool operator==(const BasisConfig&) const = default;

 private:
  int sites_;
};

/// Normalized amplitude vector over the 2^L z-basis. Immutable.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  /// Throws InvalidInput unless amplitudes has length 2^L and unit norm.
  StateVector(BasisConfig basis, Eigen::VectorXcd amplitudes);

  const BasisConfig& basis() const noexcept { return basis_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dimension() const noexcept { return basis_.dimension(); }

  /// Index of the single nonzero amplitude, if this is a z-basis state.
  std::optional<BasisIndex> basis_index() const;

 private:
  BasisConfig basis_;
  Eigen::VectorXcd amplitudes_;
};

struct AmplitudeEntry {
  BasisIndex index;
  double re;
  double im;
};

BasisIndex bits_to_index(std::string_view bits);
std::string index_to_bits(BasisIndex index, int sites);

StateVector z_product_state(std::string_view bits, const BasisConfig& basis);

/// Builds a state from sparse (index, re, im) triples. Norms within 1e-6 of
/// one are renormalized; anything further off is rejected.
StateVector state_from_amplitudes(std::span<const AmplitudeEntry> entries,
                                  const BasisConfig& basis);

/// Bit string of a z-basis state, empty if the state is not a basis state.
std::optional<std::string> decode_product_state(const StateVector& state);

Eigen::VectorXd occupation_diagonal(int site, const BasisConfig& basis);
Eigen::VectorXd sigma_z_diagonal(int site, const BasisConfig& basis);

/// <psi|sigma^x_j|psi>, pairing amplitudes that differ only in bit j-1.
double sigma_x_expectation(const StateVector& state, int site);

/// Description of an initial state that can be materialized for any L.
class InitialState {
 public:
  struct AllOnes {};

  InitialState() = default;
  static InitialState all_ones() { return InitialState{}; }
  static InitialState bits(std::string bits);
  static InitialState amplitudes(std::vector<AmplitudeEntry> entries,
                                 std::string label = "custom");

  StateVector materialize(const BasisConfig& basis) const;
  std::string label() const;

  bool is_all_ones() const { return std::holds_alternative<AllOnes>(repr_); }
  const std::string* as_bits() const { return std::get_if<std::string>(&repr_); }
  const std::vector<AmplitudeEntry>* as_amplitudes() const;

 private:
  struct Amplitudes {
    std::vector<AmplitudeEntry> entries;
    std::string label;
  };
  std::variant<AllOnes, std::string, Amplitudes> repr_;
};

}  // namespace dtc
