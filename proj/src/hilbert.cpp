#include "dtc/hilbert.hpp"

#include "dtc/errors.hpp"

#include <cmath>

namespace dtc {

BasisConfig::BasisConfig(int sites) : sites_(sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw InvalidInput("site count must lie in [1, " + std::to_string(kMaxSites) +
                       "], got " + std::to_string(sites));
  }
}

void BasisConfig::check_site(int site) const {
  if (site < 1 || site > sites_) {
    throw InvalidInput("site index " + std::to_string(site) + " outside [1, " +
                       std::to_string(sites_) + "]");
  }
}

StateVector::StateVector(BasisConfig basis, Eigen::VectorXcd amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension()) {
    throw InvalidInput("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                       ", expected " + std::to_string(basis_.dimension()));
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw InvalidInput("state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

std::optional<BasisIndex> StateVector::basis_index() const {
  std::optional<BasisIndex> found;
  for (Eigen::Index b = 0; b < amplitudes_.size(); ++b) {
    if (amplitudes_[b] != Complex{0.0, 0.0}) {
      if (found) return std::nullopt;
      found = static_cast<BasisIndex>(b);
    }
  }
  return found;
}

BasisIndex bits_to_index(std::string_view bits) {
  if (bits.empty() || bits.size() > static_cast<std::size_t>(BasisConfig::kMaxSites)) {
    throw InvalidInput("bit string length " + std::to_string(bits.size()) + " unsupported");
  }
  BasisIndex index = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const char c = bits[j];
    if (c != '0' && c != '1') {
      throw InvalidInput("non-binary character '" + std::string(1, c) + "' in bit string");
    }
    if (c == '1') index |= BasisIndex{1} << j;
  }
  return index;
}

std::string index_to_bits(BasisIndex index, int sites) {
  std::string bits(static_cast<std::size_t>(sites), '0');
  for (int j = 1; j <= sites; ++j) {
    if (BasisConfig::occupation(j, index)) bits[static_cast<std::size_t>(j - 1)] = '1';
  }
  return bits;
}

StateVector z_product_state(std::string_view bits, const BasisConfig& basis) {
  if (bits.size() != static_cast<std::size_t>(basis.sites())) {
    throw InvalidInput("bit string '" + std::string(bits) + "' has length " +
                       std::to_string(bits.size()) + ", expected L=" +
                       std::to_string(basis.sites()));
  }
  Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
  amplitudes[static_cast<Eigen::Index>(bits_to_index(bits))] = 1.0;
  return StateVector(basis, std::move(amplitudes));
}

StateVector state_from_amplitudes(std::span<const AmplitudeEntry> entries,
                                  const BasisConfig& basis) {
  Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
  for (const auto& e : entries) {
    if (e.index >= basis.dimension()) {
      throw InvalidInput("amplitude index " + std::to_string(e.index) + " outside basis of dimension " +
                         std::to_string(basis.dimension()));
    }
    if (!std::isfinite(e.re) || !std::isfinite(e.im)) {
      throw InvalidInput("non-finite amplitude at index " + std::to_string(e.index));
    }
    amplitudes[static_cast<Eigen::Index>(e.index)] += Complex{e.re, e.im};
  }
  const double norm = amplitudes.norm();
  if (!(std::abs(norm - 1.0) <= 1e-6)) {
    throw InvalidInput("amplitude list has norm " + std::to_string(norm) +
                       ", more than 1e-6 away from 1");
  }
  amplitudes /= norm;
  return StateVector(basis, std::move(amplitudes));
}

std::optional<std::string> decode_product_state(const StateVector& state) {
  auto index = state.basis_index();
  if (!index) return std::nullopt;
  return index_to_bits(*index, state.basis().sites());
}

Eigen::VectorXd occupation_diagonal(int site, const BasisConfig& basis) {
  basis.check_site(site);
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dimension()));
  for (Eigen::Index b = 0; b < d.size(); ++b) {
    d[b] = BasisConfig::occupation(site, static_cast<BasisIndex>(b));
  }
  return d;
}

Eigen::VectorXd sigma_z_diagonal(int site, const BasisConfig& basis) {
  return 2.0 * occupation_diagonal(site, basis).array() - 1.0;
}

double sigma_x_expectation(const StateVector& state, int site) {
  state.basis().check_site(site);
  const auto& psi = state.amplitudes();
  const BasisIndex mask = BasisIndex{1} << (site - 1);
  double sum = 0.0;
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const auto partner = static_cast<Eigen::Index>(static_cast<BasisIndex>(b) ^ mask);
    sum += (std::conj(psi[b]) * psi[partner]).real();
  }
  return sum;
}

InitialState InitialState::bits(std::string bits) {
  bits_to_index(bits);  // validates characters
  InitialState s;
  s.repr_ = std::move(bits);
  return s;
}

InitialState InitialState::amplitudes(std::vector<AmplitudeEntry> entries, std::string label) {
  if (entries.empty()) throw InvalidInput("amplitude list is empty");
  InitialState s;
  s.repr_ = Amplitudes{std::move(entries), std::move(label)};
  return s;
}

const std::vector<AmplitudeEntry>* InitialState::as_amplitudes() const {
  const auto* a = std::get_if<Amplitudes>(&repr_);
  return a ? &a->entries : nullptr;
}

StateVector InitialState::materialize(const BasisConfig& basis) const {
  if (is_all_ones()) {
    return z_product_state(std::string(static_cast<std::size_t>(basis.sites()), '1'), basis);
  }
  if (const auto* bits = as_bits()) return z_product_state(*bits, basis);
  return state_from_amplitudes(std::get<Amplitudes>(repr_).entries, basis);
}

std::string InitialState::label() const {
  if (is_all_ones()) return "all_ones";
  if (const auto* bits = as_bits()) return *bits;
  return std::get<Amplitudes>(repr_).label;
}

}  // namespace dtc
