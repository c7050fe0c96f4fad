#pragma once

// Parameter grids over one or two axes, evaluated point by point.
//
// Numeric axis values are dimensionless groups: epsilon means eps*T1, F_T2
// means F*T2 and V means V*T1, converted with the base durations. Points are
// ordered row-major (last axis fastest). Results are gathered by grid index,
// so values never depend on the worker count or completion order.

#include "dtc/floquet.hpp"
#include "dtc/hilbert.hpp"
#include "dtc/io.hpp"
#include "dtc/observables.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dtc {

enum class Observable { APi, Lifetime, Series, Spectrum, OverlapTable };
enum class AxisName { Epsilon, FT2, V, L, Kernel, InitialState };

std::string_view to_string(Observable o);
std::string_view to_string(AxisName a);
Observable parse_observable(std::string_view name);
AxisName parse_axis_name(std::string_view name);

using AxisValue = std::variant<double, std::string>;

struct SweepAxis {
  AxisName name;
  std::vector<AxisValue> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  SimulationParams base;
  InitialState initial_state;
  Observable observable = Observable::APi;
  int n_cycles = 100;
  long n_max = 10'000;
  double pi_pair_tolerance = kDefaultPiPairTolerance;
  EvolutionMethod method = EvolutionMethod::Automatic;
  std::size_t max_points = 10'000;

  /// Throws InvalidInput on an empty/duplicate/mistyped axis or oversize grid.
  void validate() const;
  std::size_t size() const;
  std::vector<AxisValue> coordinates(std::size_t index) const;
  /// Parameters and initial state at a grid point.
  std::pair<SimulationParams, InitialState> point(std::size_t index) const;
};

struct PointResult {
  std::vector<AxisValue> coords;
  std::optional<std::string> error;
  double a_pi = std::numeric_limits<double>::quiet_NaN();
  std::optional<LifetimeResult> lifetime;
  std::optional<AutocorrelatorSeries> series;
  std::optional<SpectralResult> spectrum;
  std::optional<OverlapTable> overlaps;
  std::optional<PiPair> pi_pair;

  bool ok() const { return !error.has_value(); }
};

struct SweepResult {
  SweepSpec spec;
  std::vector<PointResult> points;
  nlohmann::json metadata;
};

struct SweepOptions {
  unsigned threads = 1;
  /// JSON-lines journal; completed points found there are not recomputed.
  std::optional<std::filesystem::path> journal;
  /// Called after each point with (completed, total). Serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

struct ComparisonOptions {
  InitialState initial_state;
  int n_cycles = 100;
  SweepOptions sweep;
};

/// A_pi against F*T2 for the NN, NNN, NNNN and ALL kernels.
SweepResult kernel_comparison(const SimulationParams& base, std::span<const double> ft2_grid,
                              const ComparisonOptions& options = {});

/// Series and spectrum for every (state, F*T2) pair. States are bit strings
/// or "all_ones".
SweepResult initial_state_comparison(const SimulationParams& base,
                                     std::span<const std::string> states,
                                     std::span<const double> ft2_values,
                                     const ComparisonOptions& options = {});

/// Long-format table for the spec's observable (one row per point or sample).
Table sweep_table(const SweepResult& result);

nlohmann::json spec_to_json(const SweepSpec& spec);
nlohmann::json point_to_json(const PointResult& point);
PointResult point_from_json(const nlohmann::json& j);

/// start, start+step, ... up to and including stop (within half a step).
std::vector<double> grid(double start, double stop, double step);

}  // namespace dtc
