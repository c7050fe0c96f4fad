#pragma once

// Run configuration read from a flat JSON document.
//
// Physical parameters may be given as raw rates (Omega, epsilon, V, F) or as
// dimensionless groups (OmegaT1, epsT1, VT1, VT2, FT2); groups are converted
// with T1 and T2 at load. Any numeric value may also be written as a string
// such as "pi/2" or "3*pi/4".
//
//   {"command": "series", "L": 12, "OmegaT1": "pi/2", "epsT1": 0.3,
//    "VT1": 0.1, "FT2": 0.25, "n_cycles": 100}

#include "dtc/hamiltonian.hpp"
#include "dtc/hilbert.hpp"
#include "dtc/io.hpp"
#include "dtc/observables.hpp"
#include "dtc/sweep.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace dtc {

enum class Command { Series, Spectrum, Overlaps, Lifetime, Sweep, Figure };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

struct RunConfig {
  Command command = Command::Series;
  SimulationParams params;
  InitialState initial_state;
  int n_cycles = 100;
  long n_max = 5000;
  std::filesystem::path output_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  /// Accepted and echoed to metadata; the dynamics use no randomness.
  std::optional<std::int64_t> seed;
  double pi_pair_tolerance = kDefaultPiPairTolerance;
  EvolutionMethod method = EvolutionMethod::Automatic;
  std::optional<std::string> figure;
  /// Present when command == Sweep. Its base and state mirror the fields above.
  std::optional<SweepSpec> sweep;
  std::optional<std::filesystem::path> journal;
};

/// Throws ParseError (schema, with key path) or InvalidInput (conflicting or
/// out-of-range values).
RunConfig parse_config(std::string_view source);

/// Number or symbolic multiple of pi: "pi", "-pi/2", "3*pi/4", "0.25".
double parse_scalar(const nlohmann::json& value, const std::string& key_path);

/// Echo of the effective configuration, used in metadata sidecars.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace dtc
