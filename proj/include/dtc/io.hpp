#pragma once

// Long-format tables, CSV/JSON writers and metadata sidecars.

#include "dtc/floquet.hpp"
#include "dtc/observables.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dtc {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view name);
std::string_view extension(OutputFormat format);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_csv(const Table& table, std::ostream& out);
nlohmann::json table_to_json(const Table& table);

/// Writes `stem` + extension and returns the path written.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& stem,
                                  OutputFormat format);
/// Writes `<data file>.meta.json` next to a data file.
std::filesystem::path write_metadata(const std::filesystem::path& data_file,
                                     const nlohmann::json& metadata);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

Table series_table(const AutocorrelatorSeries& series);
Table spectrum_table(const SpectralResult& spectrum);
Table overlap_table(const OverlapTable& table);

/// Throws InvalidInput if the directory cannot be created or written.
void ensure_writable_directory(const std::filesystem::path& dir);

/// ISO-8601 UTC timestamp for metadata.
std::string utc_timestamp();
std::string_view code_version();

// JSON forms of the domain types (used for metadata, journals and records).
void to_json(nlohmann::json& j, const SimulationParams& p);
void from_json(const nlohmann::json& j, SimulationParams& p);
void to_json(nlohmann::json& j, const InitialState& s);
void to_json(nlohmann::json& j, const LifetimeResult& r);
void from_json(const nlohmann::json& j, LifetimeResult& r);
void to_json(nlohmann::json& j, const AutocorrelatorSeries& s);
void from_json(const nlohmann::json& j, AutocorrelatorSeries& s);
void to_json(nlohmann::json& j, const SpectralResult& s);
void from_json(const nlohmann::json& j, SpectralResult& s);
void to_json(nlohmann::json& j, const OverlapTable& t);
void from_json(const nlohmann::json& j, OverlapTable& t);
void to_json(nlohmann::json& j, const PiPair& p);
void from_json(const nlohmann::json& j, PiPair& p);

/// Parameter block in both raw and dimensionless form.
nlohmann::json describe(const SimulationParams& p);

}  // namespace dtc
