#include "dtc/io.hpp"

#include "dtc/errors.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#ifndef DTC_VERSION
#define DTC_VERSION "unknown"
#endif

namespace dtc {

namespace fs = std::filesystem;
using nlohmann::json;

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw InvalidInput("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::string_view extension(OutputFormat format) {
  return format == OutputFormat::Csv ? ".csv" : ".json";
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw NumericError("cannot format double");
  return std::string(buf, end);
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    return std::isfinite(*d) ? json(*d) : json(nullptr);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << csv_escape(table.columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << csv_escape(cell_text(row[c]));
    }
    out << '\n';
  }
}

json table_to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      obj[table.columns[c]] = cell_json(row[c]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

fs::path write_table(const Table& table, const fs::path& stem, OutputFormat format) {
  fs::path path = stem;
  path += extension(format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  if (format == OutputFormat::Csv) {
    write_csv(table, out);
  } else {
    out << table_to_json(table).dump(1) << '\n';
  }
  if (!out) throw InvalidInput("failed writing " + path.string());
  return path;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

fs::path write_metadata(const fs::path& data_file, const json& metadata) {
  fs::path path = data_file;
  path += ".meta.json";
  write_json(path, metadata);
  return path;
}

Table series_table(const AutocorrelatorSeries& series) {
  Table t{{"n", "C"}, {}};
  t.rows.reserve(series.values.size());
  for (std::size_t n = 0; n < series.values.size(); ++n) {
    t.rows.push_back({static_cast<long long>(n), series.values[n]});
  }
  return t;
}

Table spectrum_table(const SpectralResult& spectrum) {
  Table t{{"omega", "magnitude"}, {}};
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k) {
    t.rows.push_back({spectrum.frequencies[k], spectrum.magnitudes[k]});
  }
  return t;
}

Table overlap_table(const OverlapTable& table) {
  Table t{{"quasi_energy", "overlap"}, {}};
  for (const auto& e : table.entries) t.rows.push_back({e.quasi_energy, e.overlap});
  return t;
}

void ensure_writable_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw InvalidInput("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const auto day = std::chrono::floor<std::chrono::days>(now);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{now - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

std::string_view code_version() { return DTC_VERSION; }

void to_json(json& j, const SimulationParams& p) {
  j = json{{"L", p.L},     {"Omega", p.Omega}, {"epsilon", p.epsilon},
           {"V", p.V},     {"F", p.F},         {"T1", p.T1},
           {"T2", p.T2},   {"kernel", std::string(to_string(p.kernel))}};
}

void from_json(const json& j, SimulationParams& p) {
  p.L = j.at("L").get<int>();
  p.Omega = j.at("Omega").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  p.V = j.at("V").get<double>();
  p.F = j.at("F").get<double>();
  p.T1 = j.at("T1").get<double>();
  p.T2 = j.at("T2").get<double>();
  p.kernel = parse_kernel(j.at("kernel").get<std::string>());
}

json describe(const SimulationParams& p) {
  json j = p;
  j["OmegaT1"] = p.Omega * p.T1;
  j["epsT1"] = p.epsilon * p.T1;
  j["VT1"] = p.V * p.T1;
  j["VT2"] = p.V * p.T2;
  j["FT2"] = p.F * p.T2;
  return j;
}

void to_json(json& j, const InitialState& s) {
  if (const auto* amps = s.as_amplitudes()) {
    json list = json::array();
    for (const auto& e : *amps) list.push_back({e.index, e.re, e.im});
    j = json{{"label", s.label()}, {"amplitudes", std::move(list)}};
  } else {
    j = s.label();
  }
}

void to_json(json& j, const LifetimeResult& r) {
  j = json{{"N_c", r.cycles ? json(*r.cycles) : json("not_observed")}, {"n_max", r.n_max}};
}

void from_json(const json& j, LifetimeResult& r) {
  r.n_max = j.at("n_max").get<long>();
  const auto& nc = j.at("N_c");
  r.cycles = nc.is_number() ? std::optional<long>(nc.get<long>()) : std::nullopt;
}

void to_json(json& j, const AutocorrelatorSeries& s) {
  j = json{{"values", s.values},
           {"n_cycles", s.n_cycles},
           {"params", s.params},
           {"initial_state", s.initial_state},
           {"max_imaginary", s.max_imaginary}};
}

void from_json(const json& j, AutocorrelatorSeries& s) {
  s.values = j.at("values").get<std::vector<double>>();
  s.n_cycles = j.at("n_cycles").get<int>();
  s.params = j.at("params").get<SimulationParams>();
  s.initial_state = j.at("initial_state").get<std::string>();
  s.max_imaginary = j.at("max_imaginary").get<double>();
}

void to_json(json& j, const SpectralResult& s) {
  j = json{{"frequencies", s.frequencies}, {"magnitudes", s.magnitudes}, {"a_pi", s.a_pi}};
}

void from_json(const json& j, SpectralResult& s) {
  s.frequencies = j.at("frequencies").get<std::vector<double>>();
  s.magnitudes = j.at("magnitudes").get<std::vector<double>>();
  s.a_pi = j.at("a_pi").get<double>();
}

void to_json(json& j, const OverlapTable& t) {
  json e = json::array();
  for (const auto& entry : t.entries) e.push_back({entry.quasi_energy, entry.overlap});
  j = json{{"entries", std::move(e)}};
}

void from_json(const json& j, OverlapTable& t) {
  t.entries.clear();
  for (const auto& e : j.at("entries")) {
    t.entries.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  }
}

void to_json(json& j, const PiPair& p) {
  j = json{{"first", p.first}, {"second", p.second}, {"gap", p.gap}, {"mass", p.mass}};
}

void from_json(const json& j, PiPair& p) {
  p.first = j.at("first").get<std::size_t>();
  p.second = j.at("second").get<std::size_t>();
  p.gap = j.at("gap").get<double>();
  p.mass = j.at("mass").get<double>();
}

}  // namespace dtc
