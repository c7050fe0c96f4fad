#include "dtc/commands.hpp"

#include "dtc/errors.hpp"
#include "dtc/floquet.hpp"
#include "dtc/observables.hpp"
#include "dtc/sweep.hpp"

namespace dtc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kNormalization = "|sum_{n=1}^{N} C[n] exp(-i omega n)| / N";

void say(const RunOptions& options, const std::string& line) {
  if (options.log) options.log(line);
}

json pi_pair_json(const std::optional<PiPair>& pair) {
  return pair ? json(*pair) : json(nullptr);
}

}  // namespace

fs::path emit_table(const Table& table, const fs::path& stem, OutputFormat format,
                    json metadata) {
  const fs::path file = write_table(table, stem, format);
  metadata["code_version"] = std::string(code_version());
  metadata["timestamp"] = utc_timestamp();
  metadata["columns"] = table.columns;
  write_metadata(file, metadata);
  return file;
}

std::vector<fs::path> run_command(const RunConfig& cfg, const RunOptions& options) {
  if (cfg.command == Command::Figure) {
    return figure_command(*cfg.figure, cfg.output_dir, cfg.format, options);
  }
  ensure_writable_directory(cfg.output_dir);
  const json echo = config_to_json(cfg);
  std::vector<fs::path> files;

  if (cfg.command == Command::Sweep) {
    SweepOptions sweep_options;
    sweep_options.threads = options.threads;
    sweep_options.journal = cfg.journal;
    if (options.log) {
      sweep_options.progress = [&](std::size_t done, std::size_t total) {
        options.log("point " + std::to_string(done) + "/" + std::to_string(total));
      };
    }
    const auto result = run_sweep(*cfg.sweep, sweep_options);
    json meta = result.metadata;
    meta["config"] = echo;
    files.push_back(emit_table(sweep_table(result), cfg.output_dir / "sweep", cfg.format, meta));
    return files;
  }

  say(options, "building propagator (L=" + std::to_string(cfg.params.L) + ")");
  const auto prop = floquet_operator(cfg.params);
  const auto psi0 = cfg.initial_state.materialize(cfg.params.basis());
  json meta{{"config", echo}};

  switch (cfg.command) {
    case Command::Series:
    case Command::Spectrum: {
      const auto series = autocorrelator_series(prop, psi0, cfg.n_cycles, CorrelatorPath::Automatic,
                                                cfg.method, cfg.initial_state.label());
      meta["max_imaginary"] = series.max_imaginary;
      files.push_back(emit_table(series_table(series), cfg.output_dir / "series", cfg.format, meta));
      if (cfg.command == Command::Spectrum) {
        const auto spectrum = fourier_spectrum(series);
        meta["a_pi"] = spectrum.a_pi;
        meta["spectrum_normalization"] = kNormalization;
        files.push_back(
            emit_table(spectrum_table(spectrum), cfg.output_dir / "spectrum", cfg.format, meta));
      }
      break;
    }
    case Command::Overlaps: {
      say(options, "diagonalizing U_F");
      const auto table = overlaps(prop.spectrum(), psi0);
      meta["pi_pair"] = pi_pair_json(find_pi_pair(table, cfg.pi_pair_tolerance));
      meta["max_residual"] = prop.spectrum().max_residual;
      files.push_back(emit_table(overlap_table(table), cfg.output_dir / "overlaps", cfg.format, meta));
      break;
    }
    case Command::Lifetime: {
      const auto result = lifetime(prop, psi0, cfg.n_max, cfg.method);
      json record = describe(cfg.params);
      record["initial_state"] = cfg.initial_state;
      record.update(json(result));
      const fs::path file = cfg.output_dir / "lifetime.json";
      write_json(file, record);
      meta["code_version"] = std::string(code_version());
      meta["timestamp"] = utc_timestamp();
      write_metadata(file, meta);
      files.push_back(file);
      break;
    }
    case Command::Sweep:
    case Command::Figure:
      break;
  }
  return files;
}

}  // namespace dtc
