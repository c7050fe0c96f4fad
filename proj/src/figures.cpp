#include "dtc/commands.hpp"

#include "dtc/errors.hpp"
#include "dtc/floquet.hpp"
#include "dtc/observables.hpp"
#include "dtc/sweep.hpp"

#include <numbers>

namespace dtc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shared by every figure: T1 = 1, T2 = 10, OmegaT1 = pi/2, nearest-neighbor
// interaction (fig3d varies it), N = 100 cycles for spectra.
SimulationParams figure_base(int sites, double eps_t1, double v_t1, double f_t2) {
  SimulationParams p;
  p.L = sites;
  p.T1 = 1.0;
  p.T2 = 10.0;
  p.Omega = std::numbers::pi / 2.0 / p.T1;
  p.epsilon = eps_t1 / p.T1;
  p.V = v_t1 / p.T1;
  p.F = f_t2 / p.T2;
  return p;
}

constexpr int kSpectrumCycles = 100;

std::vector<AxisValue> numeric_values(const std::vector<double>& xs) {
  return {xs.begin(), xs.end()};
}

class FigureWriter {
 public:
  FigureWriter(std::string id, fs::path dir, OutputFormat format, const RunOptions& options)
      : id_(std::move(id)), dir_(std::move(dir)), format_(format), options_(options) {
    ensure_writable_directory(dir_);
  }

  void log(const std::string& line) const {
    if (options_.log) options_.log(id_ + ": " + line);
  }

  void table(const std::string& panel, const Table& t, json meta) {
    meta["figure"] = id_;
    meta["panel"] = panel;
    const auto file = emit_table(t, dir_ / (id_ + "_" + panel), format_, meta);
    manifest_.push_back({{"panel", panel}, {"file", file.filename().string()}, {"meta", meta}});
    files_.push_back(file);
  }

  void record(const std::string& panel, const json& doc) {
    const auto file = dir_ / (id_ + "_" + panel + ".json");
    write_json(file, doc);
    manifest_.push_back({{"panel", panel}, {"file", file.filename().string()}, {"meta", doc}});
    files_.push_back(file);
  }

  SweepOptions sweep_options() const {
    SweepOptions s;
    s.threads = options_.threads;
    if (options_.log) {
      s.progress = [this](std::size_t done, std::size_t total) {
        if (done == total || done % 25 == 0) {
          log("point " + std::to_string(done) + "/" + std::to_string(total));
        }
      };
    }
    return s;
  }

  // Sweep tables keep going past failed points; a figure is only complete if
  // every point succeeded, so failures are raised here with panel context.
  void require_ok(const std::string& panel, const SweepResult& result) const {
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      if (!result.points[i].ok()) {
        throw NumericError(id_ + " panel " + panel + ", point " + std::to_string(i) + ": " +
                           *result.points[i].error);
      }
    }
  }

  std::vector<fs::path> finish() {
    json manifest{{"figure", id_},
                  {"code_version", std::string(code_version())},
                  {"timestamp", utc_timestamp()},
                  {"panels", manifest_}};
    const auto file = dir_ / (id_ + "_manifest.json");
    write_json(file, manifest);
    files_.push_back(file);
    return files_;
  }

 private:
  std::string id_;
  fs::path dir_;
  OutputFormat format_;
  const RunOptions& options_;
  json manifest_ = json::array();
  std::vector<fs::path> files_;
};

json point_meta(const SimulationParams& p, const InitialState& state) {
  return json{{"params", describe(p)}, {"initial_state", state}};
}

void sweep_panel(FigureWriter& w, const std::string& panel, const SweepSpec& spec) {
  const auto result = run_sweep(spec, w.sweep_options());
  w.require_ok(panel, result);
  w.table(panel, sweep_table(result), result.metadata);
}

void fig2(FigureWriter& w) {
  const InitialState state = InitialState::all_ones();
  const auto stage_one = diagonalize_stage_one(build_h1(figure_base(12, 0.3, 0.1, 0.0)));
  const char* series_panels[] = {"a_series", "b_series"};
  const char* spectrum_panels[] = {"c_spectrum", "d_spectrum"};
  const char* overlap_panels[] = {"e_overlaps", "f_overlaps"};
  const double forces[] = {0.0, 0.25};
  for (int k = 0; k < 2; ++k) {
    const auto p = figure_base(12, 0.3, 0.1, forces[k]);
    const auto prop = floquet_operator(p, stage_one);
    const auto psi0 = state.materialize(p.basis());
    const auto series = autocorrelator_series(prop, psi0, kSpectrumCycles,
                                              CorrelatorPath::Automatic,
                                              EvolutionMethod::Automatic, state.label());
    const auto spectrum = fourier_spectrum(series);
    json meta = point_meta(p, state);
    meta["n_cycles"] = kSpectrumCycles;
    w.table(series_panels[k], series_table(series), meta);
    meta["a_pi"] = spectrum.a_pi;
    w.table(spectrum_panels[k], spectrum_table(spectrum), meta);
    w.log("diagonalizing U_F at FT2=" + format_double(forces[k]));
    const auto table = overlaps(prop.spectrum(), psi0);
    const auto pair = find_pi_pair(table);
    meta.erase("a_pi");
    meta["pi_pair"] = pair ? json(*pair) : json(nullptr);
    meta["pi_pair_tolerance"] = kDefaultPiPairTolerance;
    w.table(overlap_panels[k], overlap_table(table), meta);
  }
}

SweepSpec a_pi_spec(const SimulationParams& base) {
  SweepSpec spec;
  spec.base = base;
  spec.observable = Observable::APi;
  spec.n_cycles = kSpectrumCycles;
  return spec;
}

void fig3a(FigureWriter& w) {
  auto spec = a_pi_spec(figure_base(10, 0.0, 0.1, 0.0));
  spec.axes = {{AxisName::Epsilon, numeric_values(grid(0.0, 0.5, 0.02))},
               {AxisName::FT2, numeric_values(grid(0.0, 0.5, 0.02))}};
  sweep_panel(w, "a_pi", spec);
}

void fig3b(FigureWriter& w) {
  auto spec = a_pi_spec(figure_base(10, 0.0, 0.1, 0.0));
  spec.axes = {{AxisName::FT2, numeric_values({0.0, 0.2, 0.3})},
               {AxisName::Epsilon, numeric_values(grid(0.0, 0.5, 0.02))}};
  sweep_panel(w, "a_pi", spec);
}

void fig3c(FigureWriter& w) {
  auto spec = a_pi_spec(figure_base(10, 0.3, 0.1, 0.0));
  spec.axes = {{AxisName::V, numeric_values({0.06, 0.09, 0.12})},
               {AxisName::FT2, numeric_values(grid(0.0, 0.5, 0.02))}};
  sweep_panel(w, "a_pi", spec);
}

void fig3d(FigureWriter& w) {
  const auto ft2 = grid(0.0, 0.5, 0.05);
  ComparisonOptions opts;
  opts.n_cycles = kSpectrumCycles;
  opts.sweep = w.sweep_options();
  const auto result = kernel_comparison(figure_base(10, 0.3, 0.1, 0.0), ft2, opts);
  w.require_ok("a_pi", result);
  w.table("a_pi", sweep_table(result), result.metadata);
}

void fig4a(FigureWriter& w) {
  constexpr long kCycles = 5000;
  const auto p = figure_base(10, 0.25, 0.1, 0.25);
  const InitialState state = InitialState::all_ones();
  const auto prop = floquet_operator(p);
  const auto series = autocorrelator_series(prop, state.materialize(p.basis()), kCycles,
                                            CorrelatorPath::Automatic,
                                            EvolutionMethod::Automatic, state.label());
  json meta = point_meta(p, state);
  meta["n_cycles"] = kCycles;
  w.table("a_series", series_table(series), meta);
  json record = describe(p);
  record["initial_state"] = state;
  record.update(json(lifetime_from_series(series.values)));
  w.record("a_lifetime", record);
}

void fig4b(FigureWriter& w) {
  SweepSpec spec;
  spec.base = figure_base(10, 0.0, 0.1, 0.0);
  spec.observable = Observable::Lifetime;
  spec.n_max = 10'000;
  spec.axes = {{AxisName::Epsilon, numeric_values({0.20, 0.25, 0.30})},
               {AxisName::FT2, numeric_values(grid(0.1, 0.5, 0.05))}};
  sweep_panel(w, "b_lifetime", spec);
}

void fig5(FigureWriter& w) {
  const std::vector<std::string> states = {"1111000000", "1111010010"};
  const std::vector<double> ft2 = {0.0, 0.4};
  ComparisonOptions opts;
  opts.n_cycles = kSpectrumCycles;
  opts.sweep = w.sweep_options();
  const auto result = initial_state_comparison(figure_base(10, 0.25, 0.1, 0.0), states, ft2, opts);
  w.require_ok("series", result);
  w.table("series", sweep_table(result), result.metadata);

  Table spectra{{"initial_state", "F_T2", "omega", "magnitude"}, {}};
  for (const auto& point : result.points) {
    const auto& s = *point.spectrum;
    for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
      spectra.rows.push_back({std::get<std::string>(point.coords[0]),
                              std::get<double>(point.coords[1]), s.frequencies[k],
                              s.magnitudes[k]});
    }
  }
  json meta = result.metadata;
  meta["spectrum_normalization"] = "|sum_{n=1}^{N} C[n] exp(-i omega n)| / N";
  w.table("spectrum", spectra, meta);
}

}  // namespace

std::vector<fs::path> figure_command(std::string_view figure_id, const fs::path& output_dir,
                                     OutputFormat format, const RunOptions& options) {
  using Builder = void (*)(FigureWriter&);
  static const std::pair<std::string_view, Builder> builders[] = {
      {"fig2", fig2},   {"fig3a", fig3a}, {"fig3b", fig3b}, {"fig3c", fig3c},
      {"fig3d", fig3d}, {"fig4a", fig4a}, {"fig4b", fig4b}, {"fig5", fig5}};
  for (const auto& [id, build] : builders) {
    if (id != figure_id) continue;
    FigureWriter writer(std::string(id), output_dir, format, options);
    build(writer);
    return writer.finish();
  }
  throw InvalidInput("unknown figure '" + std::string(figure_id) + "'");
}

}  // namespace dtc
