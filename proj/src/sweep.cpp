#include "dtc/sweep.hpp"

#include "dtc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace dtc {

using nlohmann::json;

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::APi: return "a_pi";
    case Observable::Lifetime: return "lifetime";
    case Observable::Series: return "series";
    case Observable::Spectrum: return "spectrum";
    case Observable::OverlapTable: return "overlap_table";
  }
  return "?";
}

std::string_view to_string(AxisName a) {
  switch (a) {
    case AxisName::Epsilon: return "epsilon";
    case AxisName::FT2: return "F_T2";
    case AxisName::V: return "V";
    case AxisName::L: return "L";
    case AxisName::Kernel: return "kernel";
    case AxisName::InitialState: return "initial_state";
  }
  return "?";
}

Observable parse_observable(std::string_view name) {
  for (auto o : {Observable::APi, Observable::Lifetime, Observable::Series, Observable::Spectrum,
                 Observable::OverlapTable}) {
    if (to_string(o) == name) return o;
  }
  throw InvalidInput("unknown observable '" + std::string(name) + "'");
}

AxisName parse_axis_name(std::string_view name) {
  for (auto a : {AxisName::Epsilon, AxisName::FT2, AxisName::V, AxisName::L, AxisName::Kernel,
                 AxisName::InitialState}) {
    if (to_string(a) == name) return a;
  }
  throw InvalidInput("unknown sweep axis '" + std::string(name) + "'");
}

namespace {

bool is_string_axis(AxisName a) { return a == AxisName::Kernel || a == AxisName::InitialState; }

json axis_value_json(const AxisValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

AxisValue axis_value_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  return j.get<std::string>();
}

Cell axis_cell(const AxisValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  if (axes.empty() || axes.size() > 2) throw InvalidInput("a sweep needs one or two axes");
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw InvalidInput("sweep axis '" + std::string(to_string(axes[0].name)) + "' repeated");
  }
  for (const auto& axis : axes) {
    if (axis.values.empty()) {
      throw InvalidInput("sweep axis '" + std::string(to_string(axis.name)) + "' is empty");
    }
    for (const auto& v : axis.values) {
      const bool text = std::holds_alternative<std::string>(v);
      if (text != is_string_axis(axis.name)) {
        throw InvalidInput("sweep axis '" + std::string(to_string(axis.name)) + "' expects " +
                           (is_string_axis(axis.name) ? "string" : "numeric") + " values");
      }
      if (axis.name == AxisName::L) {
        const double l = std::get<double>(v);
        if (l != std::floor(l) || l < 1 || l > SimulationParams::kMaxDenseSites) {
          throw InvalidInput("L axis values must be integers in [1, " +
                             std::to_string(SimulationParams::kMaxDenseSites) + "]");
        }
      }
      if (axis.name == AxisName::Kernel) parse_kernel(std::get<std::string>(v));
      if (axis.name == AxisName::InitialState) {
        const auto& s = std::get<std::string>(v);
        if (s != "all_ones") InitialState::bits(s);
      }
    }
  }
  if (n_cycles < 1) throw InvalidInput("n_cycles must be >= 1");
  if ((observable == Observable::APi || observable == Observable::Series ||
       observable == Observable::Spectrum) &&
      n_cycles % 2 != 0) {
    throw InvalidInput("n_cycles must be even for spectral observables");
  }
  if (n_max < 2) throw InvalidInput("n_max must be >= 2");
  if (!(pi_pair_tolerance > 0.0)) throw InvalidInput("pi-pair tolerance must be positive");
  if (size() > max_points) {
    throw InvalidInput("sweep has " + std::to_string(size()) + " points, above the cap of " +
                       std::to_string(max_points));
  }
}

std::size_t SweepSpec::size() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<AxisValue> SweepSpec::coordinates(std::size_t index) const {
  std::vector<AxisValue> coords(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto& values = axes[a].values;
    coords[a] = values[index % values.size()];
    index /= values.size();
  }
  return coords;
}

std::pair<SimulationParams, InitialState> SweepSpec::point(std::size_t index) const {
  SimulationParams p = base;
  InitialState state = initial_state;
  const auto coords = coordinates(index);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto& v = coords[a];
    switch (axes[a].name) {
      case AxisName::Epsilon: p.epsilon = std::get<double>(v) / p.T1; break;
      case AxisName::FT2: p.F = std::get<double>(v) / p.T2; break;
      case AxisName::V: p.V = std::get<double>(v) / p.T1; break;
      case AxisName::L: p.L = static_cast<int>(std::get<double>(v)); break;
      case AxisName::Kernel: p.kernel = parse_kernel(std::get<std::string>(v)); break;
      case AxisName::InitialState: {
        const auto& s = std::get<std::string>(v);
        state = s == "all_ones" ? InitialState::all_ones() : InitialState::bits(s);
        break;
      }
    }
  }
  return {p, state};
}

namespace {

// Points sharing (L, Omega, epsilon, V, kernel, T1) share H1. A small window
// of recent factorizations is kept; row-major order makes reuse local.
class StageOneCache {
 public:
  explicit StageOneCache(std::size_t capacity) : capacity_(capacity) {}

  std::shared_ptr<const StageOneFactor> get(const SimulationParams& p) {
    const Key key{p.L, p.Omega, p.epsilon, p.V, static_cast<int>(p.kernel), p.T1};
    std::shared_future<std::shared_ptr<const StageOneFactor>> future;
    std::promise<std::shared_ptr<const StageOneFactor>> promise;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) {
        future = it->second;
      } else {
        future = promise.get_future().share();
        entries_.emplace(key, future);
        order_.push_back(key);
        owner = true;
        while (order_.size() > capacity_) {
          entries_.erase(order_.front());
          order_.pop_front();
        }
      }
    }
    if (owner) {
      try {
        promise.set_value(diagonalize_stage_one(build_h1(p)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  using Key = std::tuple<int, double, double, double, int, double>;
  std::size_t capacity_;
  std::mutex mutex_;
  std::map<Key, std::shared_future<std::shared_ptr<const StageOneFactor>>> entries_;
  std::deque<Key> order_;
};

PointResult evaluate_point(const SweepSpec& spec, std::size_t index, StageOneCache& cache) {
  PointResult out;
  out.coords = spec.coordinates(index);
  try {
    const auto [params, state_desc] = spec.point(index);
    const auto prop = floquet_operator(params, cache.get(params));
    const auto psi0 = state_desc.materialize(params.basis());
    switch (spec.observable) {
      case Observable::APi:
      case Observable::Series:
      case Observable::Spectrum: {
        auto series = autocorrelator_series(prop, psi0, spec.n_cycles, CorrelatorPath::Automatic,
                                            spec.method, state_desc.label());
        auto spectrum = fourier_spectrum(series);
        out.a_pi = spectrum.a_pi;
        if (spec.observable != Observable::APi) {
          out.series = std::move(series);
          out.spectrum = std::move(spectrum);
        }
        break;
      }
      case Observable::Lifetime:
        out.lifetime = lifetime(prop, psi0, spec.n_max, spec.method);
        break;
      case Observable::OverlapTable: {
        out.overlaps = overlaps(prop.spectrum(), psi0);
        out.pi_pair = find_pi_pair(*out.overlaps, spec.pi_pair_tolerance);
        break;
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

constexpr std::string_view kJournalTag = "dtc-sweep-journal";

// Reads completed points from an existing journal written for the same spec.
std::map<std::size_t, PointResult> load_journal(const std::filesystem::path& path,
                                                const json& spec_json) {
  std::map<std::size_t, PointResult> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  if (!std::getline(in, line)) return done;
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("journal", "") != kJournalTag) {
    throw InvalidInput("journal " + path.string() + " has an unrecognized header");
  }
  if (header.at("spec") != spec_json) {
    throw InvalidInput("journal " + path.string() + " belongs to a different sweep");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) continue;  // torn line from an interrupted run
    done[record.at("index").get<std::size_t>()] = point_from_json(record.at("result"));
  }
  return done;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  const std::size_t total = spec.size();
  const json spec_json = spec_to_json(spec);

  SweepResult result;
  result.spec = spec;
  result.points.resize(total);
  std::vector<char> have(total, 0);

  std::ofstream journal;
  if (options.journal) {
    const bool fresh = !std::filesystem::exists(*options.journal) ||
                       std::filesystem::file_size(*options.journal) == 0;
    bool torn_tail = false;
    if (!fresh) {
      std::ifstream tail(*options.journal, std::ios::binary | std::ios::ate);
      tail.seekg(-1, std::ios::end);
      torn_tail = tail.get() != '\n';
    }
    for (auto& [index, point] : load_journal(*options.journal, spec_json)) {
      if (index < total) {
        result.points[index] = std::move(point);
        have[index] = 1;
      }
    }
    journal.open(*options.journal, std::ios::app | std::ios::binary);
    if (!journal) throw InvalidInput("cannot open journal " + options.journal->string());
    if (fresh) {
      journal << json{{"journal", kJournalTag}, {"spec", spec_json}}.dump() << '\n' << std::flush;
    } else if (torn_tail) {
      journal << '\n' << std::flush;
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < total; ++i) {
    if (!have[i]) pending.push_back(i);
  }

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<std::size_t>(pending.size(), 1))));
  StageOneCache cache(std::max<std::size_t>(4, 2 * threads));
  std::atomic<std::size_t> next{0};
  std::mutex sink;
  std::size_t completed = total - pending.size();

  auto worker = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      const std::size_t index = pending[slot];
      PointResult point = evaluate_point(spec, index, cache);
      std::lock_guard lock(sink);
      if (journal.is_open()) {
        journal << json{{"index", index}, {"result", point_to_json(point)}}.dump() << '\n'
                << std::flush;
      }
      result.points[index] = std::move(point);
      ++completed;
      if (options.progress) options.progress(completed, total);
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  json axes = json::array();
  for (const auto& axis : spec.axes) axes.push_back(std::string(to_string(axis.name)));
  result.metadata = json{{"code_version", std::string(code_version())},
                         {"timestamp", utc_timestamp()},
                         {"axes", std::move(axes)},
                         {"spec", spec_json},
                         {"spectrum_normalization", "|sum_{n=1}^{N} C[n] exp(-i omega n)| / N"},
                         {"failed_points", std::count_if(result.points.begin(), result.points.end(),
                                                         [](const auto& p) { return !p.ok(); })}};
  return result;
}

SweepResult kernel_comparison(const SimulationParams& base, std::span<const double> ft2_grid,
                              const ComparisonOptions& options) {
  if (base.L > 12) throw InvalidInput("kernel comparison is limited to L <= 12");
  SweepSpec spec;
  spec.base = base;
  spec.initial_state = options.initial_state;
  spec.n_cycles = options.n_cycles;
  spec.observable = Observable::APi;
  SweepAxis kernels{AxisName::Kernel, {}};
  for (auto k : {KernelRange::NN, KernelRange::NNN, KernelRange::NNNN, KernelRange::ALL}) {
    kernels.values.emplace_back(std::string(to_string(k)));
  }
  SweepAxis forces{AxisName::FT2, {ft2_grid.begin(), ft2_grid.end()}};
  spec.axes = {std::move(kernels), std::move(forces)};
  return run_sweep(spec, options.sweep);
}

SweepResult initial_state_comparison(const SimulationParams& base,
                                     std::span<const std::string> states,
                                     std::span<const double> ft2_values,
                                     const ComparisonOptions& options) {
  SweepSpec spec;
  spec.base = base;
  spec.n_cycles = options.n_cycles;
  spec.observable = Observable::Series;
  SweepAxis state_axis{AxisName::InitialState, {}};
  for (const auto& s : states) {
    if (s != "all_ones" && s.size() != static_cast<std::size_t>(base.L)) {
      throw InvalidInput("initial state '" + s + "' does not have length L=" +
                         std::to_string(base.L));
    }
    state_axis.values.emplace_back(s);
  }
  SweepAxis forces{AxisName::FT2, {ft2_values.begin(), ft2_values.end()}};
  spec.axes = {std::move(state_axis), std::move(forces)};
  return run_sweep(spec, options.sweep);
}

Table sweep_table(const SweepResult& result) {
  const auto& spec = result.spec;
  Table t;
  for (const auto& axis : spec.axes) t.columns.emplace_back(to_string(axis.name));
  switch (spec.observable) {
    case Observable::APi: t.columns.insert(t.columns.end(), {"a_pi"}); break;
    case Observable::Lifetime: t.columns.insert(t.columns.end(), {"N_c", "n_max"}); break;
    case Observable::Series: t.columns.insert(t.columns.end(), {"n", "C"}); break;
    case Observable::Spectrum: t.columns.insert(t.columns.end(), {"omega", "magnitude"}); break;
    case Observable::OverlapTable:
      t.columns.insert(t.columns.end(), {"quasi_energy", "overlap"});
      break;
  }
  t.columns.emplace_back("status");

  for (const auto& point : result.points) {
    std::vector<Cell> prefix;
    for (const auto& c : point.coords) prefix.push_back(axis_cell(c));
    auto emit = [&](std::vector<Cell> tail, std::string status) {
      std::vector<Cell> row = prefix;
      row.insert(row.end(), tail.begin(), tail.end());
      row.emplace_back(std::move(status));
      t.rows.push_back(std::move(row));
    };
    const std::size_t value_columns = t.columns.size() - spec.axes.size() - 1;
    if (!point.ok()) {
      emit(std::vector<Cell>(value_columns, std::string{}), "error: " + *point.error);
      continue;
    }
    switch (spec.observable) {
      case Observable::APi: emit({point.a_pi}, "ok"); break;
      case Observable::Lifetime: {
        const auto& lt = *point.lifetime;
        emit({lt.cycles ? Cell{static_cast<long long>(*lt.cycles)} : Cell{std::string("not_observed")},
              static_cast<long long>(lt.n_max)},
             "ok");
        break;
      }
      case Observable::Series:
        for (std::size_t n = 0; n < point.series->values.size(); ++n) {
          emit({static_cast<long long>(n), point.series->values[n]}, "ok");
        }
        break;
      case Observable::Spectrum:
        for (std::size_t k = 0; k < point.spectrum->frequencies.size(); ++k) {
          emit({point.spectrum->frequencies[k], point.spectrum->magnitudes[k]}, "ok");
        }
        break;
      case Observable::OverlapTable:
        for (const auto& e : point.overlaps->entries) emit({e.quasi_energy, e.overlap}, "ok");
        break;
    }
  }
  return t;
}

json spec_to_json(const SweepSpec& spec) {
  json axes = json::array();
  for (const auto& axis : spec.axes) {
    json values = json::array();
    for (const auto& v : axis.values) values.push_back(axis_value_json(v));
    axes.push_back({{"name", std::string(to_string(axis.name))}, {"values", std::move(values)}});
  }
  return json{{"axes", std::move(axes)},
              {"base", describe(spec.base)},
              {"initial_state", spec.initial_state},
              {"observable", std::string(to_string(spec.observable))},
              {"n_cycles", spec.n_cycles},
              {"n_max", spec.n_max},
              {"pi_pair_tolerance", spec.pi_pair_tolerance},
              {"method", std::string(to_string(spec.method))},
              {"max_points", spec.max_points}};
}

json point_to_json(const PointResult& point) {
  json coords = json::array();
  for (const auto& c : point.coords) coords.push_back(axis_value_json(c));
  json j{{"coords", std::move(coords)}};
  if (point.error) j["error"] = *point.error;
  if (!std::isnan(point.a_pi)) j["a_pi"] = point.a_pi;
  if (point.lifetime) j["lifetime"] = *point.lifetime;
  if (point.series) j["series"] = *point.series;
  if (point.spectrum) j["spectrum"] = *point.spectrum;
  if (point.overlaps) j["overlaps"] = *point.overlaps;
  if (point.pi_pair) j["pi_pair"] = *point.pi_pair;
  return j;
}

PointResult point_from_json(const json& j) {
  PointResult p;
  for (const auto& c : j.at("coords")) p.coords.push_back(axis_value_from_json(c));
  if (j.contains("error")) p.error = j.at("error").get<std::string>();
  if (j.contains("a_pi")) p.a_pi = j.at("a_pi").get<double>();
  if (j.contains("lifetime")) p.lifetime = j.at("lifetime").get<LifetimeResult>();
  if (j.contains("series")) p.series = j.at("series").get<AutocorrelatorSeries>();
  if (j.contains("spectrum")) p.spectrum = j.at("spectrum").get<SpectralResult>();
  if (j.contains("overlaps")) p.overlaps = j.at("overlaps").get<OverlapTable>();
  if (j.contains("pi_pair")) p.pi_pair = j.at("pi_pair").get<PiPair>();
  return p;
}

std::vector<double> grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw InvalidInput("grid needs step > 0 and stop >= start");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count) + 1);
  for (long k = 0; k <= count; ++k) values.push_back(start + static_cast<double>(k) * step);
  return values;
}

}  // namespace dtc
