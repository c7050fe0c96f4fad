#include "dtc/config.hpp"

#include "dtc/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <regex>
#include <set>

namespace dtc {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Series: return "series";
    case Command::Spectrum: return "spectrum";
    case Command::Overlaps: return "overlaps";
    case Command::Lifetime: return "lifetime";
    case Command::Sweep: return "sweep";
    case Command::Figure: return "figure";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::Series, Command::Spectrum, Command::Overlaps, Command::Lifetime,
                 Command::Sweep, Command::Figure}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidInput("unknown command '" + std::string(name) + "'");
}

namespace {

std::optional<double> parse_plain(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || end != last) return std::nullopt;
  return v;
}

}  // namespace

double parse_scalar(const json& value, const std::string& key_path) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ParseError(key_path, "expected a number or a multiple of pi");
  std::string text = value.get<std::string>();
  std::erase_if(text, [](char c) { return c == ' '; });
  if (auto v = parse_plain(text)) return *v;

  // [sign][coef[*]]pi[/denom]
  static const std::regex form(R"(([+-]?)((?:\d+(?:\.\d*)?|\.\d+)\*?)?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)))?)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) {
    throw ParseError(key_path, "cannot read '" + value.get<std::string>() + "' as a number");
  }
  double coef = 1.0;
  if (m[2].matched) {
    std::string c = m[2].str();
    if (c.back() == '*') c.pop_back();
    coef = *parse_plain(c);
  }
  double denom = m[3].matched ? *parse_plain(m[3].str()) : 1.0;
  if (denom == 0.0) throw ParseError(key_path, "division by zero");
  const double v = coef * std::numbers::pi / denom;
  return m[1].str() == "-" ? -v : v;
}

namespace {

class Reader {
 public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ParseError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key);
  }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& at(const std::string& key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  std::string string(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ParseError(path(key), "expected a string");
    return v.get<std::string>();
  }

  long long integer(const std::string& key) {
    const auto& v = at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    throw ParseError(path(key), "expected an integer");
  }

  double scalar(const std::string& key) { return parse_scalar(at(key), path(key)); }

  // The first present key among alternatives; more than one is a conflict.
  std::optional<std::string> one_of(std::initializer_list<const char*> keys) {
    std::optional<std::string> found;
    for (const char* k : keys) {
      if (!has(k)) continue;
      if (found) {
        throw InvalidInput("conflicting keys '" + path(*found) + "' and '" + path(k) +
                           "' set the same quantity");
      }
      found = k;
    }
    return found;
  }

  void reject_unknown() const {
    for (const auto& [key, _] : doc_.items()) {
      if (!seen_.contains(key)) throw ParseError(path(key), "unknown key");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

InitialState parse_initial_state(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "all_ones") return InitialState::all_ones();
    try {
      return InitialState::bits(s);
    } catch (const InvalidInput& e) {
      throw ParseError(path, e.what());
    }
  }
  if (!v.is_array()) {
    throw ParseError(path, "expected a bit string, \"all_ones\" or [[index, re, im], ...]");
  }
  std::vector<AmplitudeEntry> entries;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& e = v[i];
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || e[0].get<long long>() < 0 ||
        !e[1].is_number() || !e[2].is_number()) {
      throw ParseError(p, "expected [index, re, im] with a non-negative integer index");
    }
    entries.push_back({e[0].get<BasisIndex>(), e[1].get<double>(), e[2].get<double>()});
  }
  if (entries.empty()) throw ParseError(path, "amplitude list is empty");
  return InitialState::amplitudes(std::move(entries));
}

SweepAxis parse_axis(const json& doc, const std::string& path) {
  Reader r(doc, path);
  if (!r.has("name")) throw ParseError(r.path("name"), "missing");
  SweepAxis axis;
  try {
    axis.name = parse_axis_name(r.string("name"));
  } catch (const InvalidInput& e) {
    throw ParseError(r.path("name"), e.what());
  }
  const bool text = axis.name == AxisName::Kernel || axis.name == AxisName::InitialState;
  const auto source = r.one_of({"values", "range"});
  if (!source) throw ParseError(path, "axis needs 'values' or 'range'");
  if (*source == "values") {
    const auto& values = r.at("values");
    if (!values.is_array()) throw ParseError(r.path("values"), "expected an array");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string p = r.path("values") + "[" + std::to_string(i) + "]";
      if (text) {
        if (!values[i].is_string()) throw ParseError(p, "expected a string");
        axis.values.emplace_back(values[i].get<std::string>());
      } else {
        axis.values.emplace_back(parse_scalar(values[i], p));
      }
    }
  } else {
    if (text) throw ParseError(r.path("range"), "range is only valid on numeric axes");
    const auto& range = r.at("range");
    if (!range.is_array() || range.size() != 3) {
      throw ParseError(r.path("range"), "expected [start, stop, step]");
    }
    const double start = parse_scalar(range[0], r.path("range") + "[0]");
    const double stop = parse_scalar(range[1], r.path("range") + "[1]");
    const double step = parse_scalar(range[2], r.path("range") + "[2]");
    for (double v : grid(start, stop, step)) axis.values.emplace_back(v);
  }
  r.reject_unknown();
  return axis;
}

}  // namespace

RunConfig parse_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  Reader r(doc, "");
  RunConfig cfg;

  if (r.has("command")) cfg.command = parse_command(r.string("command"));
  if (!r.has("L")) throw ParseError("L", "missing");
  const long long sites = r.integer("L");
  if (sites < 1 || sites > BasisConfig::kMaxSites) {
    throw InvalidInput("L must be in [1, " + std::to_string(BasisConfig::kMaxSites) + "], got " +
                       std::to_string(sites));
  }
  auto& p = cfg.params;
  p.L = static_cast<int>(sites);
  if (r.has("T1")) p.T1 = r.scalar("T1");
  if (r.has("T2")) p.T2 = r.scalar("T2");
  if (!(p.T1 > 0.0) || !(p.T2 > 0.0)) throw InvalidInput("T1 and T2 must be positive");
  if (r.has("kernel")) {
    try {
      p.kernel = parse_kernel(r.string("kernel"));
    } catch (const InvalidInput& e) {
      throw ParseError("kernel", e.what());
    }
  }

  // Each quantity: raw rate key, then dimensionless keys with their duration.
  p.Omega = std::numbers::pi / 2.0 / p.T1;
  if (auto k = r.one_of({"Omega", "OmegaT1"})) {
    p.Omega = r.scalar(*k) / (*k == "Omega" ? 1.0 : p.T1);
  }
  if (auto k = r.one_of({"epsilon", "epsT1"})) {
    p.epsilon = r.scalar(*k) / (*k == "epsilon" ? 1.0 : p.T1);
  }
  if (auto k = r.one_of({"V", "VT1", "VT2"})) {
    const double scale = *k == "V" ? 1.0 : (*k == "VT1" ? p.T1 : p.T2);
    p.V = r.scalar(*k) / scale;
  }
  if (auto k = r.one_of({"F", "FT2"})) p.F = r.scalar(*k) / (*k == "F" ? 1.0 : p.T2);
  p.validate();

  if (r.has("initial_state")) cfg.initial_state = parse_initial_state(r.at("initial_state"), "initial_state");
  try {
    cfg.initial_state.materialize(p.basis());
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("initial_state: ") + e.what());
  }

  if (r.has("n_cycles")) {
    const auto n = r.integer("n_cycles");
    if (n < 1 || n > 100'000'000) throw InvalidInput("n_cycles must be in [1, 1e8]");
    cfg.n_cycles = static_cast<int>(n);
  }
  if (r.has("n_max")) {
    cfg.n_max = static_cast<long>(r.integer("n_max"));
    if (cfg.n_max < 2) throw InvalidInput("n_max must be >= 2");
  }
  if (r.has("output")) cfg.output_dir = r.string("output");
  if (r.has("format")) {
    try {
      cfg.format = parse_format(r.string("format"));
    } catch (const InvalidInput& e) {
      throw ParseError("format", e.what());
    }
  }
  if (r.has("seed")) cfg.seed = r.integer("seed");
  if (r.has("pi_pair_tolerance")) {
    cfg.pi_pair_tolerance = r.scalar("pi_pair_tolerance");
    if (!(cfg.pi_pair_tolerance > 0.0)) throw InvalidInput("pi_pair_tolerance must be positive");
  }
  if (r.has("method")) {
    try {
      cfg.method = parse_method(r.string("method"));
    } catch (const InvalidInput& e) {
      throw ParseError("method", e.what());
    }
  }
  if (r.has("figure")) cfg.figure = r.string("figure");

  if (r.has("sweep")) {
    Reader s(r.at("sweep"), "sweep");
    SweepSpec spec;
    spec.base = p;
    spec.initial_state = cfg.initial_state;
    spec.n_cycles = cfg.n_cycles;
    spec.n_max = cfg.n_max;
    spec.pi_pair_tolerance = cfg.pi_pair_tolerance;
    spec.method = cfg.method;
    if (!s.has("axes")) throw ParseError("sweep.axes", "missing");
    const auto& axes = s.at("axes");
    if (!axes.is_array()) throw ParseError("sweep.axes", "expected an array");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      spec.axes.push_back(parse_axis(axes[i], "sweep.axes[" + std::to_string(i) + "]"));
    }
    if (s.has("observable")) {
      try {
        spec.observable = parse_observable(s.string("observable"));
      } catch (const InvalidInput& e) {
        throw ParseError("sweep.observable", e.what());
      }
    }
    if (s.has("max_points")) {
      const auto cap = s.integer("max_points");
      if (cap < 1) throw InvalidInput("sweep.max_points must be positive");
      spec.max_points = static_cast<std::size_t>(cap);
    }
    if (s.has("journal")) cfg.journal = s.string("journal");
    s.reject_unknown();
    spec.validate();
    cfg.sweep = std::move(spec);
  }
  r.reject_unknown();

  if (cfg.command == Command::Sweep && !cfg.sweep) throw ParseError("sweep", "missing for command sweep");
  if (cfg.command != Command::Sweep && cfg.sweep) {
    throw InvalidInput("a 'sweep' block needs command \"sweep\"");
  }
  if (cfg.command == Command::Figure && !cfg.figure) throw ParseError("figure", "missing for command figure");
  if (cfg.command == Command::Spectrum && cfg.n_cycles % 2 != 0) {
    throw InvalidInput("n_cycles must be even for the spectrum command");
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j{{"command", std::string(to_string(cfg.command))},
         {"params", cfg.params},
         {"dimensionless", describe(cfg.params)},
         {"initial_state", cfg.initial_state},
         {"n_cycles", cfg.n_cycles},
         {"n_max", cfg.n_max},
         {"format", std::string(extension(cfg.format).substr(1))},
         {"pi_pair_tolerance", cfg.pi_pair_tolerance},
         {"method", std::string(to_string(cfg.method))}};
  j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  if (cfg.figure) j["figure"] = *cfg.figure;
  if (cfg.sweep) j["sweep"] = spec_to_json(*cfg.sweep);
  return j;
}

}  // namespace dtc
