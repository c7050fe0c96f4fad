// Command-line front end: dtc_sim --config run.json [--out DIR] [--format csv|json]
//                         dtc_sim --figure fig2 [--out DIR] [--threads N]

#include "dtc/commands.hpp"
#include "dtc/config.hpp"
#include "dtc/errors.hpp"
#include "dtc/linalg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dtc::ParseError("", "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stark-stabilized discrete time crystal simulator"};
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::string figure;
  unsigned threads = 1;
  bool quiet = false;

  auto* config_opt = app.add_option("--config", config_path, "JSON run configuration");
  auto* figure_opt = app.add_option("--figure", figure, "Regenerate one figure's data")
                         ->check(CLI::IsMember(std::vector<std::string>(dtc::kFigureIds.begin(),
                                                                        dtc::kFigureIds.end())));
  config_opt->excludes(figure_opt);
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (config_path.empty() && figure.empty()) {
    std::cerr << "error: one of --config or --figure is required\n";
    return kConfigError;
  }

  dtc::RunOptions options;
  options.threads = threads;
  if (!quiet) options.log = [](std::string_view line) { std::cerr << line << '\n'; };

  try {
    dtc::linalg::ensure_sound_backend(argv);
    dtc::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = dtc::parse_config(read_file(config_path));
    } else {
      cfg.command = dtc::Command::Figure;
      cfg.figure = figure;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!format.empty()) cfg.format = dtc::parse_format(format);
    for (const auto& file : dtc::run_command(cfg, options)) std::cout << file.string() << '\n';
  } catch (const dtc::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const dtc::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const dtc::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const dtc::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kNumericError;
  }
  return 0;
}
