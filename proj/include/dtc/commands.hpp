#pragma once

// Single-run and sweep dispatch, plus the figure datasets.

#include "dtc/config.hpp"
#include "dtc/io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <functional>
#include <string_view>
#include <vector>

namespace dtc {

struct RunOptions {
  unsigned threads = 1;
  /// Progress lines for the terminal; may be empty.
  std::function<void(std::string_view)> log;
};

/// Runs cfg.command and returns the data files written (sidecars excluded).
/// The output directory is created and probed before any computation.
std::vector<std::filesystem::path> run_command(const RunConfig& cfg, const RunOptions& options = {});

/// Writes `table` as <stem>.<ext> with a <file>.meta.json sidecar holding
/// `metadata` plus the code version and a timestamp.
std::filesystem::path emit_table(const Table& table, const std::filesystem::path& stem,
                                 OutputFormat format, nlohmann::json metadata);

inline constexpr std::array<std::string_view, 8> kFigureIds = {
    "fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5"};

/// Regenerates the data behind one figure: one file per panel and a
/// <id>_manifest.json listing every parameter set used.
std::vector<std::filesystem::path> figure_command(std::string_view figure_id,
                                                  const std::filesystem::path& output_dir,
                                                  OutputFormat format,
                                                  const RunOptions& options = {});

}  // namespace dtc
