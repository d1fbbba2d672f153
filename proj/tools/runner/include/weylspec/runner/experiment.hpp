#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weylspec/hofstadter.hpp"
#include "weylspec/runner/config.hpp"
#include "weylspec/runner/properties.hpp"
#include "weylspec/spectrum.hpp"

namespace weylspec::runner {

enum class Kind { spectrum, sweep, dirac, hausdorff_sweep, edge_sweep, gap_track, equivalence, property_suite };

std::string_view kind_name(Kind kind);
Kind parse_kind(std::string_view name);
/// CLI subcommand -> kind (`hausdorff` -> hausdorff-sweep, ...).
std::optional<Kind> kind_for_command(std::string_view command);

enum class Model { bloch, engine };

/// Validated, defaults-resolved view of a config.
struct ExperimentSpec {
  Kind kind = Kind::spectrum;
  std::string name;
  Model model = Model::bloch;
  std::uint64_t seed = 1;

  std::string symbol_text;
  int dim = 1;
  std::string field_text;
  ParamMap params;
  FilterSpec filter;

  double flux = 0.5;
  BlochGrid grid{64, 64};
  BlochGrid base_grid{64, 64};
  std::int64_t qmax = 256;

  std::vector<double> deltas;
  double eps = 0.0;  // 0: per-spectrum default

  std::optional<double> gap_lower;
  std::optional<double> gap_upper;
  double gap_energy = 0.0;
  double sanity_constant = 0.0;

  double base_flux = 0.5;
  PropertyCounts properties;
};

/// `expected` is the kind implied by the CLI subcommand; a conflicting
/// `experiment.kind` is a ConfigError.
ExperimentSpec load_spec(const Config& config, std::optional<Kind> expected = std::nullopt,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

/// In-memory result of one experiment: CSV text, JSON report text.
struct Artifact {
  std::string stem;
  std::string csv;
  std::string report;
  std::size_t failures = 0;
  bool total_failure = false;
  bool checks_failed = false;
};

/// Pure: the same config and seed give the same bytes for any worker count.
Artifact execute(const Config& config, const ExperimentSpec& spec, int workers);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int exit_code = 0;
  std::filesystem::path csv;
  std::filesystem::path report;
  std::filesystem::path meta;
  Artifact artifact;
};

/// Exit codes: 0 success, 1 property-suite failures,
/// 2 every point failed.
RunResult run(const Config& config, std::optional<Kind> expected, const RunOptions& options);

enum class PlotStyle { loglog, linear };

PlotStyle parse_plot_style(std::string_view name);

/// Whitespace-delimited (x, y, fit-y) text for one report series.
std::string plot_data(const std::string& report_json, std::string_view series, PlotStyle style);

/// Writes one `<stem>.<series>.dat` file per series of the report.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& report, PlotStyle style,
                                                  const std::filesystem::path& out_dir);

}  // namespace weylspec::runner
