#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "weylspec/error.hpp"
#include "weylspec/runner/experiment.hpp"

namespace runner = weylspec::runner;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "Experiment config (INI)");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for randomized suites (overrides experiment.seed)");
}

int run_experiment(const std::string& command, const Common& c) {
  const auto config = c.config.empty() ? runner::Config::parse("") : runner::Config::load(c.config);
  runner::RunOptions opts;
  opts.out_dir = c.out;
  opts.workers = c.workers;
  opts.seed = c.seed;
  const auto result = runner::run(config, runner::kind_for_command(command), opts);
  fmt::print("wrote {}\nwrote {}\n", result.csv.string(), result.report.string());
  if (result.artifact.failures > 0) {
    fmt::print(stderr, "{} point(s) failed; see the report's failures list\n", result.artifact.failures);
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral stability experiments for Weyl-quantized lattice operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "weylspec 0.1.0");

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry experiments[] = {
      {"spectrum", "Spectrum of one operator (Bloch or filtered finite sections)"},
      {"sweep", "Spectrum summaries over a perturbation sweep"},
      {"dirac", "Gap opening near the half-flux Dirac point"},
      {"hausdorff", "Hausdorff distance to the unperturbed spectrum over a sweep"},
      {"edges", "Spectral edge deviations over a sweep"},
      {"gaptrack", "Track the edges of an interior gap over a sweep"},
      {"equiv", "Quantization pipeline against the Bloch model at equal flux"},
      {"proptest", "Randomized invariant checks"},
  };
  Common common;
  std::string selected;
  for (const auto& e : experiments) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, common, std::string(e.name) != "proptest");
    cmd->callback([&selected, name = e.name] { selected = name; });
  }

  std::string report;
  std::string style = "loglog";
  auto* plot = app.add_subcommand("plotdata", "Plot-ready columns (x, y, fit) from a report");
  plot->add_option("report", report, "Report JSON written by an experiment")->required()->check(CLI::ExistingFile);
  plot->add_option("--style", style, "loglog or linear")->capture_default_str();
  plot->add_option("--out", common.out, "Output directory")->capture_default_str();
  plot->callback([&selected] { selected = "plotdata"; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (selected == "plotdata") {
      for (const auto& p : runner::emit_plot_data(report, runner::parse_plot_style(style), common.out)) {
        fmt::print("wrote {}\n", p.string());
      }
      return 0;
    }
    return run_experiment(selected, common);
  } catch (const weylspec::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 4;
  }
}
