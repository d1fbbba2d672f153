#include "weylspec/runner/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "weylspec/error.hpp"
#include "weylspec/metrics.hpp"
#include "weylspec/quantize.hpp"
#include "weylspec/symbol.hpp"

namespace weylspec::runner {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 8> kKinds{{
    {Kind::spectrum, "spectrum"},
    {Kind::sweep, "sweep"},
    {Kind::dirac, "dirac"},
    {Kind::hausdorff_sweep, "hausdorff-sweep"},
    {Kind::edge_sweep, "edge-sweep"},
    {Kind::gap_track, "gap-track"},
    {Kind::equivalence, "equivalence"},
    {Kind::property_suite, "property-suite"},
}};

constexpr std::array<std::pair<std::string_view, Kind>, 9> kCommands{{
    {"spectrum", Kind::spectrum},
    {"sweep", Kind::sweep},
    {"dirac", Kind::dirac},
    {"hausdorff", Kind::hausdorff_sweep},
    {"edges", Kind::edge_sweep},
    {"gaptrack", Kind::gap_track},
    {"equiv", Kind::equivalence},
    {"proptest", Kind::property_suite},
    {"plotdata", Kind::spectrum},  // not an experiment; filtered out below
}};

std::string number(double v) { return fmt::format("{}", v); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) {
    std::vector<std::string> cells(header.begin(), header.end());
    row(cells);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_field(cells[i]);
    }
    text_ += '\n';
  }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

struct Series {
  std::string name;
  std::string x;
  std::string y;
  std::vector<ScalingPoint> points;
};

Json series_json(const Series& s) {
  Json j;
  j["name"] = s.name;
  j["x"] = s.x;
  j["y"] = s.y;
  Json pts = Json::array();
  for (const auto& p : s.points) pts.push_back(Json::array({p.delta, p.metric}));
  j["points"] = std::move(pts);
  try {
    const auto fit = fit_scaling(s.points);
    j["fit"] = {{"exponent", fit.exponent},
                {"log_constant", fit.log_constant},
                {"constant", fit.constant()},
                {"r_squared", fit.r_squared}};
  } catch (const InsufficientDataError& e) {
    j["fit"] = nullptr;
    j["fit_error"] = e.what();
  }
  return j;
}

Json gap_json(const Gap& g) { return {{"lower", g.lower}, {"upper", g.upper}}; }

std::string field(std::string_view section, std::string_view key) { return fmt::format("{}.{}", section, key); }

const std::map<std::string, std::vector<std::string>> kAllowedKeys{
    {"experiment", {"kind", "name", "model", "seed"}},
    {"symbol", {"text", "dim", "field"}},
    {"params", {"*"}},
    {"bloch", {"flux", "grid", "base_grid", "qmax"}},
    {"window", {"half_width", "fibers", "margin", "tau", "cap", "resolution"}},
    {"sweep", {"deltas", "eps"}},
    {"gap", {"lower", "upper", "energy", "sanity_constant"}},
    {"equivalence", {"base_flux"}},
    {"properties", {"pairs", "pair_size", "quadruples", "quadruple_size", "sets", "symbols"}},
};

bool is_sweep(Kind k) {
  return k == Kind::sweep || k == Kind::dirac || k == Kind::hausdorff_sweep || k == Kind::edge_sweep ||
         k == Kind::gap_track;
}

int bounded_int(const Config& c, std::string_view section, std::string_view key, long long fallback, long long lo,
                long long hi) {
  const long long v = c.integer(section, key, fallback);
  if (v < lo || v > hi) throw ConfigError(field(section, key), fmt::format("must lie in [{}, {}], got {}", lo, hi, v));
  return static_cast<int>(v);
}

BlochGrid grid_from(const Config& c, std::string_view key, std::pair<int, int> fallback) {
  const auto [a, b] = c.grid("bloch", key, fallback);
  if (a > 4096 || b > 4096) throw ConfigError(field("bloch", key), "at most 4096 points per axis");
  return BlochGrid(a, b);
}

Symbol spec_symbol(const ExperimentSpec& s) { return parse_symbol(s.symbol_text, s.dim, s.params); }

PerturbationField spec_field(const ExperimentSpec& s) { return parse_field(s.field_text, s.dim, s.params); }

struct Computed {
  SpectralSet set;
  std::optional<RationalFlux> flux;
};

FilterSpec filter_for(const ExperimentSpec& s, int workers) {
  FilterSpec f = s.filter;
  f.workers = workers;
  return f;
}

Computed base_spectrum(const ExperimentSpec& s, const BlochGrid& grid, int workers) {
  if (s.model == Model::bloch) {
    const auto flux = best_rational(s.flux, s.qmax);
    return {bloch_spectrum(flux, grid, workers), flux};
  }
  return {filtered_spectrum(weyl_hopping(spec_symbol(s)), filter_for(s, workers)), std::nullopt};
}

Computed perturbed_spectrum(const ExperimentSpec& s, double delta, int workers) {
  if (s.model == Model::bloch) {
    const auto flux = best_rational(s.flux + delta, s.qmax);
    return {bloch_spectrum(flux, s.grid, workers), flux};
  }
  const Symbol p = perturb(spec_symbol(s), spec_field(s), delta);
  return {filtered_spectrum(weyl_hopping(p), filter_for(s, workers)), std::nullopt};
}

double eps_for(const ExperimentSpec& s, const SpectralSet& set) { return s.eps > 0.0 ? s.eps : set.resolution(); }

Json flux_json(const std::optional<RationalFlux>& f) {
  if (!f) return nullptr;
  return f->to_string();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Json settings_json(const ExperimentSpec& s) {
  Json j;
  j["model"] = s.model == Model::bloch ? "bloch" : "engine";
  j["seed"] = s.seed;
  if (s.model == Model::engine || s.kind == Kind::equivalence) {
    if (s.model == Model::engine) {
      j["symbol"] = s.symbol_text;
      j["dim"] = s.dim;
      j["field"] = s.field_text;
      Json params = Json::object();
      for (const auto& [k, v] : s.params) params[k] = v;
      j["params"] = std::move(params);
    }
    j["window"] = {{"half_width", s.filter.half_width}, {"fibers", s.filter.fibers_per_axis},
                   {"margin", s.filter.margin},         {"tau", s.filter.tau},
                   {"cap", s.filter.cap},               {"resolution", s.filter.resolution}};
  }
  if (s.model == Model::bloch || s.kind == Kind::equivalence) {
    j["bloch"] = {{"flux", s.flux},
                  {"grid", Json::array({s.grid.n1, s.grid.n2})},
                  {"base_grid", Json::array({s.base_grid.n1, s.base_grid.n2})},
                  {"qmax", s.qmax}};
  }
  j["deltas"] = s.deltas;
  j["eps"] = s.eps;
  return j;
}

struct Builder {
  Json report;
  Json failures = Json::array();
  Json checks = Json::array();
  std::vector<Series> series;
  std::size_t attempted = 0;
  bool global_failure = false;

  void fail(double delta, const std::string& message) {
    failures.push_back({{"delta", delta}, {"message", message}});
  }
  void fail_global(const std::string& message) {
    global_failure = true;
    failures.push_back({{"delta", nullptr}, {"message", message}});
  }
  void check(const std::string& name, bool pass, Json detail) {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
  }
};

std::string run_spectrum(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"index", "energy"});
  b.attempted = 1;
  try {
    const auto c = base_spectrum(s, s.grid, workers);
    const auto [lo, hi] = edges(c.set);
    Json gaps = Json::array();
    for (const auto& g : detect_gaps(c.set, eps_for(s, c.set))) gaps.push_back(gap_json(g));
    b.report["results"] = {{"flux", flux_json(c.flux)},
                           {"count", c.set.size()},
                           {"lower_edge", lo},
                           {"upper_edge", hi},
                           {"resolution", c.set.resolution()},
                           {"provenance", to_string(c.set.provenance())},
                           {"gaps", std::move(gaps)}};
    const auto v = c.set.values();
    for (std::size_t i = 0; i < v.size(); ++i) csv.row({std::to_string(i), number(v[i])});
  } catch (const Error& e) {
    b.fail_global(e.what());
  }
  return csv.take();
}

std::string run_sweep(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"delta", "count", "lower_edge", "upper_edge", "gap_count"});
  Json points = Json::array();
  for (double delta : s.deltas) {
    ++b.attempted;
    try {
      const auto c = perturbed_spectrum(s, delta, workers);
      const auto [lo, hi] = edges(c.set);
      const auto gaps = detect_gaps(c.set, eps_for(s, c.set));
      Json gj = Json::array();
      for (const auto& g : gaps) gj.push_back(gap_json(g));
      points.push_back({{"delta", delta},
                        {"flux", flux_json(c.flux)},
                        {"count", c.set.size()},
                        {"lower_edge", lo},
                        {"upper_edge", hi},
                        {"gaps", std::move(gj)}});
      csv.row({number(delta), std::to_string(c.set.size()), number(lo), number(hi), std::to_string(gaps.size())});
    } catch (const Error& e) {
      b.fail(delta, e.what());
    }
  }
  b.report["results"] = {{"points", std::move(points)}};
  return csv.take();
}

std::string run_hausdorff(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"delta", "hausdorff", "ratio"});
  Series hs{"hausdorff", "delta", "hausdorff", {}};
  Json points = Json::array();
  std::vector<double> ratios;
  Computed base;
  try {
    base = base_spectrum(s, s.base_grid, workers);
  } catch (const Error& e) {
    b.fail_global(fmt::format("base spectrum: {}", e.what()));
    return csv.take();
  }
  for (double delta : s.deltas) {
    ++b.attempted;
    try {
      const auto c = perturbed_spectrum(s, delta, workers);
      const double d = hausdorff(c.set, base.set);
      const double ratio = d / std::sqrt(delta);
      ratios.push_back(ratio);
      hs.points.push_back({delta, d});
      points.push_back({{"delta", delta}, {"flux", flux_json(c.flux)}, {"hausdorff", d}, {"ratio", ratio}});
      csv.row({number(delta), number(d), number(ratio)});
    } catch (const Error& e) {
      b.fail(delta, e.what());
    }
  }
  Json results = {{"base_flux", flux_json(base.flux)}, {"points", std::move(points)}};
  if (!ratios.empty()) {
    const double max_ratio = *std::max_element(ratios.begin(), ratios.end());
    const double med = median(ratios);
    results["bound_constant"] = max_ratio;
    results["median_ratio"] = med;
    b.check("no_upward_drift", max_ratio <= 2.0 * med, {{"max_ratio", max_ratio}, {"median_ratio", med}});
  }
  b.report["results"] = std::move(results);
  b.series.push_back(std::move(hs));
  return csv.take();
}

std::string run_edges(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"delta", "lower_deviation", "upper_deviation"});
  Series lower{"lower_edge", "delta", "lower_deviation", {}};
  Series upper{"upper_edge", "delta", "upper_deviation", {}};
  Json points = Json::array();
  Computed base;
  try {
    base = base_spectrum(s, s.base_grid, workers);
  } catch (const Error& e) {
    b.fail_global(fmt::format("base spectrum: {}", e.what()));
    return csv.take();
  }
  const auto [lo0, hi0] = edges(base.set);
  for (double delta : s.deltas) {
    ++b.attempted;
    try {
      const auto c = perturbed_spectrum(s, delta, workers);
      const auto [dl, du] = edge_deviation(c.set, base.set);
      lower.points.push_back({delta, dl});
      upper.points.push_back({delta, du});
      points.push_back(
          {{"delta", delta}, {"flux", flux_json(c.flux)}, {"lower_deviation", dl}, {"upper_deviation", du}});
      csv.row({number(delta), number(dl), number(du)});
    } catch (const Error& e) {
      b.fail(delta, e.what());
    }
  }
  b.report["results"] = {{"base_flux", flux_json(base.flux)},
                         {"base_lower_edge", lo0},
                         {"base_upper_edge", hi0},
                         {"points", std::move(points)}};
  b.series.push_back(std::move(lower));
  b.series.push_back(std::move(upper));
  return csv.take();
}

std::string run_gap_track(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"delta", "lambda", "mu", "lambda_deviation", "mu_deviation", "sanity_lower", "sanity_upper", "interior"});
  Series ls{"lambda", "delta", "lambda_deviation", {}};
  Series ms{"mu", "delta", "mu_deviation", {}};
  Json points = Json::array();
  double lambda0 = 0.0;
  double mu0 = 0.0;
  Computed base;
  try {
    base = base_spectrum(s, s.base_grid, workers);
    if (s.gap_lower) {
      lambda0 = *s.gap_lower;
      mu0 = *s.gap_upper;
    } else {
      const auto g = gap_near(base.set, s.gap_energy, eps_for(s, base.set));
      if (!g) throw EmptySpectrumError(fmt::format("no gap detected near energy {}", s.gap_energy));
      lambda0 = g->lower;
      mu0 = g->upper;
    }
  } catch (const Error& e) {
    b.fail_global(fmt::format("base gap: {}", e.what()));
    return csv.take();
  }
  bool all_interior = true;
  for (double delta : s.deltas) {
    ++b.attempted;
    try {
      const auto c = perturbed_spectrum(s, delta, workers);
      const auto [lam, mu] = track_inner_gap(c.set, lambda0, mu0);
      const double dl = std::abs(lam - lambda0);
      const double dm = std::abs(mu - mu0);
      ls.points.push_back({delta, dl});
      ms.points.push_back({delta, dm});
      Json p = {{"delta", delta}, {"flux", flux_json(c.flux)}, {"lambda", lam}, {"mu", mu},
                {"lambda_deviation", dl}, {"mu_deviation", dm}};
      std::vector<std::string> row{number(delta), number(lam), number(mu), number(dl), number(dm), "", "", ""};
      if (s.sanity_constant > 0.0) {
        const double lo = lambda0 + s.sanity_constant * std::sqrt(delta);
        const double hi = mu0 - s.sanity_constant * std::sqrt(delta);
        const bool interior = lo < hi && lam < lo && hi < mu;
        all_interior = all_interior && interior;
        p["sanity_interval"] = Json::array({lo, hi});
        p["interior"] = interior;
        row[5] = number(lo);
        row[6] = number(hi);
        row[7] = interior ? "true" : "false";
      }
      points.push_back(std::move(p));
      csv.row(row);
    } catch (const Error& e) {
      b.fail(delta, e.what());
    }
  }
  if (s.sanity_constant > 0.0) {
    b.check("sanity_interval_interior", all_interior, {{"constant", s.sanity_constant}});
  }
  b.report["results"] = {{"base_flux", flux_json(base.flux)},
                         {"gap", {{"lower", lambda0}, {"upper", mu0}}},
                         {"points", std::move(points)}};
  b.series.push_back(std::move(ls));
  b.series.push_back(std::move(ms));
  return csv.take();
}

std::string run_dirac(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"delta", "gap_lower", "gap_upper", "width", "center"});
  Series ws{"width", "delta", "gap_width", {}};
  Series cs{"center", "delta", "gap_center", {}};
  Json points = Json::array();
  for (double delta : s.deltas) {
    ++b.attempted;
    try {
      const auto flux = best_rational(s.flux + delta, s.qmax);
      const auto set = bloch_spectrum(flux, s.grid, workers);
      const auto gap = first_positive_gap(set, eps_for(s, set));
      if (!gap) throw EmptySpectrumError(fmt::format("no gap above zero at flux {}", flux.to_string()));
      ws.points.push_back({delta, gap->width()});
      cs.points.push_back({delta, gap->center()});
      points.push_back({{"delta", delta},
                        {"flux", flux.to_string()},
                        {"gap_lower", gap->lower},
                        {"gap_upper", gap->upper},
                        {"width", gap->width()},
                        {"center", gap->center()}});
      csv.row({number(delta), number(gap->lower), number(gap->upper), number(gap->width()), number(gap->center())});
    } catch (const Error& e) {
      b.fail(delta, e.what());
    }
  }
  b.report["results"] = {{"points", std::move(points)}};
  b.series.push_back(std::move(ws));
  b.series.push_back(std::move(cs));
  return csv.take();
}

std::string run_equivalence(const ExperimentSpec& s, int workers, Builder& b) {
  Csv csv({"delta", "flux", "hausdorff"});
  Json points = Json::array();
  double worst = 0.0;
  for (double delta : s.deltas) {
    ++b.attempted;
    try {
      const auto r = flux_equivalence_check(delta, s.base_flux, filter_for(s, workers), s.grid, s.qmax);
      worst = std::max(worst, r.distance);
      points.push_back({{"delta", delta},
                        {"flux", r.flux.to_string()},
                        {"hausdorff", r.distance},
                        {"engine_count", r.engine.size()},
                        {"bloch_count", r.bloch.size()}});
      csv.row({number(delta), r.flux.to_string(), number(r.distance)});
    } catch (const Error& e) {
      b.fail(delta, e.what());
    }
  }
  b.report["results"] = {{"base_flux", s.base_flux},
                         {"units", "symbol (Bloch energies scaled by 1/2)"},
                         {"max_hausdorff", worst},
                         {"points", std::move(points)}};
  return csv.take();
}

std::string run_properties(const ExperimentSpec& s, Builder& b, bool& failed) {
  Csv csv({"check", "trials", "failures", "max_violation"});
  b.attempted = 1;
  Json checks = Json::array();
  int total = 0;
  for (const auto& c : run_property_suite(s.properties, s.seed)) {
    total += c.failures;
    checks.push_back(
        {{"name", c.name}, {"trials", c.trials}, {"failures", c.failures}, {"max_violation", c.max_violation}});
    csv.row({c.name, std::to_string(c.trials), std::to_string(c.failures), number(c.max_violation)});
    b.check(c.name, c.failures == 0, {{"trials", c.trials}, {"failures", c.failures}});
  }
  failed = total > 0;
  b.report["results"] = {{"total_failures", total}, {"checks", std::move(checks)}};
  return csv.take();
}

}  // namespace

std::string_view kind_name(Kind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "spectrum";
}

Kind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
  }
  throw ConfigError("experiment.kind", fmt::format("unknown experiment kind '{}'", name));
}

std::optional<Kind> kind_for_command(std::string_view command) {
  if (command == "plotdata") return std::nullopt;
  for (const auto& [c, k] : kCommands) {
    if (c == command) return k;
  }
  return std::nullopt;
}

ExperimentSpec load_spec(const Config& c, std::optional<Kind> expected, std::optional<std::uint64_t> seed_override) {
  c.require_known(kAllowedKeys);
  ExperimentSpec s;

  const auto kind_text = c.get("experiment", "kind");
  if (kind_text) {
    s.kind = parse_kind(*kind_text);
    if (expected && *expected != s.kind) {
      throw ConfigError("experiment.kind", fmt::format("config is a '{}' experiment but the command runs '{}'",
                                                       *kind_text, kind_name(*expected)));
    }
  } else if (expected) {
    s.kind = *expected;
  } else {
    throw ConfigError("experiment.kind", "missing");
  }

  s.name = c.get_or("experiment", "name", std::string(kind_name(s.kind)));
  if (s.name.empty() || s.name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
                            std::string::npos) {
    throw ConfigError("experiment.name", "use letters, digits, '.', '_' or '-'");
  }
  const long long seed = c.integer("experiment", "seed", 1);
  if (seed < 0) throw ConfigError("experiment.seed", "must be non-negative");
  s.seed = seed_override ? *seed_override : static_cast<std::uint64_t>(seed);

  const auto model = c.get("experiment", "model");
  if (model) {
    if (*model == "bloch") {
      s.model = Model::bloch;
    } else if (*model == "engine") {
      s.model = Model::engine;
    } else {
      throw ConfigError("experiment.model", fmt::format("expected 'bloch' or 'engine', got '{}'", *model));
    }
  } else {
    s.model = c.has("symbol", "text") ? Model::engine : Model::bloch;
  }
  if (s.kind == Kind::dirac || s.kind == Kind::equivalence) s.model = Model::bloch;

  for (const auto& [section, values] : c.sections()) {
    if (section != "params") continue;
    for (const auto& [key, value] : values) s.params[key] = parse_number(value, field("params", key));
  }

  s.dim = bounded_int(c, "symbol", "dim", 1, 1, kMaxDim);
  if (s.model == Model::engine && s.kind != Kind::property_suite) {
    const auto text = c.get("symbol", "text");
    if (!text) throw ConfigError("symbol.text", "required for the engine model");
    s.symbol_text = *text;
    s.field_text = c.get_or("symbol", "field", s.dim == 1 ? "x1" : "x1, x2");
    try {
      (void)spec_symbol(s);
    } catch (const Error& e) {
      throw ConfigError("symbol.text", e.what());
    }
    try {
      (void)spec_field(s);
    } catch (const Error& e) {
      throw ConfigError("symbol.field", e.what());
    }
  }

  const int dim_for_window = s.kind == Kind::equivalence ? 2 : s.dim;
  s.filter.half_width = bounded_int(c, "window", "half_width", 30, 2, 100000);
  s.filter.fibers_per_axis = bounded_int(c, "window", "fibers", dim_for_window == 1 ? 16 : 3, 1, 1024);
  s.filter.margin =
      bounded_int(c, "window", "margin", (s.filter.half_width + 9) / 10, 1, s.filter.half_width - 1);
  s.filter.tau = c.number("window", "tau", 0.1);
  if (!(s.filter.tau > 0.0 && s.filter.tau < 1.0)) throw ConfigError("window.tau", "must lie in (0, 1)");
  const long long cap = c.integer("window", "cap", static_cast<long long>(kDefaultWindowCap));
  if (cap < 1) throw ConfigError("window.cap", "must be positive");
  s.filter.cap = static_cast<std::size_t>(cap);
  s.filter.resolution = c.number("window", "resolution", 0.0);
  if (s.filter.resolution < 0.0) throw ConfigError("window.resolution", "must be >= 0 (0 selects the default)");

  s.flux = c.number("bloch", "flux", 0.5);
  if (s.flux < 0.0) throw ConfigError("bloch.flux", "must be >= 0");
  s.grid = grid_from(c, "grid", {64, 64});
  s.base_grid = grid_from(c, "base_grid", {s.grid.n1, s.grid.n2});
  s.qmax = bounded_int(c, "bloch", "qmax", 256, 1, 100000);

  s.deltas = c.numbers("sweep", "deltas");
  s.eps = c.number("sweep", "eps", 0.0);
  if (s.eps < 0.0) throw ConfigError("sweep.eps", "must be >= 0 (0 selects the default)");
  if (is_sweep(s.kind)) {
    if (s.deltas.empty()) throw ConfigError("sweep.deltas", "required for sweep experiments");
    for (double d : s.deltas) {
      if (!(d > 0.0)) throw ConfigError("sweep.deltas", "every delta must be > 0");
    }
    const bool up = std::is_sorted(s.deltas.begin(), s.deltas.end(), std::less_equal<>());
    const bool down = std::is_sorted(s.deltas.begin(), s.deltas.end(), std::greater_equal<>());
    bool strict = true;
    for (std::size_t i = 1; i < s.deltas.size(); ++i) strict = strict && s.deltas[i] != s.deltas[i - 1];
    if (!(up || down) || !strict) throw ConfigError("sweep.deltas", "must be strictly monotone");
  }
  if (s.kind == Kind::equivalence) {
    if (s.deltas.empty()) s.deltas = {0.0};
    for (double d : s.deltas) {
      if (!(d > -1.0)) throw ConfigError("sweep.deltas", "every delta must be > -1");
    }
  }

  if (c.has("gap", "lower") != c.has("gap", "upper")) {
    throw ConfigError(c.has("gap", "lower") ? "gap.upper" : "gap.lower", "gap edges come in pairs");
  }
  if (c.has("gap", "lower")) {
    s.gap_lower = c.number("gap", "lower", 0.0);
    s.gap_upper = c.number("gap", "upper", 0.0);
    if (!(*s.gap_lower < *s.gap_upper)) throw ConfigError("gap.upper", "must exceed gap.lower");
  }
  s.gap_energy = c.number("gap", "energy", 0.0);
  s.sanity_constant = c.number("gap", "sanity_constant", 0.0);
  if (s.sanity_constant < 0.0) throw ConfigError("gap.sanity_constant", "must be >= 0");

  s.base_flux = c.number("equivalence", "base_flux", 0.5);
  if (!(s.base_flux > 0.0 && s.base_flux < 1.0)) throw ConfigError("equivalence.base_flux", "must lie in (0, 1)");

  s.properties.pairs = bounded_int(c, "properties", "pairs", 200, 0, 1000000);
  s.properties.pair_size = bounded_int(c, "properties", "pair_size", 20, 1, 512);
  s.properties.quadruples = bounded_int(c, "properties", "quadruples", 100, 0, 1000000);
  s.properties.quadruple_size = bounded_int(c, "properties", "quadruple_size", 16, 1, 512);
  s.properties.sets = bounded_int(c, "properties", "sets", 500, 0, 10000000);
  s.properties.symbols = bounded_int(c, "properties", "symbols", 200, 0, 1000000);
  return s;
}

Artifact execute(const Config& config, const ExperimentSpec& s, int workers) {
  Builder b;
  b.report["schema"] = "weylspec.report/1";
  b.report["kind"] = kind_name(s.kind);
  b.report["name"] = s.name;
  Json sections = Json::object();
  for (const auto& [name, values] : config.sections()) {
    Json sec = Json::object();
    for (const auto& [k, v] : values) sec[k] = v;
    sections[name] = std::move(sec);
  }
  b.report["config"] = {{"text", config.text()}, {"sections", std::move(sections)}};
  b.report["settings"] = settings_json(s);
  b.report["results"] = Json::object();

  Artifact a;
  a.stem = s.name;
  switch (s.kind) {
    case Kind::spectrum:
      a.csv = run_spectrum(s, workers, b);
      break;
    case Kind::sweep:
      a.csv = run_sweep(s, workers, b);
      break;
    case Kind::hausdorff_sweep:
      a.csv = run_hausdorff(s, workers, b);
      break;
    case Kind::edge_sweep:
      a.csv = run_edges(s, workers, b);
      break;
    case Kind::gap_track:
      a.csv = run_gap_track(s, workers, b);
      break;
    case Kind::dirac:
      a.csv = run_dirac(s, workers, b);
      break;
    case Kind::equivalence:
      a.csv = run_equivalence(s, workers, b);
      break;
    case Kind::property_suite:
      a.csv = run_properties(s, b, a.checks_failed);
      break;
  }
  Json series = Json::array();
  for (const auto& sr : b.series) series.push_back(series_json(sr));
  b.report["series"] = std::move(series);
  b.report["checks"] = std::move(b.checks);
  a.failures = b.failures.size();
  a.total_failure = b.global_failure || (a.failures > 0 && a.failures >= b.attempted);
  b.report["failures"] = std::move(b.failures);
  a.report = b.report.dump(2) + "\n";
  return a;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                     tm.tm_min, tm.tm_sec);
}

}  // namespace

RunResult run(const Config& config, std::optional<Kind> expected, const RunOptions& options) {
  const auto spec = load_spec(config, expected, options.seed);
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.artifact = execute(config, spec, options.workers);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(options.out_dir);
  r.csv = options.out_dir / (spec.name + ".csv");
  r.report = options.out_dir / (spec.name + ".json");
  r.meta = options.out_dir / (spec.name + ".meta.json");
  write_file(r.csv, r.artifact.csv);
  write_file(r.report, r.artifact.report);
  const Json meta = {{"started_utc", started},
                     {"elapsed_seconds", elapsed},
                     {"workers", options.workers},
                     {"version", "0.1.0"}};
  write_file(r.meta, meta.dump(2) + "\n");
  r.exit_code = r.artifact.total_failure ? 2 : (r.artifact.checks_failed ? 1 : 0);
  return r;
}

PlotStyle parse_plot_style(std::string_view name) {
  if (name == "loglog") return PlotStyle::loglog;
  if (name == "linear") return PlotStyle::linear;
  throw ConfigError("style", fmt::format("expected 'loglog' or 'linear', got '{}'", name));
}

namespace {

Json parse_report(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(fmt::format("report is not valid JSON: {}", e.what()));
  }
}

std::string series_plot(const Json& s, PlotStyle style) {
  const auto& pts = s.at("points");
  if (pts.empty()) throw EmptySpectrumError(fmt::format("series '{}' has no points", s.at("name").get<std::string>()));
  const bool has_fit = s.contains("fit") && !s.at("fit").is_null();
  double exponent = 0.0;
  double log_c = 0.0;
  std::string out = fmt::format("# series: {}\n# style: {}\n# columns: {} {} fit\n", s.at("name").get<std::string>(),
                                style == PlotStyle::loglog ? "loglog" : "linear", s.at("x").get<std::string>(),
                                s.at("y").get<std::string>());
  if (has_fit) {
    exponent = s.at("fit").at("exponent").get<double>();
    log_c = s.at("fit").at("log_constant").get<double>();
    out += fmt::format("# fit: y = {} * x^{} (r_squared {})\n", std::exp(log_c), exponent,
                       s.at("fit").at("r_squared").get<double>());
  }
  auto fit_y = [&](double x) { return has_fit ? number(std::exp(log_c + exponent * std::log(x))) : "nan"; };
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& p : pts) {
    const double x = p.at(0).get<double>();
    const double y = p.at(1).get<double>();
    if (style == PlotStyle::loglog && (x <= 0.0 || y <= 0.0)) {
      out += fmt::format("# excluded (non-positive on log axes): {} {}\n", number(x), number(y));
      continue;
    }
    lo = first ? x : std::min(lo, x);
    hi = first ? x : std::max(hi, x);
    first = false;
    out += fmt::format("{} {} {}\n", number(x), number(y), fit_y(x));
  }
  if (has_fit && !first && hi > lo) {
    out += "\n\n# fitted line\n";
    constexpr int kSamples = 25;
    for (int i = 0; i < kSamples; ++i) {
      const double t = static_cast<double>(i) / (kSamples - 1);
      const double x = style == PlotStyle::loglog ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                                  : lo + t * (hi - lo);
      out += fmt::format("{} nan {}\n", number(x), fit_y(x));
    }
  }
  return out;
}

}  // namespace

std::string plot_data(const std::string& report_json, std::string_view series, PlotStyle style) {
  const Json report = parse_report(report_json);
  for (const auto& s : report.at("series")) {
    if (s.at("name").get<std::string>() == series) return series_plot(s, style);
  }
  throw Error(fmt::format("report has no series named '{}'", series));
}

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& report, PlotStyle style,
                                                  const std::filesystem::path& out_dir) {
  const Json j = parse_report(read_file(report));
  if (!j.contains("series") || j.at("series").empty()) {
    throw EmptySpectrumError("report contains no plottable series");
  }
  std::filesystem::create_directories(out_dir);
  const std::string stem = j.at("name").get<std::string>();
  std::vector<std::filesystem::path> written;
  for (const auto& s : j.at("series")) {
    const auto path = out_dir / fmt::format("{}.{}.dat", stem, s.at("name").get<std::string>());
    write_file(path, series_plot(s, style));
    written.push_back(path);
  }
  return written;
}

}  // namespace weylspec::runner
