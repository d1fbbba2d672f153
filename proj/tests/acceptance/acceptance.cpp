// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "weylspec/hofstadter.hpp"
#include "weylspec/metrics.hpp"
#include "weylspec/runner/properties.hpp"
#include "weylspec/spectrum.hpp"
#include "weylspec/symbol.hpp"

using namespace weylspec;

namespace {

const double kSqrt8 = 2.0 * std::sqrt(2.0);
const std::vector<double> kDiracDeltas{1.0 / 32, 1.0 / 48, 1.0 / 64, 1.0 / 96, 1.0 / 128};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string join(const std::vector<double>& v, int digits = 4) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{:.{}g}", i ? " " : "", v[i], digits);
  return out;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Spectra shared by the half-flux criteria, computed once.
struct HalfFluxSweep {
  SpectralSet base;
  std::vector<SpectralSet> detuned;
  std::vector<RationalFlux> fluxes;
};

const HalfFluxSweep& half_flux_sweep() {
  static const HalfFluxSweep sweep = [] {
    HalfFluxSweep s;
    s.base = bloch_spectrum(RationalFlux(1, 2), BlochGrid(256, 256), workers());
    for (double d : kDiracDeltas) {
      s.fluxes.push_back(best_rational(0.5 + d, 256));
      s.detuned.push_back(bloch_spectrum(s.fluxes.back(), BlochGrid(64, 64), workers()));
    }
    return s;
  }();
  return sweep;
}

// Largest d_h(detuned, base)/sqrt(delta) over the half-flux sweep.
double hausdorff_constant = 0.0;

Outcome half_flux_baseline() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = bloch_spectrum(RationalFlux(1, 2), BlochGrid(512, 512), workers());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto [lo, hi] = edges(s);
  double min_abs = INFINITY;
  for (double e : s.values()) min_abs = std::min(min_abs, std::abs(e));
  const bool pass = std::abs(lo + kSqrt8) <= 1e-6 && std::abs(hi - kSqrt8) <= 1e-6 && min_abs <= 1e-2 && seconds < 5.0;
  return {pass, fmt::format("edges ({:.10f}, {:.10f}), min|E| {:.3g}, {:.2f} s", lo, hi, min_abs, seconds)};
}

Outcome dirac_gap_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = dirac_gap_experiment(kDiracDeltas, 256, BlochGrid(64, 64), 0.0, workers());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto in_band = [](double e) { return e >= 0.4 && e <= 0.6; };
  const bool all_found = std::all_of(r.points.begin(), r.points.end(), [](const DiracPoint& p) { return p.gap.has_value(); });
  const bool pass = all_found && in_band(r.width.exponent) && in_band(r.center.exponent) && r.width.r_squared >= 0.95 &&
                    r.center.r_squared >= 0.95 && seconds < 300.0;
  return {pass, fmt::format("width exponent {:.4f} (r2 {:.4f}), center exponent {:.4f} (r2 {:.4f}), {:.1f} s",
                            r.width.exponent, r.width.r_squared, r.center.exponent, r.center.r_squared, seconds)};
}

Outcome hausdorff_upper_bound() {
  const auto& sw = half_flux_sweep();
  std::vector<double> ratios;
  for (std::size_t i = 0; i < kDiracDeltas.size(); ++i) {
    ratios.push_back(hausdorff(sw.detuned[i], sw.base) / std::sqrt(kDiracDeltas[i]));
  }
  hausdorff_constant = *std::max_element(ratios.begin(), ratios.end());
  const double med = median(ratios);
  const bool pass = std::isfinite(hausdorff_constant) && hausdorff_constant <= 2.0 * med;
  return {pass, fmt::format("ratios [{}], constant C = {:.4f}, median {:.4f}", join(ratios), hausdorff_constant, med)};
}

Outcome lipschitz_edges() {
  const auto& sw = half_flux_sweep();
  std::vector<ScalingPoint> points;
  std::vector<double> deviations;
  for (std::size_t i = 0; i < kDiracDeltas.size(); ++i) {
    const double dev = std::abs(edges(sw.detuned[i]).second - kSqrt8);
    deviations.push_back(dev);
    points.push_back({kDiracDeltas[i], dev});
  }
  const auto fit = fit_scaling(points);
  const bool pass = fit.exponent >= 0.8 && fit.r_squared >= 0.9;
  return {pass, fmt::format("upper-edge deviations [{}], exponent {:.4f} (r2 {:.4f})", join(deviations),
                            fit.exponent, fit.r_squared)};
}

Outcome gap_edge_tracking() {
  const std::vector<double> deltas{1.0 / 48, 1.0 / 96, 1.0 / 192};
  const auto base = bloch_spectrum(RationalFlux(1, 3), BlochGrid(64, 64), workers());
  const auto gaps = detect_gaps(base, base.resolution());
  if (gaps.size() != 2) return {false, fmt::format("expected two gaps at flux 1/3, found {}", gaps.size())};
  const Gap gap = gaps[1];
  const double c = hausdorff_constant;
  std::vector<ScalingPoint> lambda_points;
  std::vector<ScalingPoint> mu_points;
  bool interior = c > 0.0;
  std::string detail;
  for (double d : deltas) {
    const auto flux = best_rational(1.0 / 3.0 + d, 256);
    const auto s = bloch_spectrum(flux, BlochGrid(16, 16), workers());
    const auto [lam, mu] = track_inner_gap(s, gap.lower, gap.upper);
    lambda_points.push_back({d, std::abs(lam - gap.lower)});
    mu_points.push_back({d, std::abs(mu - gap.upper)});
    const double lo = gap.lower + c * std::sqrt(d);
    const double hi = gap.upper - c * std::sqrt(d);
    interior = interior && lo < hi && lam < lo && hi < mu;
    detail += fmt::format(" {}: ({:.4f}, {:.4f}) in [{:.4f}, {:.4f}]", flux.to_string(), lo, hi, lam, mu);
  }
  const auto lf = fit_scaling(lambda_points);
  const auto mf = fit_scaling(mu_points);
  const bool pass = lf.exponent >= 0.8 && mf.exponent >= 0.8 && interior;
  return {pass, fmt::format("gap ({:.4f}, {:.4f}), lambda exponent {:.4f}, mu exponent {:.4f}, C = {:.4f}, sanity "
                            "interval {};{}",
                            gap.lower, gap.upper, lf.exponent, mf.exponent, c, interior ? "interior" : "NOT interior",
                            detail)};
}

FilterSpec oracle_filter() {
  FilterSpec f;
  f.half_width = 30;
  f.fibers_per_axis = 3;
  f.margin = 3;
  f.tau = 0.1;
  f.workers = workers();
  return f;
}

Outcome finite_section_oracle() {
  std::string detail;
  bool pass = true;
  for (const auto& flux : {RationalFlux(1, 2), RationalFlux(1, 3)}) {
    const auto engine = filtered_spectrum(weyl_hopping(harper_symbol(flux.value())), oracle_filter());
    const auto bloch = rescaled(bloch_spectrum(flux, BlochGrid(128, 128), workers()), kSymbolPerBloch);
    const double d = hausdorff(engine, bloch);
    pass = pass && d <= 0.1;
    detail += fmt::format("{}flux {}: d_h {:.4f} ({} eigenvalues kept)", detail.empty() ? "" : ", ", flux.to_string(),
                          d, engine.size());
  }
  return {pass, detail};
}

Outcome nonlinear_field_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> deltas{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  const Symbol symbol = parse_symbol("cos(xi1)+cos(x1)", 1);
  const PerturbationField field = parse_field("sin(x1)", 1);
  FilterSpec f;
  f.half_width = 1500;
  f.fibers_per_axis = 16;
  f.workers = workers();
  const auto base = filtered_spectrum(weyl_hopping(symbol), f);
  std::vector<double> distances;
  std::vector<double> ratios;
  std::vector<ScalingPoint> points;
  for (double d : deltas) {
    const double h = hausdorff(filtered_spectrum(weyl_hopping(perturb(symbol, field, d)), f), base);
    distances.push_back(h);
    ratios.push_back(h / std::sqrt(d));
    points.push_back({d, h});
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // C is the largest ratio; the fitted growth must also stay within the sqrt(delta) band.
  const double c = *std::max_element(ratios.begin(), ratios.end());
  const auto fit = fit_scaling(points);
  bool bounded = std::isfinite(c);
  for (std::size_t i = 0; i < deltas.size(); ++i) bounded = bounded && distances[i] <= c * std::sqrt(deltas[i]) + 1e-15;
  const bool pass = bounded && fit.exponent >= 0.4 && seconds < 180.0;
  return {pass, fmt::format("d_h [{}], ratios [{}], C = {:.4f}, fitted exponent {:.4f}, {:.1f} s", join(distances),
                            join(ratios), c, fit.exponent, seconds)};
}

const runner::PropertyCheck* find_check(const std::vector<runner::PropertyCheck>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const std::vector<runner::PropertyCheck>& property_results() {
  static const auto results = runner::run_property_suite(runner::PropertyCounts{}, 20240601);
  return results;
}

Outcome suite_outcome(const std::vector<std::string>& names) {
  bool pass = true;
  std::string detail;
  for (const auto& name : names) {
    const auto* c = find_check(property_results(), name);
    if (c == nullptr) {
      pass = false;
      detail += fmt::format("{}{}: missing", detail.empty() ? "" : ", ", name);
      continue;
    }
    pass = pass && c->failures == 0 && c->trials > 0;
    detail += fmt::format("{}{} {}/{}", detail.empty() ? "" : ", ", name, c->trials - c->failures, c->trials);
  }
  return {pass, detail};
}

Outcome matrix_property_suites() {
  const auto& r = property_results();
  const auto* pairs = find_check(r, "norm_chain");
  const auto* quads = find_check(r, "triangle_chain");
  const bool counts = pairs && quads && pairs->trials == 200 && quads->trials == 100;
  auto out = suite_outcome({"norm_chain", "triangle_chain", "hausdorff_symmetry", "hausdorff_identity",
                            "hausdorff_triangle"});
  out.pass = out.pass && counts;
  return out;
}

Outcome parser_and_quantization() {
  auto out = suite_outcome({"dsl_round_trip", "xi_decompose_reconstruction", "hermiticity_residual"});
  const FilterSpec f = oracle_filter();
  const BlochGrid grid(128, 128);
  // delta = 0 at base flux 1/2; delta = 1/3 at base flux 1/4 lands exactly on 1/3.
  const auto half = flux_equivalence_check(0.0, 0.5, f, grid, 256);
  const auto third = flux_equivalence_check(1.0 / 3.0, 0.25, f, grid, 256);
  const bool exact = half.flux == RationalFlux(1, 2) && third.flux == RationalFlux(1, 3);
  out.pass = out.pass && exact && half.distance <= 0.1 && third.distance <= 0.1;
  out.detail += fmt::format(", equivalence {} {:.4f}, {} {:.4f}", half.flux.to_string(), half.distance,
                            third.flux.to_string(), third.distance);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"half-flux baseline", half_flux_baseline},
      {"dirac gap scaling", dirac_gap_scaling},
      {"hausdorff upper bound", hausdorff_upper_bound},
      {"lipschitz spectral edges", lipschitz_edges},
      {"gap edge tracking", gap_edge_tracking},
      {"finite-section oracle", finite_section_oracle},
      {"nonlinear field bound", nonlinear_field_bound},
      {"matrix property suites", matrix_property_suites},
      {"parser and quantization suites", parser_and_quantization},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, fn] = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, fmt::format("error: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    fmt::print("{} {} {}: {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", i + 1, name, o.detail, seconds);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
