#include "weylspec/hofstadter.hpp"

#include <fmt/format.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "weylspec/band.hpp"
#include "weylspec/error.hpp"
#include "weylspec/parallel.hpp"
#include "weylspec/quantize.hpp"

namespace weylspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

RationalFlux::RationalFlux(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw Error(fmt::format("flux denominator must be positive, got {}", q));
  p %= q;
  if (p < 0) p += q;
  const std::int64_t g = std::gcd(p, q);
  p_ = p / g;
  q_ = q / g;
}

std::string RationalFlux::to_string() const { return fmt::format("{}/{}", p_, q_); }

BlochGrid::BlochGrid(int a, int b) : n1(a), n2(b) {
  if (n1 < 1 || n2 < 1) throw Error("Bloch grid needs at least one point per axis");
}

double BlochGrid::default_resolution(const RationalFlux& flux) const {
  const double q = static_cast<double>(flux.q());
  return 3.0 * (kTwoPi / (q * n1) + kTwoPi / (q * n2));
}

Eigen::MatrixXcd bloch_matrix(const RationalFlux& flux, double theta1, double theta2) {
  const auto q = static_cast<Eigen::Index>(flux.q());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(q, q);
  const std::complex<double> hop = std::polar(1.0, theta1);
  for (Eigen::Index m = 0; m < q; ++m) {
    h(m, (m + 1) % q) += hop;
    h(m, (m + q - 1) % q) += std::conj(hop);
    h(m, m) += 2.0 * std::cos(kTwoPi * static_cast<double>(flux.p() * m % flux.q()) / static_cast<double>(q) + theta2);
  }
  return h;
}

std::vector<double> bloch_eigenvalues(const RationalFlux& flux, double theta1, double theta2) {
  const std::int64_t q = flux.q();
  auto diagonal = [&](std::int64_t m) {
    return 2.0 * std::cos(kTwoPi * static_cast<double>(flux.p() * m % q) / static_cast<double>(q) + theta2);
  };
  if (q == 1) return {diagonal(0) + 2.0 * std::cos(theta1)};
  if (q == 2) {
    const double a = diagonal(0);
    const double d = diagonal(1);
    const double r = std::hypot(0.5 * (a - d), 2.0 * std::cos(theta1));
    const double m = 0.5 * (a + d);
    return {m - r, m + r};
  }
  // Ring order 0, q-1, 1, q-2, ... puts every ring neighbour within two slots.
  std::vector<std::size_t> pos(static_cast<std::size_t>(q));
  for (std::int64_t i = 0; i < q; ++i) {
    const std::int64_t site = i % 2 == 0 ? i / 2 : q - 1 - i / 2;
    pos[static_cast<std::size_t>(site)] = static_cast<std::size_t>(i);
  }
  HermitianBand band(static_cast<std::size_t>(q), 2);
  const std::complex<double> hop = std::polar(1.0, theta1);
  for (std::int64_t m = 0; m < q; ++m) {
    band.set(pos[m], pos[m], diagonal(m));
    band.set(pos[m], pos[(m + 1) % q], hop);
  }
  return band_eigenvalues(band);
}

SpectralSet bloch_spectrum(const RationalFlux& flux, const BlochGrid& grid, int workers, double resolution) {
  const double q = static_cast<double>(flux.q());
  const auto rows = parallel_map(static_cast<std::size_t>(grid.n1), workers, [&](std::size_t i) {
    std::vector<double> out;
    out.reserve(grid.size() / grid.n1 * static_cast<std::size_t>(flux.q()));
    const double t1 = kTwoPi * static_cast<double>(i) / (q * grid.n1);
    for (int j = 0; j < grid.n2; ++j) {
      const double t2 = kTwoPi * static_cast<double>(j) / (q * grid.n2);
      const auto ev = bloch_eigenvalues(flux, t1, t2);
      out.insert(out.end(), ev.begin(), ev.end());
    }
    return out;
  });
  std::vector<double> all;
  all.reserve(grid.size() * static_cast<std::size_t>(flux.q()));
  for (const auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  return SpectralSet(std::move(all), resolution > 0.0 ? resolution : grid.default_resolution(flux),
                     Provenance::bloch);
}

RationalFlux best_rational(double alpha, std::int64_t qmax) {
  if (qmax < 1) throw Error("qmax must be at least 1");
  if (!std::isfinite(alpha)) throw NonFiniteError("flux must be finite");
  const double a = alpha - std::floor(alpha);
  std::int64_t h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  std::int64_t best_p = 0, best_q = 1;
  double x = a;
  for (int iter = 0; iter < 64; ++iter) {
    const double term = std::floor(x);
    if (term > 1e15) break;
    const auto t = static_cast<std::int64_t>(term);
    const std::int64_t h = t * h1 + h2;
    const std::int64_t k = t * k1 + k2;
    if (k > qmax) break;
    best_p = h;
    best_q = k;
    if (std::abs(a - static_cast<double>(h) / static_cast<double>(k)) <= 1e-12) break;
    const double frac = x - term;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
  return RationalFlux(best_p, best_q);
}

Symbol harper_symbol(double alpha) { return parse_symbol(kHarperSymbol, 2, {{"b", kTwoPi * alpha}}); }

SpectralSet rescaled(const SpectralSet& s, double factor) {
  if (!(factor > 0.0)) throw Error("rescale factor must be positive");
  std::vector<double> v(s.values().begin(), s.values().end());
  for (auto& e : v) e *= factor;
  return SpectralSet(std::move(v), s.resolution() * factor, s.provenance());
}

std::optional<Gap> first_positive_gap(const SpectralSet& s, double eps) {
  for (const auto& g : detect_gaps(s, eps)) {
    if (g.center() > 0.0) return g;
  }
  return std::nullopt;
}

DiracResult dirac_gap_experiment(const std::vector<double>& deltas, std::int64_t qmax, const BlochGrid& grid,
                                 double eps, int workers) {
  DiracResult out;
  std::vector<ScalingPoint> widths;
  std::vector<ScalingPoint> centers;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw Error(fmt::format("dirac sweep needs delta > 0, got {}", delta));
    DiracPoint point;
    point.delta = delta;
    point.flux = best_rational(0.5 + delta, qmax);
    const auto spectrum = bloch_spectrum(point.flux, grid, workers);
    point.gap = first_positive_gap(spectrum, eps > 0.0 ? eps : spectrum.resolution());
    if (point.gap) {
      widths.push_back({delta, point.gap->width()});
      centers.push_back({delta, point.gap->center()});
    } else {
      point.failure = fmt::format("no gap above zero at flux {}", point.flux.to_string());
      out.warnings.push_back(fmt::format("delta {}: {}; excluded from fit", delta, point.failure));
    }
    out.points.push_back(std::move(point));
  }
  out.width = fit_scaling(std::move(widths));
  out.center = fit_scaling(std::move(centers));
  return out;
}

EquivalenceResult flux_equivalence_check(double delta, double alpha0, const FilterSpec& filter,
                                         const BlochGrid& grid, std::int64_t qmax) {
  EquivalenceResult out;
  const Symbol perturbed = perturb(harper_symbol(alpha0), identity_field(2), delta);
  out.engine = filtered_spectrum(weyl_hopping(perturbed), filter);
  out.flux = best_rational((1.0 + delta) * alpha0, qmax);
  out.bloch = rescaled(bloch_spectrum(out.flux, grid, filter.workers), kSymbolPerBloch);
  out.distance = hausdorff(out.engine, out.bloch);
  return out;
}

}  // namespace weylspec
