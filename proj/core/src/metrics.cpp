#include "weylspec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "weylspec/error.hpp"

namespace weylspec {

double ScalingReport::constant() const { return std::exp(log_constant); }

double ScalingReport::predict(double delta) const { return std::exp(log_constant + exponent * std::log(delta)); }

namespace {

// sup over a of the distance to the nearest b; both sorted.
double directed(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  std::size_t j = 0;
  for (double v : a) {
    while (j + 1 < b.size() && b[j + 1] <= v) ++j;
    double d = std::abs(v - b[j]);
    if (j + 1 < b.size()) d = std::min(d, std::abs(b[j + 1] - v));
    worst = std::max(worst, d);
  }
  return worst;
}

void require_same_shape(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() == 0) throw DimensionError("empty matrix");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrices must have the same dimension");
  }
}

}  // namespace

double hausdorff(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptySpectrumError("hausdorff distance of an empty set");
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff(const SpectralSet& a, const SpectralSet& b) { return hausdorff(a.values(), b.values()); }

std::pair<double, double> edge_deviation(const SpectralSet& perturbed, const SpectralSet& base) {
  const auto [lo_p, hi_p] = edges(perturbed);
  const auto [lo_b, hi_b] = edges(base);
  return {std::abs(lo_p - lo_b), std::abs(hi_p - hi_b)};
}

std::pair<double, double> track_inner_gap(const SpectralSet& s, double lower, double upper) {
  if (!(lower < upper)) throw Error("gap edges must satisfy lower < upper");
  const double mid = 0.5 * (lower + upper);
  const auto v = s.values();
  const auto above = std::upper_bound(v.begin(), v.end(), mid);
  if (above == v.begin() || above == v.end()) {
    throw OneSidedSpectrumError("spectrum lies on one side of the gap midpoint; the gap has closed");
  }
  return {*(above - 1), *above};
}

ScalingReport fit_scaling(std::vector<ScalingPoint> points) {
  ScalingReport report;
  std::vector<double> xs;
  std::vector<double> ys;
  std::set<double> seen;
  for (const auto& p : points) {
    if (!std::isfinite(p.delta) || !std::isfinite(p.metric) || p.delta <= 0.0 || p.metric < 0.0) {
      throw Error("scaling points need finite delta > 0 and metric >= 0");
    }
    if (p.metric > 0.0) {
      if (!seen.insert(p.delta).second) throw InsufficientDataError("repeated delta among scaling points");
      xs.push_back(std::log(p.delta));
      ys.push_back(std::log(p.metric));
    }
  }
  report.points = std::move(points);
  if (xs.size() < 3) throw InsufficientDataError("fit needs at least three points with positive metric");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  report.exponent = sxy / sxx;
  report.log_constant = my - report.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (report.log_constant + report.exponent * xs[i]);
    ss_res += r * r;
  }
  report.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return report;
}

double spectral_norm(const Eigen::MatrixXcd& h) {
  const auto ev = eigen_hermitian(h);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

NormChain norm_chain_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  require_same_shape(a, b);
  const auto ea = eigen_hermitian(a);
  const auto eb = eigen_hermitian(b);
  NormChain out;
  out.edge_shift = std::max(std::abs(ea.front() - eb.front()), std::abs(ea.back() - eb.back()));
  out.hausdorff = hausdorff(ea, eb);
  out.norm = spectral_norm(a - b);
  out.pass = out.edge_shift <= out.hausdorff + kChainTolerance && out.hausdorff <= out.norm + kChainTolerance;
  return out;
}

bool triangle_chain_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& c,
                          const Eigen::MatrixXcd& d) {
  require_same_shape(a, b);
  require_same_shape(a, c);
  require_same_shape(a, d);
  const auto ea = eigen_hermitian(a);
  const auto eb = eigen_hermitian(b);
  const auto ec = eigen_hermitian(c);
  const auto ed = eigen_hermitian(d);
  const double ab = spectral_norm(a - b);
  const double cd = spectral_norm(c - d);
  const bool lower = std::abs(ea.front() - ed.front()) <= ab + std::abs(eb.front() - ec.front()) + cd + kChainTolerance;
  const bool upper = std::abs(ea.back() - ed.back()) <= ab + std::abs(eb.back() - ec.back()) + cd + kChainTolerance;
  return lower && upper;
}

}  // namespace weylspec
