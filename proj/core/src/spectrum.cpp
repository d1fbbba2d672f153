#include "weylspec/spectrum.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weylspec/error.hpp"
#include "weylspec/parallel.hpp"

namespace weylspec {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::bloch:
      return "bloch";
    case Provenance::truncation:
      return "truncation";
    case Provenance::exact:
      return "exact";
  }
  return "exact";
}

SpectralSet::SpectralSet(std::vector<double> values, double resolution, Provenance provenance)
    : values_(std::move(values)), resolution_(resolution), provenance_(provenance) {
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) {
    throw NonFiniteError("spectral resolution must be a positive finite number");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFiniteError("non-finite value in spectral set");
  }
  std::sort(values_.begin(), values_.end());
}

SpectralSet SpectralSet::collapsed(double tol) const {
  std::vector<double> out;
  for (double v : values_) {
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  }
  return SpectralSet(std::move(out), resolution_, provenance_);
}

namespace {

void require_finite(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw DimensionError("matrix must be square");
  if (!h.allFinite()) throw NonFiniteError("non-finite matrix entry");
}

}  // namespace

std::vector<double> eigen_hermitian(const Eigen::MatrixXcd& h) {
  require_finite(h);
  const Eigen::Index n = h.rows();
  if (n == 0) return {};
  if (n == 1) return {h(0, 0).real()};
  if (n == 2) {
    // Closed form keeps Bloch sweeps over q = 2 cheap.
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double m = 0.5 * (a + d);
    const double r = std::hypot(0.5 * (a - d), std::abs(h(1, 0)));
    return {m - r, m + r};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + n};
}

EigenPairs eigen_hermitian_pairs(const Eigen::MatrixXcd& h) {
  require_finite(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {std::vector<double>(ev.data(), ev.data() + ev.size()), solver.eigenvectors()};
}

FiberSpectrum fiber_spectrum(const FiberMatrix& fiber, int margin) {
  FiberSpectrum out;
  out.values = band_eigenvalues(fiber.matrix);
  const double scale = std::max({1.0, std::abs(out.values.front()), std::abs(out.values.back())});
  const double t = 1e-8 * scale;
  HermitianBand shifted = fiber.matrix;
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    if (fiber.boundary_distance(i) < margin) shifted.add_to_diagonal(i, t);
  }
  const auto moved = band_eigenvalues(shifted);
  out.boundary_mass.resize(out.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.boundary_mass[i] = std::clamp((moved[i] - out.values[i]) / t, 0.0, 1.0);
  }
  return out;
}

SpectralSet filtered_spectrum(const HoppingOperator& a, const FilterSpec& spec) {
  const int d = a.dim();
  const int M = spec.half_width;
  const int margin = spec.margin > 0 ? spec.margin : (M + 9) / 10;
  const int per_axis = spec.fibers_per_axis > 0 ? spec.fibers_per_axis : (d == 1 ? 16 : 3);
  if (margin < 1 || margin >= M) throw Error(fmt::format("boundary margin {} must satisfy 1 <= r < M = {}", margin, M));
  if (!(spec.tau > 0.0 && spec.tau < 1.0)) throw Error("weight threshold tau must lie in (0, 1)");

  const auto offsets = fiber_offsets(d, per_axis);
  std::vector<FiberMatrix> fibers;
  fibers.reserve(offsets.size());
  for (const auto& x0 : offsets) fibers.push_back(fiber_matrix(a, x0, M, spec.cap));

  // Fibers whose windows coincide (coefficients independent of some axis)
  // are solved once.
  std::vector<std::size_t> unique;
  std::vector<std::size_t> owner(fibers.size());
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    auto it = std::find_if(unique.begin(), unique.end(),
                           [&](std::size_t u) { return fibers[u].matrix == fibers[i].matrix; });
    if (it == unique.end()) {
      owner[i] = unique.size();
      unique.push_back(i);
    } else {
      owner[i] = static_cast<std::size_t>(it - unique.begin());
    }
  }
  const auto solved = parallel_map(unique.size(), spec.workers,
                                   [&](std::size_t u) { return fiber_spectrum(fibers[unique[u]], margin); });

  std::vector<double> kept;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    const auto& fs = solved[owner[i]];
    for (std::size_t j = 0; j < fs.values.size(); ++j) {
      lo = first ? fs.values[j] : std::min(lo, fs.values[j]);
      hi = first ? fs.values[j] : std::max(hi, fs.values[j]);
      first = false;
      if (fs.boundary_mass[j] < spec.tau) kept.push_back(fs.values[j]);
    }
  }
  if (kept.empty()) throw AllBoundaryStatesError("every eigenvector is boundary-localized");

  double resolution = spec.resolution;
  if (resolution <= 0.0) {
    // Momentum resolution pi/L times a group-velocity scale set by the spread.
    const double L = 2.0 * M + 1.0;
    resolution = std::max(3.0 * std::max(hi - lo, 1.0) * std::numbers::pi / (2.0 * L), 1e-9);
  }
  SpectralSet set(std::move(kept), resolution, Provenance::truncation);
  return set.collapsed(1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)}));
}

std::pair<double, double> edges(const SpectralSet& s) {
  if (s.empty()) throw EmptySpectrumError("edges of an empty spectral set");
  return {s.values().front(), s.values().back()};
}

std::vector<Gap> detect_gaps(const SpectralSet& s, double eps) {
  if (!(eps > 0.0)) throw Error("gap resolution must be positive");
  std::vector<Gap> gaps;
  const auto v = s.values();
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] - v[i - 1] > eps) gaps.push_back({v[i - 1], v[i]});
  }
  return gaps;
}

std::optional<Gap> gap_near(const SpectralSet& s, double energy, double eps) {
  std::optional<Gap> best;
  double best_dist = 0.0;
  for (const auto& g : detect_gaps(s, eps)) {
    const double dist = energy < g.lower ? g.lower - energy : (energy > g.upper ? energy - g.upper : 0.0);
    if (!best || dist < best_dist) {
      best = g;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace weylspec
