#include "weylspec/quantize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "weylspec/error.hpp"

namespace weylspec {

HoppingOperator::HoppingOperator(int dim, std::vector<HopTerm> hops) : dim_(dim), hops_(std::move(hops)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DimensionError(fmt::format("unsupported dimension {}", dim_));
  std::set<Hop> seen;
  for (const auto& term : hops_) {
    for (int j = dim_; j < kMaxDim; ++j) {
      if (term.k[j] != 0) throw DimensionError("hop has components beyond the operator dimension");
    }
    if (!seen.insert(term.k).second) throw StructureError("duplicate hop vector");
  }
  for (const auto& k : seen) {
    if (!seen.contains(negate(k))) throw StructureError("hop set is not closed under negation");
  }
  std::sort(hops_.begin(), hops_.end(), [](const HopTerm& a, const HopTerm& b) { return a.k < b.k; });
}

std::complex<double> HoppingOperator::coefficient(const Hop& k, std::span<const double> x) const {
  auto it = std::lower_bound(hops_.begin(), hops_.end(), k,
                             [](const HopTerm& t, const Hop& key) { return t.k < key; });
  if (it == hops_.end() || it->k != k) return {};
  return it->h(x);
}

int HoppingOperator::range() const {
  int r = 0;
  for (const auto& t : hops_) {
    for (int v : t.k) r = std::max(r, std::abs(v));
  }
  return r;
}

HoppingOperator weyl_hopping(const Symbol& s) {
  const int d = s.dim();
  std::vector<HopTerm> hops;
  for (auto& [k, c] : xi_decompose(s)) {
    std::array<double, kMaxDim> shift{};
    for (int j = 0; j < d; ++j) shift[j] = 0.5 * k[j];
    hops.push_back({k, [re = c.re, im = c.im, shift, d](std::span<const double> x) {
                      std::array<double, kMaxDim> y{};
                      for (int j = 0; j < d; ++j) y[j] = x[j] + shift[j];
                      const std::span<const double> at(y.data(), static_cast<std::size_t>(d));
                      static const ParamMap kNoParams;
                      return std::complex<double>(eval(re, at, {}, kNoParams), eval(im, at, {}, kNoParams));
                    }});
  }
  return HoppingOperator(d, std::move(hops));
}

double hermiticity_residual(const HoppingOperator& a, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error("hermiticity_residual needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  const int d = a.dim();
  double worst = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d)), xk(static_cast<std::size_t>(d));
  for (int s = 0; s < samples; ++s) {
    for (auto& v : x) v = coord(rng);
    for (const auto& term : a.hops()) {
      for (int j = 0; j < d; ++j) xk[j] = x[j] + term.k[j];
      const auto lhs = a.coefficient(negate(term.k), xk);
      worst = std::max(worst, std::abs(lhs - std::conj(term.h(x))));
    }
  }
  return worst;
}

std::vector<int> FiberMatrix::site(std::size_t index) const {
  const std::size_t L = sites_per_axis();
  std::vector<int> n(static_cast<std::size_t>(dim));
  for (int j = dim - 1; j >= 0; --j) {
    n[j] = static_cast<int>(index % L) - half_width;
    index /= L;
  }
  return n;
}

int FiberMatrix::boundary_distance(std::size_t index) const {
  int best = half_width + 1;
  for (int v : site(index)) best = std::min(best, half_width + 1 - std::abs(v));
  return best;
}

FiberMatrix fiber_matrix(const HoppingOperator& a, std::span<const double> x0, int half_width,
                         std::size_t cap) {
  const int d = a.dim();
  if (x0.size() != static_cast<std::size_t>(d)) throw DimensionError("fiber offset has wrong length");
  if (half_width < 1) throw Error("window half-width must be at least 1");
  const std::size_t L = 2 * static_cast<std::size_t>(half_width) + 1;
  std::size_t n = 1;
  for (int j = 0; j < d; ++j) {
    n *= L;
    if (n > cap) {
      throw WindowCapError(fmt::format("window of {}^{} sites exceeds cap {}", L, d, cap));
    }
  }
  // Lexicographic index offset of each hop; bandwidth is the largest offset.
  auto linear_offset = [&](const Hop& k) {
    long off = 0;
    for (int j = 0; j < d; ++j) off = off * static_cast<long>(L) + k[j];
    return off;
  };
  std::size_t bandwidth = 0;
  for (const auto& t : a.hops()) {
    bool fits = true;
    for (int j = 0; j < d; ++j) fits = fits && static_cast<std::size_t>(std::abs(t.k[j])) < L;
    if (fits) bandwidth = std::max<std::size_t>(bandwidth, static_cast<std::size_t>(std::labs(linear_offset(t.k))));
  }

  FiberMatrix out;
  out.offset.assign(x0.begin(), x0.end());
  out.half_width = half_width;
  out.dim = d;
  out.matrix = HermitianBand(n, std::min(bandwidth, n - 1));

  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t row = 0; row < n; ++row) {
    const auto site = out.site(row);
    for (int j = 0; j < d; ++j) x[j] = x0[j] + site[j];
    for (const auto& t : a.hops()) {
      // Fill the lower triangle from hops with positive offset (and the
      // diagonal); the stored mirror supplies the rest.
      const long off = linear_offset(t.k);
      if (off < 0) continue;
      bool inside = true;
      for (int j = 0; j < d && inside; ++j) inside = std::abs(site[j] + t.k[j]) <= half_width;
      if (!inside) continue;
      const std::size_t col = row + static_cast<std::size_t>(off);
      // Entry (row, col) = h_k(x0 + n); stored as lower (col, row) = conj.
      const auto h = t.h(x);
      if (off == 0) {
        out.matrix.set(row, row, {h.real(), 0.0});
      } else {
        out.matrix.set(row, col, h);
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> fiber_offsets(int dim, int per_axis) {
  if (dim < 1 || dim > kMaxDim) throw DimensionError(fmt::format("unsupported dimension {}", dim));
  if (per_axis < 1) throw Error("fiber grid needs at least one point per axis");
  std::vector<std::vector<double>> out;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    std::vector<double> x0(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) x0[j] = static_cast<double>(idx[j]) / per_axis;
    out.push_back(std::move(x0));
    int j = dim - 1;
    while (j >= 0 && ++idx[j] == per_axis) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

}  // namespace weylspec
