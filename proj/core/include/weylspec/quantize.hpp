#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weylspec/band.hpp"
#include "weylspec/symbol.hpp"

namespace weylspec {

inline constexpr std::size_t kDefaultWindowCap = 4096;

using Coefficient = std::function<std::complex<double>(std::span<const double> x)>;

struct HopTerm {
  Hop k{};
  Coefficient h;
};

/// Lattice operator (A psi)(x) = Σ_k h_k(x) psi(x + k) with finite symmetric hop set.
class HoppingOperator {
 public:
  /// Throws StructureError unless the hop set is closed under negation and
  /// free of duplicates.
  HoppingOperator(int dim, std::vector<HopTerm> hops);

  int dim() const { return dim_; }
  std::span<const HopTerm> hops() const { return hops_; }

  /// h_k(x); zero when k is not in the hop set.
  std::complex<double> coefficient(const Hop& k, std::span<const double> x) const;

  /// Largest |k_j| over the hop set.
  int range() const;

 private:
  int dim_;
  std::vector<HopTerm> hops_;
};

/// Weyl quantization of a band-limited symbol: h_k(x) = c_k(x + k/2).
HoppingOperator weyl_hopping(const Symbol& s);

/// max over `samples` random x and all k of |h_{-k}(x + k) - conj(h_k(x))|.
double hermiticity_residual(const HoppingOperator& a, int samples, std::uint64_t seed = 1);

/// Hard-truncated finite section of the operator on the fiber x0 + ℤ^d,
/// sites n ∈ [-M, M]^d in lexicographic order (last axis fastest).
struct FiberMatrix {
  std::vector<double> offset;
  int half_width = 0;
  int dim = 0;
  HermitianBand matrix{0, 0};

  std::size_t sites_per_axis() const { return 2 * static_cast<std::size_t>(half_width) + 1; }
  /// Lattice coordinates of site `index`.
  std::vector<int> site(std::size_t index) const;
  /// Lattice steps from `index` to the nearest site outside the window, where
  /// the truncation imposes psi = 0. Face sites are at distance 1.
  int boundary_distance(std::size_t index) const;
};

FiberMatrix fiber_matrix(const HoppingOperator& a, std::span<const double> x0, int half_width,
                         std::size_t cap = kDefaultWindowCap);

/// Uniform offsets over [0,1)^d with `per_axis` points per axis.
std::vector<std::vector<double>> fiber_offsets(int dim, int per_axis);

}  // namespace weylspec
