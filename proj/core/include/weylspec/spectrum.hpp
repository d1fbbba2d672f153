#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "weylspec/quantize.hpp"

namespace weylspec {

enum class Provenance { bloch, truncation, exact };

const char* to_string(Provenance p);

/// Sorted finite multiset of real eigenvalues standing in for a spectrum,
/// with the resolution below which features are not meaningful.
class SpectralSet {
 public:
  SpectralSet() = default;
  /// Sorts; throws NonFiniteError on non-finite values or resolution <= 0.
  SpectralSet(std::vector<double> values, double resolution, Provenance provenance);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double resolution() const { return resolution_; }
  Provenance provenance() const { return provenance_; }

  /// Merges runs of values within `tol` of the run's first value.
  SpectralSet collapsed(double tol) const;

 private:
  std::vector<double> values_;
  double resolution_ = 1e-9;
  Provenance provenance_ = Provenance::exact;
};

struct Gap {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  double center() const { return 0.5 * (lower + upper); }
};

/// Sorted eigenvalues of a dense Hermitian matrix.
std::vector<double> eigen_hermitian(const Eigen::MatrixXcd& h);

struct EigenPairs {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;  // columns, matching `values`
};

EigenPairs eigen_hermitian_pairs(const Eigen::MatrixXcd& h);

/// Eigenvalues of a fiber window paired with the eigenvector weight on sites
/// closer than `margin` to the window faces.
struct FiberSpectrum {
  std::vector<double> values;
  std::vector<double> boundary_mass;
};

/// Boundary weights come from the first-order shift of each eigenvalue under a
/// small projector perturbation t·P_boundary (d lambda / dt = <v, P v>), which
/// needs eigenvalues only.
FiberSpectrum fiber_spectrum(const FiberMatrix& fiber, int margin);

struct FilterSpec {
  int fibers_per_axis = 0;  // 0: 16 for d = 1, 3 for d = 2
  int half_width = 30;
  int margin = 0;           // 0: ceil(M / 10)
  double tau = 0.1;
  double resolution = 0.0;  // 0: estimated from the window size
  std::size_t cap = kDefaultWindowCap;
  int workers = 1;
};

/// Union over fibers of eigenvalues whose boundary weight is below tau.
SpectralSet filtered_spectrum(const HoppingOperator& a, const FilterSpec& spec);

/// (min, max) of the set.
std::pair<double, double> edges(const SpectralSet& s);

/// Maximal open intervals between consecutive points longer than eps.
std::vector<Gap> detect_gaps(const SpectralSet& s, double eps);

/// Detected gap whose closure is nearest to `energy`; lower gap wins ties.
std::optional<Gap> gap_near(const SpectralSet& s, double energy, double eps);

}  // namespace weylspec
