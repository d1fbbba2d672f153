#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weylspec/metrics.hpp"
#include "weylspec/spectrum.hpp"
#include "weylspec/symbol.hpp"

namespace weylspec {

/// Flux per plaquette in cycles, p/q in lowest terms with 0 <= p/q < 1.
class RationalFlux {
 public:
  RationalFlux(std::int64_t p, std::int64_t q);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  double value() const { return static_cast<double>(p_) / static_cast<double>(q_); }

  std::string to_string() const;
  bool operator==(const RationalFlux&) const = default;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

/// n1 × n2 phase grid. Points cover the reduced zone [0, 2π/q)² of the flux in
/// use; the Bloch spectrum depends on θ only through qθ mod 2π.
struct BlochGrid {
  int n1 = 64;
  int n2 = 64;

  BlochGrid() = default;
  BlochGrid(int a, int b);

  std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
  /// 3·(Δθ1 + Δθ2); an upper bound on sampling holes inside a band, with margin.
  double default_resolution(const RationalFlux& flux) const;
};

/// (Hu)_m = e^{iθ1} u_{m+1} + e^{-iθ1} u_{m-1} + 2cos(2π(p/q)m + θ2) u_m on ℤ/q.
Eigen::MatrixXcd bloch_matrix(const RationalFlux& flux, double theta1, double theta2);

/// Sorted eigenvalues of bloch_matrix, through a bandwidth-2 reordering.
std::vector<double> bloch_eigenvalues(const RationalFlux& flux, double theta1, double theta2);

SpectralSet bloch_spectrum(const RationalFlux& flux, const BlochGrid& grid, int workers = 1,
                           double resolution = 0.0);

/// Last continued-fraction convergent of alpha (reduced mod 1) with q <= qmax.
RationalFlux best_rational(double alpha, std::int64_t qmax);

/// Harper symbol as parsed by the DSL, with b bound to 2π·alpha. Its Weyl
/// quantization is half of the Bloch model above.
inline constexpr const char* kHarperSymbol = "cos(xi1)+cos(xi2+b*x1)";
inline constexpr double kSymbolPerBloch = 0.5;

Symbol harper_symbol(double alpha);

/// Every value multiplied by `factor` > 0; resolution scales too.
SpectralSet rescaled(const SpectralSet& s, double factor);

struct DiracPoint {
  double delta = 0.0;
  RationalFlux flux{1, 2};
  std::optional<Gap> gap;
  std::string failure;  // nonempty when no gap was found
};

struct DiracResult {
  std::vector<DiracPoint> points;
  ScalingReport width;
  ScalingReport center;
  std::vector<std::string> warnings;
};

/// First detected gap above zero energy (by center), ascending.
std::optional<Gap> first_positive_gap(const SpectralSet& s, double eps);

/// Spectrum at flux best_rational(1/2 + delta, qmax) for each delta; records
/// the first positive gap and fits width and center against delta.
/// eps <= 0 selects the grid default per flux.
DiracResult dirac_gap_experiment(const std::vector<double>& deltas, std::int64_t qmax, const BlochGrid& grid,
                                 double eps, int workers = 1);

struct EquivalenceResult {
  RationalFlux flux{0, 1};
  SpectralSet engine;  // symbol units
  SpectralSet bloch;   // rescaled to symbol units
  double distance = 0.0;
};

/// Perturbs the Harper symbol at base flux alpha0 with F(x) = x, runs it through
/// the quantization and filtering pipeline, and compares with the Bloch
/// spectrum at the scaled flux best_rational((1 + delta)·alpha0, qmax).
EquivalenceResult flux_equivalence_check(double delta, double alpha0, const FilterSpec& filter,
                                         const BlochGrid& grid, std::int64_t qmax);

}  // namespace weylspec
