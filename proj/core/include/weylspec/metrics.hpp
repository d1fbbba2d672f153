#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "weylspec/spectrum.hpp"

namespace weylspec {

inline constexpr double kChainTolerance = 1e-10;

struct ScalingPoint {
  double delta = 0.0;
  double metric = 0.0;
};

/// Least-squares power law metric ≈ C·delta^exponent fitted in log-log space.
struct ScalingReport {
  std::vector<ScalingPoint> points;  // raw points, including zero metrics
  double exponent = 0.0;
  double log_constant = 0.0;
  double r_squared = 0.0;

  double constant() const;
  double predict(double delta) const;
};

/// Hausdorff distance of two sorted nonempty sequences, by merge walk.
double hausdorff(std::span<const double> a, std::span<const double> b);
double hausdorff(const SpectralSet& a, const SpectralSet& b);

/// (|ΔE−|, |ΔE+|).
std::pair<double, double> edge_deviation(const SpectralSet& perturbed, const SpectralSet& base);

/// Largest point below and smallest point above the midpoint of (lower, upper).
/// A point exactly at the midpoint counts as below.
std::pair<double, double> track_inner_gap(const SpectralSet& s, double lower, double upper);

/// Needs at least three points with metric > 0 and distinct deltas.
ScalingReport fit_scaling(std::vector<ScalingPoint> points);

/// max |eigenvalue| of a Hermitian matrix.
double spectral_norm(const Eigen::MatrixXcd& h);

struct NormChain {
  double edge_shift = 0.0;  // max(|ΔE−|, |ΔE+|)
  double hausdorff = 0.0;
  double norm = 0.0;        // ‖A − B‖
  bool pass = false;
};

/// Checks max|ΔE±| ≤ d_h(σ(A), σ(B)) ≤ ‖A − B‖.
NormChain norm_chain_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Checks |E±(A) − E±(D)| ≤ ‖A − B‖ + |E±(B) − E±(C)| + ‖C − D‖ for both edges.
bool triangle_chain_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& c,
                          const Eigen::MatrixXcd& d);

}  // namespace weylspec
