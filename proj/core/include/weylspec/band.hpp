#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace weylspec {

/// Hermitian matrix stored by its lower band. Only (i, j) with 0 <= i - j <= bandwidth
/// is stored; the upper triangle is the conjugate mirror, so A == A* holds exactly.
class HermitianBand {
 public:
  HermitianBand(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return kd_; }

  /// Any (i, j); zero outside the band.
  std::complex<double> operator()(std::size_t i, std::size_t j) const;

  /// Sets (i, j) and its mirror. Diagonal entries keep only the real part.
  void set(std::size_t i, std::size_t j, std::complex<double> value);
  void add_to_diagonal(std::size_t i, double value);

  Eigen::MatrixXcd to_dense() const;

  bool operator==(const HermitianBand&) const = default;

 private:
  std::size_t n_;
  std::size_t kd_;
  std::vector<std::complex<double>> lower_;  // column-major (kd+1) x n
};

/// All eigenvalues in ascending order, via unitary reduction of the band to
/// real tridiagonal form followed by an implicit QL sweep. Cost O(n^2 kd).
std::vector<double> band_eigenvalues(const HermitianBand& a);

}  // namespace weylspec
