#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "weylspec/band.hpp"

using namespace weylspec;

namespace {

HermitianBand random_band(std::size_t n, std::size_t kd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  HermitianBand a(n, kd);
  for (std::size_t j = 0; j < n; ++j) {
    a.set(j, j, {g(rng), 0.0});
    for (std::size_t i = j + 1; i < std::min(n, j + kd + 1); ++i) a.set(i, j, {g(rng), g(rng)});
  }
  return a;
}

std::vector<double> dense_eigenvalues(const HermitianBand& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.to_dense(), Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST(Band, StorageIsHermitian) {
  HermitianBand a(4, 1);
  a.set(1, 0, {1.0, 2.0});
  EXPECT_EQ(a(0, 1), std::complex<double>(1.0, -2.0));
  a.set(2, 2, {3.0, 5.0});
  EXPECT_EQ(a(2, 2), std::complex<double>(3.0, 0.0));
  EXPECT_EQ(a(3, 0), std::complex<double>(0.0, 0.0));
  a.add_to_diagonal(2, 1.0);
  EXPECT_EQ(a(2, 2).real(), 4.0);
  const Eigen::MatrixXcd d = a.to_dense();
  EXPECT_EQ((d - d.adjoint()).norm(), 0.0);
}

TEST(Band, SetOutsideBandThrows) {
  HermitianBand a(5, 1);
  EXPECT_ANY_THROW(a.set(3, 0, {1.0, 0.0}));
  EXPECT_ANY_THROW(a.set(5, 5, {1.0, 0.0}));
}

TEST(Band, DiagonalMatrix) {
  HermitianBand a(3, 0);
  a.set(0, 0, 3.0);
  a.set(1, 1, 1.0);
  a.set(2, 2, 2.0);
  EXPECT_EQ(band_eigenvalues(a), (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Band, TridiagonalChainMatchesClosedForm) {
  const std::size_t n = 50;
  HermitianBand a(n, 1);
  for (std::size_t i = 1; i < n; ++i) a.set(i, i - 1, {0.0, 1.0});
  const auto ev = band_eigenvalues(a);
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = -2.0 * std::cos(std::numbers::pi * static_cast<double>(k + 1) / (n + 1));
    EXPECT_NEAR(ev[k], expected, 1e-12);
  }
}

TEST(Band, MatchesDenseSolver) {
  for (std::size_t kd : {1u, 2u, 5u, 17u}) {
    for (std::size_t n : {1u, 2u, 7u, 60u, 150u}) {
      const auto a = random_band(n, std::min(kd, n - 1), 100 * kd + n);
      const auto got = band_eigenvalues(a);
      const auto want = dense_eigenvalues(a);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], 1e-10) << "n=" << n << " kd=" << kd;
    }
  }
}

TEST(Band, EmptyMatrix) { EXPECT_TRUE(band_eigenvalues(HermitianBand(0, 0)).empty()); }
