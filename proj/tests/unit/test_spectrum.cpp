#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "weylspec/error.hpp"
#include "weylspec/spectrum.hpp"

using namespace weylspec;

TEST(SpectralSetTest, SortsAndValidates) {
  const SpectralSet s({3.0, -1.0, 2.0}, 0.1, Provenance::exact);
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()), (std::vector<double>{-1.0, 2.0, 3.0}));
  EXPECT_THROW(SpectralSet({1.0, NAN}, 0.1, Provenance::exact), NonFiniteError);
  EXPECT_THROW(SpectralSet({1.0}, 0.0, Provenance::exact), NonFiniteError);
  EXPECT_STREQ(to_string(Provenance::truncation), "truncation");
}

TEST(SpectralSetTest, Collapse) {
  const SpectralSet s({1.0, 1.0 + 1e-12, 2.0, 2.0 + 5e-10, 3.0}, 0.1, Provenance::exact);
  EXPECT_EQ(s.collapsed(1e-9).size(), 3u);
  EXPECT_EQ(s.collapsed(1e-13).size(), 5u);
}

TEST(Eigen, ClosedFormsAndGeneral) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  EXPECT_EQ(eigen_hermitian(d), (std::vector<double>{1.0, 2.0, 3.0}));

  Eigen::MatrixXcd two(2, 2);
  two << 2.0, 2.0, 2.0, -2.0;
  const auto ev = eigen_hermitian(two);
  EXPECT_NEAR(ev[0], -std::sqrt(8.0), 1e-14);
  EXPECT_NEAR(ev[1], std::sqrt(8.0), 1e-14);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(0, 1) = NAN;
  EXPECT_THROW(eigen_hermitian(bad), NonFiniteError);
  EXPECT_THROW(eigen_hermitian(Eigen::MatrixXcd::Zero(2, 3)), DimensionError);
  EXPECT_TRUE(eigen_hermitian(Eigen::MatrixXcd(0, 0)).empty());
}

TEST(FiberSpectrumTest, BoundaryMassMatchesEigenvectors) {
  const Symbol s = parse_symbol("cos(xi1) + 0.8*cos(1.37*x1) + 0.3*cos(2*xi1 + x1)", 1);
  const FiberMatrix f = fiber_matrix(weyl_hopping(s), std::vector{0.17}, 20);
  const int margin = 4;
  const FiberSpectrum fs = fiber_spectrum(f, margin);
  const EigenPairs pairs = eigen_hermitian_pairs(f.matrix.to_dense());
  ASSERT_EQ(fs.values.size(), pairs.values.size());
  for (std::size_t i = 0; i < fs.values.size(); ++i) {
    EXPECT_NEAR(fs.values[i], pairs.values[i], 1e-10);
    double mass = 0.0;
    for (std::size_t site = 0; site < f.matrix.size(); ++site) {
      if (f.boundary_distance(site) < margin) mass += std::norm(pairs.vectors(static_cast<Eigen::Index>(site), static_cast<Eigen::Index>(i)));
    }
    EXPECT_NEAR(fs.boundary_mass[i], mass, 1e-5) << "eigenvalue " << i;
  }
}

TEST(FilteredSpectrum, FreeChainEdges) {
  FilterSpec spec;
  spec.half_width = 400;
  spec.margin = 40;
  spec.fibers_per_axis = 2;
  const SpectralSet s = filtered_spectrum(weyl_hopping(parse_symbol("cos(xi1)", 1)), spec);
  const auto [lo, hi] = edges(s);
  EXPECT_NEAR(lo, -1.0, 1e-3);
  EXPECT_NEAR(hi, 1.0, 1e-3);
  EXPECT_EQ(s.provenance(), Provenance::truncation);
  EXPECT_GT(s.resolution(), 0.0);
}

TEST(FilteredSpectrum, ConstantSymbol) {
  FilterSpec spec;
  spec.half_width = 10;
  const SpectralSet s = filtered_spectrum(weyl_hopping(parse_symbol("0.5", 1)), spec);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s.values()[0], 0.5);
}

TEST(FilteredSpectrum, WorkerCountDoesNotChangeResult) {
  FilterSpec spec;
  spec.half_width = 8;
  const HoppingOperator a = weyl_hopping(parse_symbol("cos(xi1)+cos(xi2+b*x1)", 2, {{"b", 2.0 * std::numbers::pi / 3.0}}));
  const SpectralSet one = filtered_spectrum(a, spec);
  spec.workers = 3;
  const SpectralSet three = filtered_spectrum(a, spec);
  EXPECT_TRUE(std::equal(one.values().begin(), one.values().end(), three.values().begin(), three.values().end()));
}

TEST(FilteredSpectrum, ErrorPaths) {
  const HoppingOperator a = weyl_hopping(parse_symbol("cos(xi1)", 1));
  FilterSpec spec;
  spec.half_width = 5;
  spec.margin = 5;
  EXPECT_THROW(filtered_spectrum(a, spec), Error);
  spec.margin = 1;
  spec.tau = 1.0;
  EXPECT_THROW(filtered_spectrum(a, spec), Error);
  spec.tau = 1e-9;
  spec.margin = 4;
  EXPECT_THROW(filtered_spectrum(a, spec), AllBoundaryStatesError);
  spec.tau = 0.1;
  spec.half_width = 5000;
  spec.cap = 100;
  spec.margin = 0;
  EXPECT_THROW(filtered_spectrum(a, spec), WindowCapError);
}

TEST(Gaps, DetectAndLocate) {
  const SpectralSet s({0.0, 0.1, 0.2, 1.0, 1.1, 3.0}, 0.01, Provenance::exact);
  const auto gaps = detect_gaps(s, 0.5);
  ASSERT_EQ(gaps.size(), 2u);
  EXPECT_DOUBLE_EQ(gaps[0].lower, 0.2);
  EXPECT_DOUBLE_EQ(gaps[0].upper, 1.0);
  EXPECT_DOUBLE_EQ(gaps[1].width(), 1.9);
  EXPECT_DOUBLE_EQ(gaps[1].center(), 2.05);
  EXPECT_TRUE(detect_gaps(s, 5.0).empty());
  EXPECT_THROW(detect_gaps(s, 0.0), Error);

  EXPECT_DOUBLE_EQ(gap_near(s, 2.5, 0.5)->lower, 1.1);
  EXPECT_DOUBLE_EQ(gap_near(s, 0.5, 0.5)->lower, 0.2);
  EXPECT_FALSE(gap_near(s, 0.5, 5.0).has_value());
}

TEST(Gaps, TieGoesToLowerGap) {
  const SpectralSet s({0.0, 1.0, 1.5, 2.5}, 0.01, Provenance::exact);
  EXPECT_DOUBLE_EQ(gap_near(s, 1.25, 0.6)->lower, 0.0);
}

TEST(Gaps, EdgesOfEmptySet) {
  EXPECT_THROW(edges(SpectralSet()), EmptySpectrumError);
  const auto [lo, hi] = edges(SpectralSet({2.0, -1.0}, 0.1, Provenance::exact));
  EXPECT_EQ(lo, -1.0);
  EXPECT_EQ(hi, 2.0);
}
