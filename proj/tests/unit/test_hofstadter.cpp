#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "weylspec/error.hpp"
#include "weylspec/hofstadter.hpp"

using namespace weylspec;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralSet negated(const SpectralSet& s) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (auto& e : v) e = -e;
  return SpectralSet(std::move(v), s.resolution(), s.provenance());
}

}  // namespace

TEST(Flux, ReductionAndFormatting) {
  EXPECT_EQ(RationalFlux(2, 4), RationalFlux(1, 2));
  EXPECT_EQ(RationalFlux(5, 3), RationalFlux(2, 3));
  EXPECT_EQ(RationalFlux(-1, 3), RationalFlux(2, 3));
  EXPECT_EQ(RationalFlux(3, 3), RationalFlux(0, 1));
  EXPECT_EQ(RationalFlux(17, 32).to_string(), "17/32");
  EXPECT_THROW(RationalFlux(1, 0), Error);
  EXPECT_THROW(BlochGrid(0, 4), Error);
}

TEST(BlochMatrix, Examples) {
  const auto dirac = bloch_matrix(RationalFlux(1, 2), kPi / 2, kPi / 2);
  EXPECT_LT(dirac.norm(), 1e-15);
  const auto corner = bloch_matrix(RationalFlux(1, 2), 0.0, 0.0);
  Eigen::MatrixXcd expected(2, 2);
  expected << 2.0, 2.0, 2.0, -2.0;
  EXPECT_LT((corner - expected).norm(), 1e-15);
  const auto ev = bloch_eigenvalues(RationalFlux(1, 2), 0.0, 0.0);
  EXPECT_NEAR(ev[1], 2.0 * std::sqrt(2.0), 1e-14);
  const auto free = bloch_eigenvalues(RationalFlux(0, 1), 0.4, 1.1);
  ASSERT_EQ(free.size(), 1u);
  EXPECT_NEAR(free[0], 2.0 * std::cos(0.4) + 2.0 * std::cos(1.1), 1e-15);
}

TEST(BlochMatrix, BandOrderingMatchesDense) {
  for (const auto& flux : {RationalFlux(1, 3), RationalFlux(2, 5), RationalFlux(17, 32), RationalFlux(7, 48)}) {
    for (double t1 : {0.0, 0.3, 2.1}) {
      for (double t2 : {0.0, 0.7, 4.0}) {
        const auto h = bloch_matrix(flux, t1, t2);
        EXPECT_LT((h - h.adjoint()).norm(), 1e-15);
        const auto dense = eigen_hermitian(h);
        const auto band = bloch_eigenvalues(flux, t1, t2);
        ASSERT_EQ(dense.size(), band.size());
        for (std::size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(dense[i], band[i], 1e-10);
        double trace = 0.0;
        for (double e : band) trace += e;
        double diagonal = 0.0;
        for (std::int64_t m = 0; m < flux.q(); ++m) {
          diagonal += 2.0 * std::cos(2.0 * kPi * static_cast<double>(flux.p() * m) / flux.q() + t2);
        }
        EXPECT_NEAR(trace, diagonal, 1e-10);
      }
    }
  }
}

TEST(BlochMatrix, HalfFluxDispersion) {
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const double t1 = 2.0 * kPi * i / 16;
      const double t2 = 2.0 * kPi * j / 16;
      const auto ev = eigen_hermitian(bloch_matrix(RationalFlux(1, 2), t1, t2));
      const double e = std::sqrt(4.0 * std::cos(t1) * std::cos(t1) + 4.0 * std::cos(t2) * std::cos(t2));
      EXPECT_NEAR(ev[0], -e, 1e-10);
      EXPECT_NEAR(ev[1], e, 1e-10);
    }
  }
}

TEST(BlochSpectrumTest, HalfFluxEdges) {
  const auto s = bloch_spectrum(RationalFlux(1, 2), BlochGrid(512, 512));
  const auto [lo, hi] = edges(s);
  EXPECT_NEAR(lo, -2.0 * std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(hi, 2.0 * std::sqrt(2.0), 1e-6);
  double min_abs = INFINITY;
  for (double e : s.values()) min_abs = std::min(min_abs, std::abs(e));
  EXPECT_LE(min_abs, 1e-2);
  EXPECT_EQ(s.provenance(), Provenance::bloch);
}

TEST(BlochSpectrumTest, FreeLattice) {
  const auto s = bloch_spectrum(RationalFlux(0, 1), BlochGrid(64, 64));
  const auto [lo, hi] = edges(s);
  EXPECT_NEAR(lo, -4.0, 1e-4);
  EXPECT_NEAR(hi, 4.0, 1e-2);
  EXPECT_TRUE(detect_gaps(s, s.resolution()).empty());
}

TEST(BlochSpectrumTest, ThirdFluxHasTwoSymmetricGaps) {
  const auto s = bloch_spectrum(RationalFlux(1, 3), BlochGrid(256, 256));
  const auto gaps = detect_gaps(s, s.resolution());
  ASSERT_EQ(gaps.size(), 2u);
  EXPECT_NEAR(gaps[0].lower, -gaps[1].upper, 1e-9);
  EXPECT_NEAR(gaps[0].upper, -gaps[1].lower, 1e-9);
  EXPECT_LT(hausdorff(s, negated(s)), 1e-9);
}

TEST(BlochSpectrumTest, ParticleHoleSymmetry) {
  for (const auto& flux : {RationalFlux(1, 2), RationalFlux(2, 5), RationalFlux(17, 32)}) {
    const auto s = bloch_spectrum(flux, BlochGrid(16, 16));
    EXPECT_LT(hausdorff(s, negated(s)), 1e-9) << flux.to_string();
  }
}

TEST(BlochSpectrumTest, FluxPeriodicityAndReflection) {
  const BlochGrid grid(32, 32);
  const auto base = bloch_spectrum(RationalFlux(2, 7), grid);
  EXPECT_LT(hausdorff(base, bloch_spectrum(RationalFlux(9, 7), grid)), 1e-12);
  EXPECT_LE(hausdorff(base, bloch_spectrum(RationalFlux(5, 7), grid)), base.resolution());
}

TEST(BlochSpectrumTest, WorkersDoNotChangeResult) {
  const auto a = bloch_spectrum(RationalFlux(3, 8), BlochGrid(20, 12), 1);
  const auto b = bloch_spectrum(RationalFlux(3, 8), BlochGrid(20, 12), 3);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
}

TEST(BestRational, Examples) {
  EXPECT_EQ(best_rational(0.5, 10), RationalFlux(1, 2));
  EXPECT_EQ(best_rational(0.53125, 64), RationalFlux(17, 32));
  EXPECT_EQ(best_rational(2.0 - std::numbers::phi, 40), RationalFlux(13, 34));
  EXPECT_EQ(best_rational(1.0 / 3.0, 100), RationalFlux(1, 3));
  EXPECT_EQ(best_rational(1.25, 10), RationalFlux(1, 4));
  EXPECT_EQ(best_rational(0.0, 10), RationalFlux(0, 1));
  EXPECT_THROW(best_rational(0.5, 0), Error);
  EXPECT_THROW(best_rational(NAN, 10), NonFiniteError);
}

TEST(HarperSymbol, QuantizesToHalfTheBlochModel) {
  // At flux 1/2 in Landau gauge the window is exactly the Bloch model's
  // real-space form times one half.
  const Symbol s = harper_symbol(0.5);
  const FiberMatrix f = fiber_matrix(weyl_hopping(s), std::vector{0.0, 0.0}, 2);
  const Eigen::MatrixXcd h = f.matrix.to_dense();
  // Site (n1, n2) -> (n1, n2 + 1): h_{e2}(x) = 1/2 e^{i pi x1}.
  EXPECT_NEAR(std::abs(h(0, 1) - 0.5 * std::polar(1.0, kPi * -2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(h(5, 6) - 0.5 * std::polar(1.0, kPi * -1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(h(0, 5) - 0.5), 0.0, 1e-14);
}

TEST(Rescaled, ScalesValuesAndResolution) {
  const SpectralSet s({-2.0, 4.0}, 0.2, Provenance::bloch);
  const auto r = rescaled(s, 0.5);
  EXPECT_EQ(r.values()[0], -1.0);
  EXPECT_EQ(r.values()[1], 2.0);
  EXPECT_DOUBLE_EQ(r.resolution(), 0.1);
  EXPECT_THROW(rescaled(s, 0.0), Error);
}

TEST(DiracGap, SyntheticFixtureGivesExactExponent) {
  std::vector<ScalingPoint> widths;
  std::vector<ScalingPoint> centers;
  for (double d : {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    const SpectralSet s({-1.0, 0.0, std::sqrt(d), 1.0 + std::sqrt(d)}, 1e-6, Provenance::exact);
    const auto g = first_positive_gap(s, 1e-3);
    ASSERT_TRUE(g.has_value());
    widths.push_back({d, g->width()});
    centers.push_back({d, g->center()});
  }
  EXPECT_NEAR(fit_scaling(widths).exponent, 0.5, 1e-12);
  EXPECT_NEAR(fit_scaling(centers).exponent, 0.5, 1e-12);
}

TEST(DiracGap, HalfFluxIsGapless) {
  const auto s = bloch_spectrum(RationalFlux(1, 2), BlochGrid(64, 64));
  EXPECT_FALSE(first_positive_gap(s, s.resolution()).has_value());
  EXPECT_THROW(dirac_gap_experiment({0.0, 1.0 / 32, 1.0 / 64}, 256, BlochGrid(8, 8), 0.0), Error);
}

TEST(DiracGap, SmallSweep) {
  const auto r = dirac_gap_experiment({1.0 / 16, 1.0 / 32, 1.0 / 64}, 256, BlochGrid(16, 16), 0.0);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_EQ(r.points[0].flux, RationalFlux(9, 16));
  for (const auto& p : r.points) EXPECT_TRUE(p.gap.has_value());
  EXPECT_GT(r.width.exponent, 0.3);
  EXPECT_LT(r.width.exponent, 0.7);
}

TEST(Equivalence, SmallWindowAgrees) {
  FilterSpec filter;
  filter.half_width = 12;
  filter.margin = 2;
  const auto r = flux_equivalence_check(1.0 / 3.0, 0.25, filter, BlochGrid(16, 16), 64);
  EXPECT_EQ(r.flux, RationalFlux(1, 3));
  EXPECT_LT(r.distance, 0.25);
  EXPECT_EQ(r.engine.provenance(), Provenance::truncation);
}
