#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "weylspec/error.hpp"
#include "weylspec/symbol.hpp"

using namespace weylspec;

namespace {

std::complex<double> coefficient_at(const ComplexExpr& c, std::vector<double> x) {
  return {eval(c.re, x, {}, {}), eval(c.im, x, {}, {})};
}

}  // namespace

TEST(SymbolValidate, AcceptsSupportedForms) {
  EXPECT_NO_THROW(parse_symbol("cos(xi1)", 1));
  EXPECT_NO_THROW(parse_symbol("cos(xi1)+cos(xi2+b*x1)", 2, {{"b", 1.0}}));
  EXPECT_NO_THROW(parse_symbol("(1 + 0.5*cos(x1))*cos(2*xi1 - x1)", 1));
  EXPECT_NO_THROW(parse_symbol("sin(x1)*sin(xi1) + 3", 1));
  EXPECT_NO_THROW(parse_symbol("cos(xi1 + x1 + cos(x2))", 2));
  EXPECT_THROW(parse_symbol("cos(xi1 + x1*cos(x2))", 2), StructureError);
}

TEST(SymbolValidate, RejectsStructuralViolations) {
  EXPECT_THROW(parse_symbol("xi1", 1), StructureError);
  EXPECT_THROW(parse_symbol("cos(xi1)*cos(xi1)", 1), StructureError);
  EXPECT_THROW(parse_symbol("cos(xi1*xi1)", 1), StructureError);
  EXPECT_THROW(parse_symbol("cos(0.5*xi1)", 1), StructureError);
  EXPECT_THROW(parse_symbol("cos(x1*xi1)", 1), StructureError);
  EXPECT_THROW(parse_symbol("cos(xi1 + x1*x1)", 1), StructureError);
  EXPECT_THROW(parse_symbol("x1*cos(xi1)", 1), StructureError);
  EXPECT_THROW(parse_symbol("x1", 1), StructureError);
  EXPECT_THROW(parse_symbol("", 1), ParseError);
  EXPECT_THROW(parse_symbol("cos(xi1)", 3), DimensionError);
}

TEST(SymbolValidate, ParameterFrequencyMustBeInteger) {
  EXPECT_NO_THROW(parse_symbol("cos(k*xi1)", 1, {{"k", 2.0}}));
  EXPECT_THROW(parse_symbol("cos(k*xi1)", 1, {{"k", 0.5}}), StructureError);
}

TEST(SymbolEval, MatchesExpression) {
  const Symbol s = parse_symbol("cos(xi1)+cos(xi2+b*x1)", 2, {{"b", 2.0}});
  const std::array<double, 2> x{0.3, 0.0};
  const std::array<double, 2> xi{0.1, 0.2};
  EXPECT_NEAR(s(x, xi), std::cos(0.1) + std::cos(0.2 + 0.6), 1e-15);
  const Symbol t = s.with_params({{"b", 0.0}});
  EXPECT_NEAR(t(x, xi), std::cos(0.1) + std::cos(0.2), 1e-15);
}

TEST(SymbolField, Parsing) {
  const PerturbationField f = parse_field("x1, x2", 2);
  const std::array<double, 2> p{1.5, -2.0};
  EXPECT_EQ(f(p), (std::vector<double>{1.5, -2.0}));
  EXPECT_EQ(parse_field("0, 0", 2)(p), (std::vector<double>{0.0, 0.0}));
  EXPECT_NEAR(parse_field("sin(x1)", 1)(std::array<double, 1>{0.5})[0], std::sin(0.5), 1e-15);
  EXPECT_THROW(parse_field("x1*x1", 1), StructureError);
  EXPECT_THROW(parse_field("x1", 2), DimensionError);
  EXPECT_THROW(parse_field("cos(xi1)", 1), StructureError);
  try {
    parse_field("x1, x2 +", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GE(e.position(), 4u);
  }
}

TEST(SymbolField, IdentityAndZero) {
  const std::array<double, 2> p{0.25, 4.0};
  EXPECT_EQ(identity_field(2)(p), (std::vector<double>{0.25, 4.0}));
  EXPECT_EQ(zero_field(2)(p), (std::vector<double>{0.0, 0.0}));
}

TEST(SymbolDecompose, HarperCoefficients) {
  const double b = 0.7;
  const auto terms = xi_decompose(parse_symbol("cos(xi1)+cos(xi2+b*x1)", 2, {{"b", b}}));
  ASSERT_EQ(terms.size(), 4u);
  const std::vector<double> x{1.3, -0.4};
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({1, 0}), x) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({-1, 0}), x) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({0, 1}), x) - 0.5 * std::polar(1.0, b * x[0])), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({0, -1}), x) - 0.5 * std::polar(1.0, -b * x[0])), 0.0, 1e-15);
}

TEST(SymbolDecompose, ConstantAndSineTerms) {
  const auto terms = xi_decompose(parse_symbol("2 + sin(xi1 + x1)", 1));
  const std::vector<double> x{0.9};
  // sin(t) = (e^{it} - e^{-it}) / 2i
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({0, 0}), x) - 2.0), 0.0, 1e-15);
  const auto expected = std::polar(1.0, x[0]) / std::complex<double>(0.0, 2.0);
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({1, 0}), x) - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(coefficient_at(terms.at({-1, 0}), x) - std::conj(expected)), 0.0, 1e-15);
}

TEST(SymbolDecompose, ReconstructsSymbol) {
  const Symbol s = parse_symbol("(1 + 0.3*cos(x1))*cos(2*xi1 - x1) - 0.5*sin(xi1)*sin(x1) + 0.2", 1);
  const auto terms = xi_decompose(s);
  for (double x : {-2.0, 0.0, 1.7}) {
    for (double xi : {-1.0, 0.4, 3.0}) {
      std::complex<double> sum = 0.0;
      for (const auto& [k, c] : terms) sum += coefficient_at(c, {x}) * std::polar(1.0, k[0] * xi);
      EXPECT_NEAR(sum.real(), s(std::array{x}, std::array{xi}), 1e-13);
      EXPECT_NEAR(sum.imag(), 0.0, 1e-13);
    }
  }
}

TEST(SymbolPerturb, ShiftsPosition) {
  const Symbol s = parse_symbol("cos(xi2 + b*x1)", 2, {{"b", 1.0}});
  const Symbol p = perturb(s, identity_field(2), 0.25);
  const std::array<double, 2> x{2.0, 0.0};
  const std::array<double, 2> xi{0.0, 0.1};
  EXPECT_NEAR(p(x, xi), std::cos(0.1 + 1.25 * 2.0), 1e-14);
  const Symbol q = perturb(parse_symbol("cos(xi1 + x1)", 1), parse_field("sin(x1)", 1), 0.5);
  EXPECT_NEAR(q(std::array{1.0}, std::array{0.0}), std::cos(1.0 + std::sin(0.5)), 1e-14);
  EXPECT_NEAR(perturb(s, zero_field(2), 0.9)(x, xi), s(x, xi), 1e-15);
  EXPECT_THROW(perturb(s, identity_field(1), 0.1), DimensionError);
}

TEST(SymbolProbe, DerivativesOfKnownFunctions) {
  ProbeGrid grid{{-3.0, -3.0}, {3.0, 3.0}, 13};
  const Expr e = parse_expr("cos(xi1 + 2*x1)", 1);
  EXPECT_NEAR(boundedness_probe(e, 1, std::vector{0, 0}, grid), 1.0, 1e-6);
  EXPECT_NEAR(boundedness_probe(e, 1, std::vector{1, 0}, grid), 2.0, 0.05);
  EXPECT_NEAR(boundedness_probe(e, 1, std::vector{2, 0}, grid), 4.0, 0.1);
  EXPECT_NEAR(boundedness_probe(e, 1, std::vector{0, 1}, grid), 1.0, 0.05);
  EXPECT_THROW(boundedness_probe(e, 1, std::vector{5, 0}, grid), Error);
  EXPECT_THROW(boundedness_probe(e, 1, std::vector{1, 0, 0}, grid), DimensionError);
}

TEST(SymbolProbe, GrowsForUnboundedExpression) {
  const Expr e = parse_expr("cos(xi1 + x1*x1)", 1);
  ProbeGrid small{{-1.0, 0.0}, {1.0, 0.0}, 9};
  ProbeGrid large{{-10.0, 0.0}, {10.0, 0.0}, 9};
  EXPECT_GT(boundedness_probe(e, 1, std::vector{1, 0}, large),
            5.0 * boundedness_probe(e, 1, std::vector{1, 0}, small));
}
