#pragma once

#include <array>
#include <compare>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "weylspec/expr.hpp"

namespace weylspec {

/// Lattice hop k ∈ ℤ^d; entries beyond the symbol dimension are zero.
using Hop = std::array<int, kMaxDim>;

Hop negate(const Hop& k);

/// Complex-valued x-dependent coefficient as a pair of real expressions.
struct ComplexExpr {
  Expr re;
  Expr im;
};

/// Real symbol a(x, xi) that is a trigonometric polynomial in xi with
/// bounded x-dependence. Construction validates the structure:
///   - xi_j only inside cos/sin arguments of the form k·xi + g(x), k integer;
///   - no product of two xi-dependent factors;
///   - x-dependence outside trig arguments is bounded (no bare x_j), and each
///     trig argument is affine in bare x_j plus bounded terms.
/// Parameters stay late-bound; `with_params` rebinds and revalidates.
class Symbol {
 public:
  Symbol(int dim, Expr expr, ParamMap params = {});

  int dim() const { return dim_; }
  const Expr& expr() const { return expr_; }
  const ParamMap& params() const { return params_; }

  Symbol with_params(const ParamMap& overrides) const;

  double operator()(std::span<const double> x, std::span<const double> xi) const;

 private:
  int dim_;
  Expr expr_;
  ParamMap params_;
};

/// Smooth vector field F: ℝ^d → ℝ^d whose components are affine in bare x_j
/// plus bounded trigonometric terms, so every derivative is bounded.
class PerturbationField {
 public:
  PerturbationField(int dim, std::vector<Expr> components, ParamMap params = {});

  int dim() const { return dim_; }
  std::span<const Expr> components() const { return components_; }
  const ParamMap& params() const { return params_; }

  std::vector<double> operator()(std::span<const double> x) const;

 private:
  int dim_;
  std::vector<Expr> components_;
  ParamMap params_;
};

Symbol parse_symbol(std::string_view text, int dim, const ParamMap& params = {});

/// `text` holds `dim` comma-separated component expressions.
PerturbationField parse_field(std::string_view text, int dim, const ParamMap& params = {});

PerturbationField identity_field(int dim);
PerturbationField zero_field(int dim);

/// a(x, xi) = Σ_k c_k(x) e^{i k·xi}. Coefficients are ξ-free; since a is real,
/// c_{-k} = conj(c_k) holds identically. Parameters are bound into the result.
std::map<Hop, ComplexExpr> xi_decompose(const Symbol& s);

/// Symbol with every x_j replaced by x_j + F_j(delta·x).
Symbol perturb(const Symbol& s, const PerturbationField& field, double delta);

/// Axis-aligned sampling box over the 2d variables (x_1..x_d, xi_1..xi_d).
struct ProbeGrid {
  std::vector<double> lo;
  std::vector<double> hi;
  int points_per_axis = 9;
};

/// Max over the grid of a central finite-difference estimate of
/// D_x^alpha D_xi^beta e, where `order` = (alpha_1..alpha_d, beta_1..beta_d).
/// Total order must be at most 4. Diagnostic only.
double boundedness_probe(const Expr& e, int dim, std::span<const int> order, const ProbeGrid& grid,
                         const ParamMap& params = {});

}  // namespace weylspec
