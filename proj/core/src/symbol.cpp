#include "weylspec/symbol.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weylspec/error.hpp"

namespace weylspec {

Hop negate(const Hop& k) {
  Hop out{};
  for (std::size_t j = 0; j < k.size(); ++j) out[j] = -k[j];
  return out;
}

namespace {

// Growth class of an expression in bare x: bounded (all derivatives bounded),
// affine (c·x_j plus bounded), or rejected.
enum class Growth { bounded, affine, unbounded };

Growth worst(Growth a, Growth b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

struct XiLinear {
  std::array<double, kMaxDim> k{};
  Expr phase;  // ξ-free remainder g(x)
};

XiLinear split_xi_linear(const Expr& e, const ParamMap& params) {
  if (!e.has_xi()) return {{}, e};
  switch (e.kind()) {
    case NodeKind::xi: {
      XiLinear out{{}, Expr::constant(0.0)};
      out.k[e.axis()] = 1.0;
      return out;
    }
    case NodeKind::sum: {
      XiLinear out{{}, Expr::constant(0.0)};
      std::vector<Expr> phases;
      for (const auto& c : e.children()) {
        XiLinear part = split_xi_linear(c, params);
        for (int j = 0; j < kMaxDim; ++j) out.k[j] += part.k[j];
        phases.push_back(part.phase);
      }
      out.phase = Expr::sum(std::move(phases));
      return out;
    }
    case NodeKind::neg: {
      XiLinear out = split_xi_linear(e.children().front(), params);
      for (auto& v : out.k) v = -v;
      out.phase = Expr::neg(out.phase);
      return out;
    }
    case NodeKind::product: {
      const Expr* xi_factor = nullptr;
      std::vector<Expr> others;
      for (const auto& c : e.children()) {
        if (c.has_xi()) {
          if (xi_factor != nullptr) throw StructureError("trig argument is nonlinear in xi");
          xi_factor = &c;
        } else {
          if (c.has_x()) throw StructureError("xi frequency depends on x");
          others.push_back(c);
        }
      }
      const Expr scale = Expr::product(others);
      const double c = eval(scale, {}, {}, params);
      XiLinear out = split_xi_linear(*xi_factor, params);
      for (auto& v : out.k) v *= c;
      out.phase = Expr::product({scale, out.phase});
      return out;
    }
    default:
      throw StructureError("xi must enter trig arguments linearly");
  }
}

std::array<int, kMaxDim> integer_frequencies(const XiLinear& lin) {
  std::array<int, kMaxDim> k{};
  for (int j = 0; j < kMaxDim; ++j) {
    const double r = std::round(lin.k[j]);
    if (std::abs(lin.k[j] - r) > 1e-9) {
      throw StructureError(fmt::format("non-integer xi frequency {} on axis {}", lin.k[j], j + 1));
    }
    k[j] = static_cast<int>(r);
  }
  return k;
}

Growth growth(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::param:
    case NodeKind::xi:
      return Growth::bounded;
    case NodeKind::x:
      return Growth::affine;
    case NodeKind::sum: {
      Growth g = Growth::bounded;
      for (const auto& c : e.children()) g = worst(g, growth(c));
      return g;
    }
    case NodeKind::neg:
      return growth(e.children().front());
    case NodeKind::product: {
      int affine = 0;
      bool other_has_x = false;
      for (const auto& c : e.children()) {
        const Growth g = growth(c);
        if (g == Growth::unbounded) return Growth::unbounded;
        if (g == Growth::affine) {
          ++affine;
        } else if (c.has_x()) {
          other_has_x = true;
        }
      }
      if (affine == 0) return Growth::bounded;
      return (affine == 1 && !other_has_x) ? Growth::affine : Growth::unbounded;
    }
    case NodeKind::cos:
    case NodeKind::sin:
      return growth(e.children().front()) == Growth::unbounded ? Growth::unbounded
                                                               : Growth::bounded;
  }
  return Growth::unbounded;
}

struct NodeInfo {
  bool xi_dependent = false;
};

NodeInfo validate_symbol_node(const Expr& e, const ParamMap& params) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::param:
    case NodeKind::x:
      return {};
    case NodeKind::xi:
      throw StructureError(fmt::format("xi{} outside trig argument", e.axis() + 1));
    case NodeKind::sum:
    case NodeKind::neg: {
      NodeInfo info;
      for (const auto& c : e.children()) {
        info.xi_dependent = validate_symbol_node(c, params).xi_dependent || info.xi_dependent;
      }
      return info;
    }
    case NodeKind::product: {
      int xi_factors = 0;
      for (const auto& c : e.children()) {
        if (validate_symbol_node(c, params).xi_dependent) ++xi_factors;
      }
      if (xi_factors > 1) throw StructureError("product of two xi-dependent factors");
      return {xi_factors == 1};
    }
    case NodeKind::cos:
    case NodeKind::sin: {
      const Expr& arg = e.children().front();
      const XiLinear lin = split_xi_linear(arg, params);
      integer_frequencies(lin);
      if (growth(lin.phase) == Growth::unbounded) {
        throw StructureError("trig argument has unbounded derivatives in x");
      }
      return {arg.has_xi()};
    }
  }
  return {};
}

void validate_symbol(const Expr& e, const ParamMap& params) {
  validate_symbol_node(e, params);
  // Trig nodes are bounded regardless of their phase, so any non-bounded
  // growth at the top comes from bare x outside a trig argument.
  switch (growth(e)) {
    case Growth::bounded:
      return;
    case Growth::affine:
      throw StructureError("bare x outside trig argument (unbounded symbol)");
    case Growth::unbounded:
      throw StructureError("nonlinear unbounded x-dependence");
  }
}

}  // namespace

Symbol::Symbol(int dim, Expr expr, ParamMap params)
    : dim_(dim), expr_(std::move(expr)), params_(std::move(params)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DimensionError(fmt::format("unsupported dimension {}", dim_));
  validate_symbol(expr_, params_);
}

Symbol Symbol::with_params(const ParamMap& overrides) const {
  ParamMap merged = params_;
  for (const auto& [name, value] : overrides) merged[name] = value;
  return Symbol(dim_, expr_, std::move(merged));
}

double Symbol::operator()(std::span<const double> x, std::span<const double> xi) const {
  return eval(expr_, x, xi, params_);
}

PerturbationField::PerturbationField(int dim, std::vector<Expr> components, ParamMap params)
    : dim_(dim), components_(std::move(components)), params_(std::move(params)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DimensionError(fmt::format("unsupported dimension {}", dim_));
  if (components_.size() != static_cast<std::size_t>(dim_)) {
    throw DimensionError(fmt::format("field has {} components, expected {}", components_.size(), dim_));
  }
  for (const auto& c : components_) {
    if (c.has_xi()) throw StructureError("perturbation field must not depend on xi");
    if (growth(c) == Growth::unbounded) {
      throw StructureError("nonlinear unbounded term in perturbation field");
    }
  }
}

std::vector<double> PerturbationField::operator()(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(eval(c, x, {}, params_));
  return out;
}

Symbol parse_symbol(std::string_view text, int dim, const ParamMap& params) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(0, "empty symbol");
  }
  return Symbol(dim, parse_expr(text, dim), params);
}

PerturbationField parse_field(std::string_view text, int dim, const ParamMap& params) {
  std::vector<Expr> components;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view piece =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      components.push_back(parse_expr(piece, dim));
    } catch (const ParseError& e) {
      throw ParseError(start + e.position(), fmt::format("in field component {}: {}",
                                                         components.size() + 1, e.what()));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return PerturbationField(dim, std::move(components), params);
}

PerturbationField identity_field(int dim) {
  std::vector<Expr> comps;
  for (int j = 0; j < dim; ++j) comps.push_back(Expr::x(j));
  return PerturbationField(dim, std::move(comps));
}

PerturbationField zero_field(int dim) {
  return PerturbationField(dim, std::vector<Expr>(static_cast<std::size_t>(dim), Expr::constant(0.0)));
}

namespace {

struct CoefficientTerms {
  std::vector<Expr> re;
  std::vector<Expr> im;
};

using TermMap = std::map<Hop, CoefficientTerms>;

void add_scaled(TermMap& out, const TermMap& in, const Expr& scale, bool negate_terms) {
  for (const auto& [k, terms] : in) {
    auto& dst = out[k];
    for (const auto& t : terms.re) {
      Expr v = Expr::product({scale, t});
      dst.re.push_back(negate_terms ? Expr::neg(v) : v);
    }
    for (const auto& t : terms.im) {
      Expr v = Expr::product({scale, t});
      dst.im.push_back(negate_terms ? Expr::neg(v) : v);
    }
  }
}

TermMap decompose(const Expr& e, const ParamMap& params) {
  TermMap out;
  if (!e.has_xi()) {
    out[Hop{}].re.push_back(e);
    return out;
  }
  const Expr one = Expr::constant(1.0);
  switch (e.kind()) {
    case NodeKind::sum:
      for (const auto& c : e.children()) add_scaled(out, decompose(c, params), one, false);
      return out;
    case NodeKind::neg:
      add_scaled(out, decompose(e.children().front(), params), one, true);
      return out;
    case NodeKind::product: {
      std::vector<Expr> others;
      const Expr* xi_factor = nullptr;
      for (const auto& c : e.children()) {
        if (c.has_xi()) {
          xi_factor = &c;
        } else {
          others.push_back(c);
        }
      }
      add_scaled(out, decompose(*xi_factor, params), Expr::product(others), false);
      return out;
    }
    case NodeKind::cos:
    case NodeKind::sin: {
      const XiLinear lin = split_xi_linear(e.children().front(), params);
      const auto freq = integer_frequencies(lin);
      Hop k{};
      std::copy(freq.begin(), freq.end(), k.begin());
      const Expr half = Expr::constant(0.5);
      const Expr c = Expr::product({half, Expr::cos(lin.phase)});
      const Expr s = Expr::product({half, Expr::sin(lin.phase)});
      if (e.kind() == NodeKind::cos) {
        // cos(t) = ½e^{it} + ½e^{-it}, t = k·ξ + g
        out[k].re.push_back(c);
        out[k].im.push_back(s);
        out[negate(k)].re.push_back(c);
        out[negate(k)].im.push_back(Expr::neg(s));
      } else {
        // sin(t) = e^{it}/(2i) - e^{-it}/(2i)
        out[k].re.push_back(s);
        out[k].im.push_back(Expr::neg(c));
        out[negate(k)].re.push_back(s);
        out[negate(k)].im.push_back(c);
      }
      return out;
    }
    default:
      throw StructureError("xi outside trig argument");
  }
}

}  // namespace

std::map<Hop, ComplexExpr> xi_decompose(const Symbol& s) {
  const Expr bound = bind_params(s.expr(), s.params());
  std::map<Hop, ComplexExpr> out;
  for (auto& [k, terms] : decompose(bound, s.params())) {
    out[k] = ComplexExpr{Expr::sum(std::move(terms.re)), Expr::sum(std::move(terms.im))};
  }
  return out;
}

Symbol perturb(const Symbol& s, const PerturbationField& field, double delta) {
  if (s.dim() != field.dim()) {
    throw DimensionError(fmt::format("symbol dimension {} does not match field dimension {}",
                                     s.dim(), field.dim()));
  }
  const int d = s.dim();
  std::vector<Expr> scaled;
  for (int j = 0; j < d; ++j) scaled.push_back(Expr::product({Expr::constant(delta), Expr::x(j)}));
  std::vector<Expr> replacement;
  for (int j = 0; j < d; ++j) {
    replacement.push_back(Expr::sum({Expr::x(j), substitute_x(field.components()[j], scaled)}));
  }
  ParamMap params = s.params();
  for (const auto& [name, value] : field.params()) params.emplace(name, value);
  return Symbol(d, substitute_x(s.expr(), replacement), std::move(params));
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double boundedness_probe(const Expr& e, int dim, std::span<const int> order, const ProbeGrid& grid,
                         const ParamMap& params) {
  const std::size_t nvars = 2 * static_cast<std::size_t>(dim);
  std::vector<int> alpha(nvars, 0);
  if (order.size() != static_cast<std::size_t>(dim) && order.size() != nvars) {
    throw DimensionError("derivative order must have d or 2d entries");
  }
  std::copy(order.begin(), order.end(), alpha.begin());
  const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (total > 4 || std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; })) {
    throw Error("derivative order must be nonnegative with total at most 4");
  }
  if (grid.lo.size() != nvars || grid.hi.size() != nvars || grid.points_per_axis < 1) {
    throw DimensionError("probe grid must span all 2d variables");
  }
  const double h = 2.0 * std::pow(2.220446049250313e-16, 1.0 / (total + 2));

  // Stencil of the nested central difference: list of (offset vector, weight).
  std::vector<std::pair<std::vector<double>, double>> stencil{{std::vector<double>(nvars, 0.0), 1.0}};
  for (std::size_t v = 0; v < nvars; ++v) {
    const int n = alpha[v];
    if (n == 0) continue;
    std::vector<std::pair<std::vector<double>, double>> next;
    for (const auto& [offset, weight] : stencil) {
      for (int i = 0; i <= n; ++i) {
        auto o = offset;
        o[v] += (0.5 * n - i) * h;
        next.emplace_back(std::move(o), weight * binomial(n, i) * ((i % 2) ? -1.0 : 1.0));
      }
    }
    stencil = std::move(next);
  }
  const double scale = std::pow(h, total);

  const int p = grid.points_per_axis;
  std::vector<int> idx(nvars, 0);
  std::vector<double> point(nvars), shifted(nvars);
  double best = 0.0;
  while (true) {
    for (std::size_t v = 0; v < nvars; ++v) {
      point[v] = p == 1 ? grid.lo[v] : grid.lo[v] + (grid.hi[v] - grid.lo[v]) * idx[v] / (p - 1);
    }
    double acc = 0.0;
    for (const auto& [offset, weight] : stencil) {
      for (std::size_t v = 0; v < nvars; ++v) shifted[v] = point[v] + offset[v];
      acc += weight * eval(e, std::span(shifted).first(dim), std::span(shifted).subspan(dim), params);
    }
    best = std::max(best, std::abs(acc / scale));
    std::size_t v = 0;
    while (v < nvars && ++idx[v] == p) idx[v++] = 0;
    if (v == nvars) break;
  }
  return best;
}

}  // namespace weylspec
