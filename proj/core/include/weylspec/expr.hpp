#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weylspec {

inline constexpr int kMaxDim = 2;
inline constexpr std::size_t kMaxParseDepth = 256;
inline constexpr std::size_t kMaxParseNodes = 100000;

using ParamMap = std::map<std::string, double, std::less<>>;

enum class NodeKind { constant, x, xi, param, sum, product, neg, cos, sin };

/// Immutable expression tree over x_j, xi_j, named parameters and real constants.
/// Copies share structure; all nodes are const after construction.
class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  /// `axis` is 0-based; printed as x1, x2.
  static Expr x(int axis);
  static Expr xi(int axis);
  static Expr param(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr neg(Expr e);
  static Expr cos(Expr e);
  static Expr sin(Expr e);

  NodeKind kind() const;
  double value() const;
  int axis() const;
  const std::string& name() const;
  std::span<const Expr> children() const;

  std::size_t node_count() const;
  std::size_t depth() const;
  bool has_x() const;
  bool has_xi() const;
  bool has_param() const;
  bool is_constant(double v) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  static std::shared_ptr<Node> make_leaf(NodeKind kind);
  static Expr compound(NodeKind kind, std::vector<Expr> children);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Evaluates `e` at (x, xi). Spans may be shorter than kMaxDim only if the
/// expression does not reference the missing axes.
double eval(const Expr& e, std::span<const double> x, std::span<const double> xi,
            const ParamMap& params);

/// Parses the symbol grammar (see docs/grammar.md). Variables with axis > dim
/// are rejected. Syntax only: no structural admissibility checks.
Expr parse_expr(std::string_view text, int dim);

/// Text form that parse_expr reads back to a pointwise-equal tree.
std::string to_string(const Expr& e);

/// Replaces every x_j by replacement[j].
Expr substitute_x(const Expr& e, std::span<const Expr> replacement);

/// Replaces parameters found in `params` by constants.
Expr bind_params(const Expr& e, const ParamMap& params);

}  // namespace weylspec
