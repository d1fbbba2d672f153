#include "weylspec/expr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <cmath>

#include "weylspec/error.hpp"

namespace weylspec {

struct Expr::Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  int axis = 0;
  std::string name;
  std::vector<Expr> children;
  std::size_t node_count = 1;
  std::size_t depth = 1;
  bool has_x = false;
  bool has_xi = false;
  bool has_param = false;
};

std::shared_ptr<Expr::Node> Expr::make_leaf(NodeKind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::compound(NodeKind kind, std::vector<Expr> children) {
  auto n = make_leaf(kind);
  std::size_t depth = 0;
  for (const auto& c : children) {
    n->node_count += c.node_count();
    depth = std::max(depth, c.depth());
    n->has_x = n->has_x || c.has_x();
    n->has_xi = n->has_xi || c.has_xi();
    n->has_param = n->has_param || c.has_param();
  }
  n->depth = depth + 1;
  n->children = std::move(children);
  return Expr(std::move(n));
}

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw NonFiniteError("non-finite constant in expression");
  auto n = make_leaf(NodeKind::constant);
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::x(int axis) {
  if (axis < 0 || axis >= kMaxDim) throw DimensionError("x axis out of range");
  auto n = make_leaf(NodeKind::x);
  n->axis = axis;
  n->has_x = true;
  return Expr(std::move(n));
}

Expr Expr::xi(int axis) {
  if (axis < 0 || axis >= kMaxDim) throw DimensionError("xi axis out of range");
  auto n = make_leaf(NodeKind::xi);
  n->axis = axis;
  n->has_xi = true;
  return Expr(std::move(n));
}

Expr Expr::param(std::string name) {
  auto n = make_leaf(NodeKind::param);
  n->name = std::move(name);
  n->has_param = true;
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  double folded = 0.0;
  bool any_constant = false;
  auto take = [&](const Expr& t) {
    if (t.kind() == NodeKind::constant) {
      folded += t.value();
      any_constant = true;
    } else {
      flat.push_back(t);
    }
  };
  for (const auto& t : terms) {
    if (t.kind() == NodeKind::sum) {
      for (const auto& c : t.children()) take(c);
    } else {
      take(t);
    }
  }
  if (any_constant && (folded != 0.0 || flat.empty())) flat.push_back(constant(folded));
  if (flat.empty()) return constant(0.0);
  if (flat.size() == 1) return flat.front();
  return compound(NodeKind::sum, std::move(flat));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  double folded = 1.0;
  // Signs and constants collect into one leading factor so that printing and
  // reparsing reach a fixed point.
  auto take = [&](auto& self, const Expr& f) -> void {
    if (f.kind() == NodeKind::constant) {
      folded *= f.value();
    } else if (f.kind() == NodeKind::neg) {
      folded = -folded;
      self(self, f.children().front());
    } else if (f.kind() == NodeKind::product) {
      for (const auto& c : f.children()) self(self, c);
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) take(take, f);
  if (folded == 0.0) return constant(0.0);
  if (flat.empty()) return constant(folded);
  if (folded == -1.0) return neg(flat.size() == 1 ? flat.front() : compound(NodeKind::product, std::move(flat)));
  if (folded != 1.0) flat.insert(flat.begin(), constant(folded));
  if (flat.size() == 1) return flat.front();
  return compound(NodeKind::product, std::move(flat));
}

Expr Expr::neg(Expr e) {
  if (e.kind() == NodeKind::constant) return constant(-e.value());
  if (e.kind() == NodeKind::neg) return e.children().front();
  if (e.kind() == NodeKind::product) return product({constant(-1.0), std::move(e)});
  return compound(NodeKind::neg, {std::move(e)});
}

Expr Expr::cos(Expr e) {
  if (e.kind() == NodeKind::constant) return constant(std::cos(e.value()));
  return compound(NodeKind::cos, {std::move(e)});
}

Expr Expr::sin(Expr e) {
  if (e.kind() == NodeKind::constant) return constant(std::sin(e.value()));
  return compound(NodeKind::sin, {std::move(e)});
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::axis() const { return node_->axis; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::children() const { return node_->children; }
std::size_t Expr::node_count() const { return node_->node_count; }
std::size_t Expr::depth() const { return node_->depth; }
bool Expr::has_x() const { return node_->has_x; }
bool Expr::has_xi() const { return node_->has_xi; }
bool Expr::has_param() const { return node_->has_param; }
bool Expr::is_constant(double v) const { return kind() == NodeKind::constant && value() == v; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::neg(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator-(const Expr& a) { return Expr::neg(a); }

double eval(const Expr& e, std::span<const double> x, std::span<const double> xi,
            const ParamMap& params) {
  switch (e.kind()) {
    case NodeKind::constant:
      return e.value();
    case NodeKind::x:
      if (static_cast<std::size_t>(e.axis()) >= x.size()) throw DimensionError("x vector too short");
      return x[e.axis()];
    case NodeKind::xi:
      if (static_cast<std::size_t>(e.axis()) >= xi.size()) throw DimensionError("xi vector too short");
      return xi[e.axis()];
    case NodeKind::param: {
      auto it = params.find(e.name());
      if (it == params.end()) throw UnboundParameterError(e.name());
      return it->second;
    }
    case NodeKind::sum: {
      double s = 0.0;
      for (const auto& c : e.children()) s += eval(c, x, xi, params);
      return s;
    }
    case NodeKind::product: {
      double p = 1.0;
      for (const auto& c : e.children()) p *= eval(c, x, xi, params);
      return p;
    }
    case NodeKind::neg:
      return -eval(e.children().front(), x, xi, params);
    case NodeKind::cos:
      return std::cos(eval(e.children().front(), x, xi, params));
    case NodeKind::sin:
      return std::sin(eval(e.children().front(), x, xi, params));
  }
  return 0.0;
}

namespace {

// expr   := term (('+' | '-') term)*
// term   := unary ('*' unary)*
// unary  := '-' unary | '+' unary | primary
// primary:= number | identifier | ('cos' | 'sin') '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    Expr e = parse_sum(0);
    skip_space();
    if (pos_ < text_.size()) fail(fmt::format("unexpected '{}'", text_[pos_]));
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  void enter(std::size_t depth) {
    if (depth > kMaxParseDepth) fail("nesting too deep");
    if (++nodes_ > kMaxParseNodes) fail("expression too large");
  }

  Expr parse_sum(std::size_t depth) {
    enter(depth);
    std::vector<Expr> terms{parse_product(depth + 1)};
    while (true) {
      if (accept('+')) {
        terms.push_back(parse_product(depth + 1));
      } else if (accept('-')) {
        terms.push_back(Expr::neg(parse_product(depth + 1)));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr parse_product(std::size_t depth) {
    enter(depth);
    std::vector<Expr> factors{parse_unary(depth + 1)};
    while (accept('*')) factors.push_back(parse_unary(depth + 1));
    return Expr::product(std::move(factors));
  }

  Expr parse_unary(std::size_t depth) {
    enter(depth);
    if (accept('-')) return Expr::neg(parse_unary(depth + 1));
    if (accept('+')) return parse_unary(depth + 1);
    return parse_primary(depth + 1);
  }

  Expr parse_primary(std::size_t depth) {
    enter(depth);
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum(depth + 1);
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier(depth);
    fail(fmt::format("unexpected '{}'", c));
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(v);
  }

  Expr parse_identifier(std::size_t depth) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "cos" || id == "sin") {
      expect('(');
      Expr arg = parse_sum(depth + 1);
      expect(')');
      return id == "cos" ? Expr::cos(std::move(arg)) : Expr::sin(std::move(arg));
    }
    if (auto axis = variable_axis(id, "xi")) return checked_axis(*axis, start, true);
    if (auto axis = variable_axis(id, "x")) return checked_axis(*axis, start, false);
    return Expr::param(std::string(id));
  }

  // "x"/"xi" alone mean axis 1; "x<digits>"/"xi<digits>" give the axis.
  static std::optional<int> variable_axis(std::string_view id, std::string_view prefix) {
    if (id.substr(0, prefix.size()) != prefix) return std::nullopt;
    const std::string_view rest = id.substr(prefix.size());
    if (rest.empty()) return 1;
    int axis = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), axis);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) return std::nullopt;
    return axis;
  }

  Expr checked_axis(int axis, std::size_t start, bool is_xi) {
    if (axis < 1 || axis > dim_) {
      pos_ = start;
      fail(fmt::format("variable {}{} out of range for d={}", is_xi ? "xi" : "x", axis, dim_));
    }
    return is_xi ? Expr::xi(axis - 1) : Expr::x(axis - 1);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
  std::size_t nodes_ = 0;
};

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::constant:
      if (e.value() < 0.0 || std::signbit(e.value())) {
        out += fmt::format("(-{})", -e.value());
      } else {
        out += fmt::format("{}", e.value());
      }
      return;
    case NodeKind::x:
      out += fmt::format("x{}", e.axis() + 1);
      return;
    case NodeKind::xi:
      out += fmt::format("xi{}", e.axis() + 1);
      return;
    case NodeKind::param:
      out += e.name();
      return;
    case NodeKind::sum: {
      out += '(';
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) out += " + ";
        first = false;
        print(c, out);
      }
      out += ')';
      return;
    }
    case NodeKind::product: {
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) out += '*';
        first = false;
        print(c, out);
      }
      return;
    }
    case NodeKind::neg:
      out += "(-";
      print(e.children().front(), out);
      out += ')';
      return;
    case NodeKind::cos:
    case NodeKind::sin:
      out += e.kind() == NodeKind::cos ? "cos(" : "sin(";
      print(e.children().front(), out);
      out += ')';
      return;
  }
}

template <class LeafFn>
Expr rebuild(const Expr& e, const LeafFn& leaf) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::x:
    case NodeKind::xi:
    case NodeKind::param:
      return leaf(e);
    case NodeKind::sum:
    case NodeKind::product: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const auto& c : e.children()) kids.push_back(rebuild(c, leaf));
      return e.kind() == NodeKind::sum ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
    }
    case NodeKind::neg:
      return Expr::neg(rebuild(e.children().front(), leaf));
    case NodeKind::cos:
      return Expr::cos(rebuild(e.children().front(), leaf));
    case NodeKind::sin:
      return Expr::sin(rebuild(e.children().front(), leaf));
  }
  return e;
}

}  // namespace

Expr parse_expr(std::string_view text, int dim) {
  if (dim < 1 || dim > kMaxDim) throw DimensionError(fmt::format("unsupported dimension {}", dim));
  return Parser(text, dim).parse();
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

Expr substitute_x(const Expr& e, std::span<const Expr> replacement) {
  return rebuild(e, [&](const Expr& leaf) {
    if (leaf.kind() != NodeKind::x) return leaf;
    if (static_cast<std::size_t>(leaf.axis()) >= replacement.size()) {
      throw DimensionError("substitution does not cover every x axis");
    }
    return replacement[leaf.axis()];
  });
}

Expr bind_params(const Expr& e, const ParamMap& params) {
  if (!e.has_param()) return e;
  return rebuild(e, [&](const Expr& leaf) {
    if (leaf.kind() != NodeKind::param) return leaf;
    auto it = params.find(leaf.name());
    return it == params.end() ? leaf : Expr::constant(it->second);
  });
}

}  // namespace weylspec
