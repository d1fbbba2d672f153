#include "weylspec/runner/properties.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "weylspec/hofstadter.hpp"
#include "weylspec/metrics.hpp"
#include "weylspec/quantize.hpp"
#include "weylspec/symbol.hpp"

namespace weylspec::runner {

namespace {

constexpr double kExact = 1e-12;

using Rng = std::mt19937_64;

Eigen::MatrixXcd random_hermitian(Rng& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return scale * 0.5 * (m + m.adjoint());
}

double pick_scale(Rng& rng) {
  std::uniform_real_distribution<double> e(-3.0, 0.0);
  return std::pow(10.0, e(rng));
}

void record(PropertyCheck& c, double violation, double tolerance) {
  ++c.trials;
  if (violation > tolerance) {
    ++c.failures;
    c.max_violation = std::max(c.max_violation, violation);
  }
}

PropertyCheck norm_chain(Rng& rng, int trials, int n) {
  PropertyCheck c{"norm_chain", 0, 0, 0.0};
  for (int t = 0; t < trials; ++t) {
    const auto a = random_hermitian(rng, n, 1.0);
    const auto b = t % 2 == 0 ? random_hermitian(rng, n, 1.0) : Eigen::MatrixXcd(a + random_hermitian(rng, n, pick_scale(rng)));
    const auto chain = norm_chain_check(a, b);
    const double v = std::max({chain.edge_shift - chain.hausdorff, chain.hausdorff - chain.norm, 0.0});
    record(c, chain.pass ? 0.0 : std::max(v, kChainTolerance * 2), kChainTolerance);
  }
  return c;
}

PropertyCheck triangle_chain(Rng& rng, int trials, int n) {
  PropertyCheck c{"triangle_chain", 0, 0, 0.0};
  for (int t = 0; t < trials; ++t) {
    const auto a = random_hermitian(rng, n, 1.0);
    const Eigen::MatrixXcd b = a + random_hermitian(rng, n, pick_scale(rng));
    const auto c0 = random_hermitian(rng, n, 1.0);
    const Eigen::MatrixXcd d = c0 + random_hermitian(rng, n, pick_scale(rng));
    const auto ea = eigen_hermitian(a);
    const auto eb = eigen_hermitian(b);
    const auto ec = eigen_hermitian(c0);
    const auto ed = eigen_hermitian(d);
    const double rhs_common = spectral_norm(a - b) + spectral_norm(c0 - d);
    const double v = std::max(
        {std::abs(ea.front() - ed.front()) - rhs_common - std::abs(eb.front() - ec.front()),
         std::abs(ea.back() - ed.back()) - rhs_common - std::abs(eb.back() - ec.back()), 0.0});
    const bool pass = triangle_chain_check(a, b, c0, d);
    record(c, pass ? 0.0 : std::max(v, kChainTolerance * 2), kChainTolerance);
  }
  return c;
}

std::vector<double> random_set(Rng& rng) {
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> v(static_cast<std::size_t>(size(rng)));
  for (auto& x : v) x = u(rng);
  std::sort(v.begin(), v.end());
  return v;
}

double brute_hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  auto directed = [](const std::vector<double>& p, const std::vector<double>& q) {
    double worst = 0.0;
    for (double x : p) {
      double best = std::abs(x - q.front());
      for (double y : q) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::vector<PropertyCheck> hausdorff_axioms(Rng& rng, int trials) {
  PropertyCheck symmetry{"hausdorff_symmetry", 0, 0, 0.0};
  PropertyCheck identity{"hausdorff_identity", 0, 0, 0.0};
  PropertyCheck triangle{"hausdorff_triangle", 0, 0, 0.0};
  PropertyCheck exact{"hausdorff_vs_brute_force", 0, 0, 0.0};
  PropertyCheck edges{"edge_shift_below_hausdorff", 0, 0, 0.0};
  for (int t = 0; t < trials; ++t) {
    const auto a = random_set(rng);
    const auto b = random_set(rng);
    const auto c = random_set(rng);
    const double ab = hausdorff(a, b);
    const double ba = hausdorff(b, a);
    const double ac = hausdorff(a, c);
    const double bc = hausdorff(b, c);
    record(symmetry, std::abs(ab - ba), 0.0);
    // Identity of indiscernibles: zero on equal sets, positive on distinct ones.
    record(identity, std::max(hausdorff(a, a), a == b ? 0.0 : (ab > 0.0 ? 0.0 : 1.0)), 0.0);
    record(triangle, ac - ab - bc, kExact);
    record(exact, std::abs(ab - brute_hausdorff(a, b)), 0.0);
    record(edges, std::max(std::abs(a.front() - b.front()), std::abs(a.back() - b.back())) - ab, 0.0);
  }
  return {symmetry, identity, triangle, exact, edges};
}

std::string coefficient(Rng& rng) {
  std::uniform_int_distribution<int> u(-2000, 2000);
  int v = u(rng);
  if (v == 0) v = 1;
  return fmt::format("{}", v / 1000.0);
}

std::string xi_part(Rng& rng, int dim) {
  std::uniform_int_distribution<int> k(-2, 2);
  std::string out;
  bool any = false;
  for (int j = 1; j <= dim; ++j) {
    int n = k(rng);
    if (j == dim && !any && n == 0) n = 1;
    if (n == 0) continue;
    any = true;
    if (!out.empty()) out += " + ";
    out += fmt::format("{}*xi{}", n, j);
  }
  return out;
}

std::string x_phase(Rng& rng, int dim) {
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_int_distribution<int> axis(1, dim);
  switch (pick(rng)) {
    case 0:
      return "";
    case 1:
      return fmt::format(" + b*x{}", axis(rng));
    case 2:
      return fmt::format(" - {}*x{}", coefficient(rng), axis(rng));
    case 3:
      return fmt::format(" + sin(x{})", axis(rng));
    default:
      return fmt::format(" + {}", coefficient(rng));
  }
}

std::string bounded_factor(Rng& rng, int dim) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> axis(1, dim);
  switch (pick(rng)) {
    case 0:
      return "";
    case 1:
      return fmt::format("*cos(x{})", axis(rng));
    case 2:
      return fmt::format("*(1 + 0.5*sin({}*x{}))", coefficient(rng), axis(rng));
    default:
      return fmt::format("*cos(b*x{0})*cos(x{0})", axis(rng));
  }
}

ParamMap random_params(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * 3.141592653589793);
  return {{"b", u(rng)}};
}

std::vector<double> random_point(Rng& rng, int dim, double range) {
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<PropertyCheck> symbol_checks(Rng& rng, int trials) {
  PropertyCheck round{"dsl_round_trip", 0, 0, 0.0};
  PropertyCheck recon{"xi_decompose_reconstruction", 0, 0, 0.0};
  PropertyCheck herm{"hermiticity_residual", 0, 0, 0.0};
  PropertyCheck fiber{"fiber_matrix_self_adjoint", 0, 0, 0.0};
  std::uniform_int_distribution<int> dim_pick(1, 2);
  const auto sin_field = [](int d) { return parse_field(d == 1 ? "sin(x1)" : "sin(x1), sin(x2)", d); };

  std::vector<Symbol> builtins;
  builtins.push_back(parse_symbol("cos(xi1)", 1));
  builtins.push_back(parse_symbol("cos(xi1)+cos(x1)", 1));
  for (double alpha : {0.0, 1.0 / 3.0, 0.5, 17.0 / 32.0}) builtins.push_back(harper_symbol(alpha));
  const std::size_t base_count = builtins.size();
  for (std::size_t i = 0; i < base_count; ++i) {
    const int d = builtins[i].dim();
    builtins.push_back(perturb(builtins[i], sin_field(d), 0.05));
    builtins.push_back(perturb(builtins[i], identity_field(d), 0.05));
  }
  for (const auto& s : builtins) {
    record(herm, hermiticity_residual(weyl_hopping(s), 50, rng()), kExact);
  }

  for (int t = 0; t < trials; ++t) {
    const int dim = dim_pick(rng);
    const std::string text = random_symbol_text(rng(), dim);
    const ParamMap params = random_params(rng);
    const Symbol s1 = parse_symbol(text, dim, params);
    const std::string printed = to_string(s1.expr());
    const Symbol s2 = parse_symbol(printed, dim, params);
    double worst = to_string(s2.expr()) == printed ? 0.0 : 1.0;
    for (int k = 0; k < 4; ++k) {
      const auto x = random_point(rng, dim, 20.0);
      const auto xi = random_point(rng, dim, 4.0);
      worst = std::max(worst, std::abs(s1(x, xi) - s2(x, xi)));
    }
    record(round, worst, kExact);

    const auto terms = xi_decompose(s1);
    double r = 0.0;
    for (int k = 0; k < 4; ++k) {
      const auto x = random_point(rng, dim, 20.0);
      const auto xi = random_point(rng, dim, 4.0);
      std::complex<double> sum;
      static const ParamMap kNone;
      for (const auto& [hop, c] : terms) {
        double phase = 0.0;
        for (int j = 0; j < dim; ++j) phase += hop[j] * xi[j];
        sum += std::complex<double>(eval(c.re, x, {}, kNone), eval(c.im, x, {}, kNone)) * std::polar(1.0, phase);
      }
      r = std::max({r, std::abs(sum.real() - s1(x, xi)), std::abs(sum.imag())});
    }
    record(recon, r, kExact);

    const Symbol perturbed = perturb(s1, sin_field(dim), 0.05);
    const auto op = weyl_hopping(perturbed);
    record(herm, hermiticity_residual(op, 20, rng()), kExact);

    const auto x0 = random_point(rng, dim, 1.0);
    const auto dense = fiber_matrix(op, x0, dim == 1 ? 6 : 3).matrix.to_dense();
    record(fiber, (dense - dense.adjoint()).cwiseAbs().maxCoeff(), 0.0);
  }
  return {round, recon, herm, fiber};
}

PropertyCheck fit_recovery(Rng& rng, int trials) {
  PropertyCheck c{"fit_scaling_exact_power_law", 0, 0, 0.0};
  std::uniform_real_distribution<double> p(0.2, 2.0);
  std::uniform_real_distribution<double> logc(-2.0, 2.0);
  for (int t = 0; t < trials; ++t) {
    const double exponent = p(rng);
    const double lc = logc(rng);
    std::vector<ScalingPoint> pts;
    for (double d : {1e-4, 1e-3, 3e-3, 1e-2, 1e-1}) pts.push_back({d, std::exp(lc + exponent * std::log(d))});
    const auto fit = fit_scaling(pts);
    record(c, std::max({std::abs(fit.exponent - exponent), std::abs(fit.log_constant - lc), 1.0 - fit.r_squared}),
           kExact);
  }
  return c;
}

}  // namespace

std::string random_symbol_text(std::uint64_t seed, int dim) {
  Rng rng(seed);
  std::uniform_int_distribution<int> terms(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  std::string out;
  const int n = terms(rng);
  for (int t = 0; t < n; ++t) {
    if (t > 0) out += coin(rng) ? " + " : " - ";
    out += fmt::format("{}*{}({}{}){}", coefficient(rng), coin(rng) ? "cos" : "sin", xi_part(rng, dim), x_phase(rng, dim),
                       bounded_factor(rng, dim));
  }
  if (coin(rng)) out += fmt::format(" + {}*cos(x{})", coefficient(rng), dim);
  if (coin(rng)) out += fmt::format(" + {}", coefficient(rng));
  return out;
}

std::vector<PropertyCheck> run_property_suite(const PropertyCounts& counts, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PropertyCheck> out;
  out.push_back(norm_chain(rng, counts.pairs, counts.pair_size));
  out.push_back(triangle_chain(rng, counts.quadruples, counts.quadruple_size));
  for (auto& c : hausdorff_axioms(rng, counts.sets)) out.push_back(std::move(c));
  for (auto& c : symbol_checks(rng, counts.symbols)) out.push_back(std::move(c));
  out.push_back(fit_recovery(rng, 50));
  return out;
}

}  // namespace weylspec::runner
