#include "weylspec/band.hpp"

#include <algorithm>
#include <cmath>

#include "weylspec/error.hpp"

namespace weylspec {

HermitianBand::HermitianBand(std::size_t n, std::size_t bandwidth)
    : n_(n), kd_(bandwidth), lower_((bandwidth + 1) * n) {}

std::complex<double> HermitianBand::operator()(std::size_t i, std::size_t j) const {
  if (i >= j) return i - j <= kd_ ? lower_[j * (kd_ + 1) + (i - j)] : std::complex<double>{};
  return j - i <= kd_ ? std::conj(lower_[i * (kd_ + 1) + (j - i)]) : std::complex<double>{};
}

void HermitianBand::set(std::size_t i, std::size_t j, std::complex<double> value) {
  if (i < j) {
    std::swap(i, j);
    value = std::conj(value);
  }
  if (i >= n_ || i - j > kd_) throw DimensionError("band entry out of range");
  if (i == j) value = {value.real(), 0.0};
  lower_[j * (kd_ + 1) + (i - j)] = value;
}

void HermitianBand::add_to_diagonal(std::size_t i, double value) {
  lower_[i * (kd_ + 1)] += value;
}

Eigen::MatrixXcd HermitianBand::to_dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = j; i < std::min(n_, j + kd_ + 1); ++i) {
      const auto v = lower_[j * (kd_ + 1) + (i - j)];
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
    }
  }
  return out;
}

namespace {

struct Cplx {
  double re;
  double im;
};

// Lower-band workspace with one extra subdiagonal to hold the chased bulge.
class Workspace {
 public:
  explicit Workspace(const HermitianBand& a)
      : n_(a.size()), w_(a.bandwidth() + 1), data_((w_ + 1) * a.size(), Cplx{0.0, 0.0}) {
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = j; i < std::min(n_, j + a.bandwidth() + 1); ++i) {
        const auto v = a(i, j);
        at(i, j) = {v.real(), v.imag()};
      }
    }
  }

  // Valid for 0 <= i - j <= w.
  Cplx& at(std::size_t i, std::size_t j) { return data_[j * (w_ + 1) + (i - j)]; }

  std::size_t size() const { return n_; }
  std::size_t reach() const { return w_; }

  // Unitary similarity in plane (p, p+1) that zeroes (p+1, c) against (p, c).
  void rotate(std::size_t p, std::size_t c) {
    const std::size_t q = p + 1;
    const Cplx x = at(p, c);
    const Cplx y = at(q, c);
    if (y.re == 0.0 && y.im == 0.0) return;
    const double r = std::hypot(std::hypot(x.re, x.im), std::hypot(y.re, y.im));
    const Cplx xs{x.re / r, x.im / r};
    const Cplx ys{y.re / r, y.im / r};

    // Rows p, q, columns below p: R = [[conj x, conj y], [-y, x]] / r.
    const std::size_t jlo = q > w_ ? q - w_ : 0;
    for (std::size_t j = std::max(jlo, c); j < p; ++j) {
      Cplx& a = at(p, j);
      Cplx& b = at(q, j);
      const Cplx na{xs.re * a.re + xs.im * a.im + ys.re * b.re + ys.im * b.im,
                    xs.re * a.im - xs.im * a.re + ys.re * b.im - ys.im * b.re};
      const Cplx nb{-(ys.re * a.re - ys.im * a.im) + (xs.re * b.re - xs.im * b.im),
                    -(ys.re * a.im + ys.im * a.re) + (xs.re * b.im + xs.im * b.re)};
      a = na;
      b = nb;
    }

    // Columns p, q, rows below q: multiply by R^H = [[x, -conj y], [y, conj x]] / r.
    const std::size_t ihi = std::min(n_ - 1, p + w_);
    for (std::size_t i = q + 1; i <= ihi; ++i) {
      Cplx& a = at(i, p);
      Cplx& b = at(i, q);
      const Cplx na{a.re * xs.re - a.im * xs.im + b.re * ys.re - b.im * ys.im,
                    a.re * xs.im + a.im * xs.re + b.re * ys.im + b.im * ys.re};
      const Cplx nb{-(a.re * ys.re + a.im * ys.im) + (b.re * xs.re + b.im * xs.im),
                    -(a.im * ys.re - a.re * ys.im) + (b.im * xs.re - b.re * xs.im)};
      a = na;
      b = nb;
    }

    // 2x2 diagonal block B' = R B R^H with B = [[app, conj(aqp)], [aqp, aqq]].
    const double app = at(p, p).re;
    const double aqq = at(q, q).re;
    const Cplx aqp = at(q, p);
    // R B
    const Cplx m00{xs.re * app + ys.re * aqp.re + ys.im * aqp.im, -xs.im * app + ys.re * aqp.im - ys.im * aqp.re};
    const Cplx m01{xs.re * aqp.re - xs.im * aqp.im + ys.re * aqq, -xs.re * aqp.im - xs.im * aqp.re - ys.im * aqq};
    const Cplx m10{-ys.re * app + xs.re * aqp.re - xs.im * aqp.im, -ys.im * app + xs.re * aqp.im + xs.im * aqp.re};
    const Cplx m11{-(ys.re * aqp.re + ys.im * aqp.im) + xs.re * aqq,
                   -(-ys.re * aqp.im + ys.im * aqp.re) + xs.im * aqq};
    // (R B) R^H, columns: col0 = [x; y], col1 = [-conj y; conj x]
    const double npp = m00.re * xs.re - m00.im * xs.im + m01.re * ys.re - m01.im * ys.im;
    const Cplx nqp{m10.re * xs.re - m10.im * xs.im + m11.re * ys.re - m11.im * ys.im,
                   m10.re * xs.im + m10.im * xs.re + m11.re * ys.im + m11.im * ys.re};
    const double nqq = -(m10.re * ys.re + m10.im * ys.im) + (m11.re * xs.re + m11.im * xs.im);
    at(p, p) = {npp, 0.0};
    at(q, q) = {nqq, 0.0};
    at(q, p) = nqp;
    at(q, c) = {0.0, 0.0};
  }

 private:
  std::size_t n_;
  std::size_t w_;
  std::vector<Cplx> data_;
};

}  // namespace

std::vector<double> band_eigenvalues(const HermitianBand& a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < std::min(n, j + a.bandwidth() + 1); ++i) {
      const auto v = a(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NonFiniteError("non-finite matrix entry");
      }
    }
  }
  const std::size_t kd = std::min(a.bandwidth(), n - 1);
  Workspace ws(a);
  if (kd > 1) {
    for (std::size_t j = 0; j + 2 < n; ++j) {
      for (std::size_t i = std::min(j + kd, n - 1); i >= j + 2; --i) {
        ws.rotate(i - 1, j);
        // The rotation mixed columns i-1 and i; chase the bulge off the matrix.
        for (std::size_t k = i; k + kd < n; k += kd) ws.rotate(k + kd - 1, k - 1);
      }
    }
  }
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (std::size_t i = 0; i < n; ++i) {
    diag(static_cast<Eigen::Index>(i)) = ws.at(i, i).re;
    if (i + 1 < n) {
      const Cplx e = ws.at(i + 1, i);
      sub(static_cast<Eigen::Index>(i)) = std::hypot(e.re, e.im);
    }
  }
  if (n == 1) return {diag(0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("tridiagonal eigenvalue iteration failed");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace weylspec
