#include "detwidth/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace detwidth {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                         " entries for a " + std::to_string(rows_) + "x" +
                         std::to_string(cols_) + " matrix");
  }
  require_finite("ComplexMatrix");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void ComplexMatrix::require_finite(const char* context) const {
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k].real()) || !std::isfinite(data_[k].imag())) {
      throw EvaluationError(std::string(context) + ": non-finite entry at (" +
                            std::to_string(k / cols_) + "," + std::to_string(k % cols_) +
                            ")");
    }
  }
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

LuDeterminant det_lu_full(const ComplexMatrix& m) {
  if (!m.square()) {
    throw DimensionError("det_lu: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  std::vector<cplx> a(m.entries().begin(), m.entries().end());
  cplx phase{1.0, 0.0};
  double log_abs = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return {cplx{0.0, 0.0}, -std::numeric_limits<double>::infinity()};
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      phase = -phase;
    }
    const cplx pivot = a[k * n + k];
    log_abs += std::log(best);
    phase *= pivot / best;
    for (std::size_t r = k + 1; r < n; ++r) {
      const cplx factor = a[r * n + k] / pivot;
      if (factor == cplx{0.0, 0.0}) continue;
      for (std::size_t c = k + 1; c < n; ++c) a[r * n + c] -= factor * a[k * n + c];
    }
  }
  return {phase * std::exp(log_abs), log_abs};
}

cplx det_lu(const ComplexMatrix& m) { return det_lu_full(m).value; }

QuadratureRule circle_rule(std::size_t m, double radius) {
  if (m == 0) throw ParameterError("circle_rule: m must be >= 1");
  if (!(radius > 0.0)) throw ParameterError("circle_rule: radius must be positive");
  QuadratureRule rule;
  rule.nodes.reserve(m);
  rule.weights.assign(m, cplx{1.0 / static_cast<double>(m), 0.0});
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
    rule.nodes.push_back(std::polar(radius, theta));
  }
  rule.exactness_degree = m - 1;
  return rule;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw ParameterError("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw ParameterError("gauss_legendre: need a < b");
  std::vector<double> x(n), w(n);
  const std::size_t half = (n + 1) / 2;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * z * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      dp = dn * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  QuadratureRule rule;
  const double mid = 0.5 * (a + b), half_len = 0.5 * (b - a);
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes.emplace_back(mid + half_len * x[i], 0.0);
    rule.weights.emplace_back(half_len * w[i], 0.0);
  }
  rule.exactness_degree = 2 * n - 1;
  return rule;
}

Contour circle_contour(double radius, std::size_t m, Orientation orientation) {
  Contour c{Contour::Kind::circle, {radius, orientation}, {}, {}, circle_rule(m, radius)};
  if (orientation == Orientation::negative) {
    for (auto& w : c.rule.weights) w = -w;
  }
  return c;
}

Contour segment_contour(cplx a, cplx b, std::size_t n) {
  const QuadratureRule ref = gauss_legendre(n, 0.0, 1.0);
  Contour c{Contour::Kind::segment, {}, {a, b}, {}, {}};
  c.rule.exactness_degree = ref.exactness_degree;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = ref.nodes[i].real();
    c.rule.nodes.push_back(a + t * (b - a));
    c.rule.weights.push_back(ref.weights[i] * (b - a));
  }
  return c;
}

Contour wedge_contour(cplx vertex, double angle, double extent, std::size_t n_per_ray) {
  if (!(extent > 0.0)) throw ParameterError("wedge_contour: extent must be positive");
  const QuadratureRule ref = gauss_legendre(n_per_ray, 0.0, extent);
  Contour c{Contour::Kind::wedge, {}, {}, {vertex, angle, extent}, {}};
  c.rule.exactness_degree = ref.exactness_degree;
  const cplx up = std::polar(1.0, angle);
  const cplx down = std::polar(1.0, -angle);
  const cplx measure = 1.0 / (2.0 * kPi * kI);
  // Upper ray is traversed toward the vertex, so its tangent is -up.
  for (std::size_t i = n_per_ray; i-- > 0;) {
    c.rule.nodes.push_back(vertex + ref.nodes[i].real() * up);
    c.rule.weights.push_back(-up * ref.weights[i].real() * measure);
  }
  for (std::size_t i = 0; i < n_per_ray; ++i) {
    c.rule.nodes.push_back(vertex + ref.nodes[i].real() * down);
    c.rule.weights.push_back(down * ref.weights[i].real() * measure);
  }
  return c;
}

}  // namespace detwidth
