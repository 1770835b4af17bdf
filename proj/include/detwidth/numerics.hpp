#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "detwidth/error.hpp"

namespace detwidth {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

// Dense row-major complex matrix. Constructors reject non-finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const cplx> entries() const noexcept { return data_; }

  // Throws EvaluationError if any entry is NaN/Inf; used after in-place fills.
  void require_finite(const char* context) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

struct LuDeterminant {
  cplx value;
  double log_abs;  // -inf when the matrix is exactly singular
};

// Determinant by Gaussian elimination with partial pivoting.
LuDeterminant det_lu_full(const ComplexMatrix& m);
cplx det_lu(const ComplexMatrix& m);

// Nodes and weights of a discretized measure: integral ~ sum w_i g(z_i).
struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  std::size_t exactness_degree = 0;

  std::size_t size() const noexcept { return nodes.size(); }
};

// m-point trapezoid rule for dz/(2 pi i z) on |z| = radius, positive orientation.
// Integrates z^k exactly for |k| < m.
QuadratureRule circle_rule(std::size_t m, double radius = 1.0);

// n-point Gauss-Legendre rule on [a, b] for dx.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

template <class F>
cplx integrate(const QuadratureRule& rule, F&& g) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * g(rule.nodes[i]);
  return acc;
}

enum class Orientation { positive, negative };

// A discretized contour. The weights already include the measure of the
// contour kind:
//   circle:  dz/(2 pi i z)   (weights 1/m for positive orientation)
//   segment: dz              (complex weights along b - a)
//   wedge:   dz/(2 pi i)     (traversed from the upper ray to the lower ray)
struct Contour {
  struct Circle {
    double radius;
    Orientation orientation;
  };
  struct Segment {
    cplx a;
    cplx b;
  };
  struct Wedge {
    cplx vertex;
    double angle;   // the upper ray leaves the vertex at this angle
    double extent;  // length of each ray
  };
  enum class Kind { circle, segment, wedge };

  Kind kind;
  Circle circle{};
  Segment segment{};
  Wedge wedge{};
  QuadratureRule rule;

  std::size_t size() const noexcept { return rule.size(); }
};

Contour circle_contour(double radius, std::size_t m,
                       Orientation orientation = Orientation::positive);
Contour segment_contour(cplx a, cplx b, std::size_t n);
// `n_per_ray` Gauss-Legendre nodes on each ray of the wedge.
Contour wedge_contour(cplx vertex, double angle, double extent, std::size_t n_per_ray);

}  // namespace detwidth
