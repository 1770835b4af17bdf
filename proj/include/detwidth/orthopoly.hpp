#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "detwidth/numerics.hpp"
#include "detwidth/weight.hpp"

namespace detwidth {

// Value and first two derivatives of a polynomial at a point.
struct PolyJet {
  cplx value;
  cplx d1;
  cplx d2;
};

// Orthonormal polynomials p_0..p_{degree_max} for a weight on the unit circle
// (measure f(z) dz/(2 pi i z)) or the real line (measure f(x) dx).
class OrthoBasis {
 public:
  Support support() const noexcept { return support_; }
  std::size_t degree_max() const noexcept { return leading_.size() - 1; }

  // coeffs()[k][j] is the coefficient of z^j in p_k.
  const std::vector<std::vector<cplx>>& coeffs() const noexcept { return coeffs_; }
  // Leading coefficients kappa_k > 0.
  const std::vector<double>& leading() const noexcept { return leading_; }

  // Three-term recurrence x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1};
  // present for line bases only.
  bool has_recurrence() const noexcept { return !rec_a_.empty(); }
  const std::vector<double>& recurrence_a() const noexcept { return rec_a_; }
  const std::vector<double>& recurrence_b() const noexcept { return rec_b_; }

  cplx eval(std::size_t k, cplx z) const { return jet(k, z).value; }
  PolyJet jet(std::size_t k, cplx z) const;
  // p_0(z)..p_{k}(z)
  std::vector<cplx> eval_all(std::size_t k, cplx z) const;

  // sum_k log(kappa_k^{-2}) for k < n: the log of the continuous determinant.
  double log_inverse_kappa_product(std::size_t n) const;

 private:
  friend OrthoBasis make_circle_basis(Support, std::vector<std::vector<cplx>>);
  friend OrthoBasis make_line_basis(std::vector<double>, std::vector<double>, double);

  Support support_ = Support::circle;
  std::vector<std::vector<cplx>> coeffs_;
  std::vector<double> leading_;
  std::vector<double> rec_a_;
  std::vector<double> rec_b_;  // rec_b_[0] unused (0)
  double p0_ = 0.0;
};

// Gram-Schmidt (twice iterated) on 1, z, ..., z^n under the circle-rule
// discretization of f(z) dz/(2 pi i z) with quad_m nodes.
OrthoBasis build_circle_basis(const WeightSymbol& f, std::size_t n, std::size_t quad_m);

// A circle-rule order large enough that all moments up to index 2n are
// resolved to double precision for `f`.
std::size_t suggested_circle_order(const WeightSymbol& f, std::size_t n);

// p_k^*(z) = z^k conj(p_k(1/conj(z))), evaluated from reversed coefficients.
cplx reversed_poly(const OrthoBasis& basis, std::size_t k, cplx z);
PolyJet reversed_jet(const OrthoBasis& basis, std::size_t k, cplx z);

// z^{-n} (p_n(z) p_n^*(w) - p_n^*(z) p_n(w)) / (1 - w/z).
cplx cd_kernel_circle(const OrthoBasis& basis, std::size_t n, cplx z, cplx w);

enum class LineBasisMethod {
  automatic,     // closed-form Hermite recurrence for Gaussian weights
  gram_schmidt,  // orthogonalization on the truncated interval
};

// Half-width beyond which f(x) (1 + x^2)^degree drops below 1e-18 of its
// maximum.
double line_truncation(const WeightSymbol& f, std::size_t degree);

// Half-width beyond which weight(x + i im) sum_{k<=n} |p_k(x + i im)|^2 stays
// below rel times its maximum: where the n-point density of the weight has
// died out. Requires a basis with a recurrence.
double christoffel_truncation(const OrthoBasis& basis, std::size_t n, double im,
                              const std::function<double(cplx)>& weight, double rel = 1e-18);

// truncation <= 0 selects line_truncation(f, 2n + 2).
OrthoBasis build_line_basis(const WeightSymbol& f, std::size_t n, double truncation,
                            std::size_t quad_m,
                            LineBasisMethod method = LineBasisMethod::automatic);

// (kappa_{n-1}/kappa_n) (p_n(z) p_{n-1}(w) - p_{n-1}(z) p_n(w)) / (z - w).
cplx cd_kernel_line(const OrthoBasis& basis, std::size_t n, cplx z, cplx w);

// Relative distance below which the CD kernels switch to the Taylor form.
inline constexpr double kDiagonalSwitch = 1e-6;

}  // namespace detwidth
