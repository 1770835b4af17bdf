#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "detwidth/numerics.hpp"
#include "detwidth/orthopoly.hpp"
#include "detwidth/weight.hpp"

namespace detwidth {

// A finite discrete set carrying a discrete measure (uniform mass 1/|D| on the
// circle families, unit mass per lattice point on the real line).
class DiscreteNodeSet {
 public:
  enum class Kind { roots_of_unity, rotated_roots, shifted_lattice };

  // {z : z^m = 1}
  static DiscreteNodeSet roots_of_unity(std::size_t m);
  // {z : z^m = s}, |s| = 1
  static DiscreteNodeSet rotated_roots(std::size_t m, cplx s);
  // {(k - s)/d : k integer, |(k - s)/d| <= half_width}
  static DiscreteNodeSet shifted_lattice(double d, double s, double half_width);

  Kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<cplx>& nodes() const noexcept { return nodes_; }
  bool on_circle() const noexcept { return kind_ != Kind::shifted_lattice; }

  // Parameters: m (circle families), d and shift s, rotation s.
  std::size_t m() const noexcept { return m_; }
  double spacing_inverse() const noexcept { return d_; }
  double shift() const noexcept { return shift_; }
  cplx rotation() const noexcept { return rotation_; }

 private:
  Kind kind_ = Kind::roots_of_unity;
  std::vector<cplx> nodes_;
  std::size_t m_ = 0;
  double d_ = 0.0;
  double shift_ = 0.0;
  cplx rotation_{1.0, 0.0};
};

// d = M sqrt(n) / (sqrt(2) pi): the inverse lattice spacing of the Brownian
// bridge width formula.
double bridge_lattice_inverse_spacing(double M, std::size_t n);

// Half-width of the lattice window for Hankel sums of size n against f: the
// larger of the point where f(x) (1 + x^2)^{n-1} and the point where the
// n-point density f(x) sum_k p_k(x)^2 fall below 1e-18 of their maxima.
double hankel_window(const WeightSymbol& f, std::size_t n);

// Lattice {(k - s)/d} restricted to the hankel_window.
DiscreteNodeSet hankel_lattice(const WeightSymbol& f, double d, double s, std::size_t n);

struct DetResult {
  enum class Method { direct_lu, op_kappa_product, orthonormal_gram };

  cplx value{0.0, 0.0};
  double log_abs = 0.0;
  Method method = Method::direct_lu;
  bool cond_flag = false;
  // Value from the independent route, when one ran.
  std::optional<cplx> cross_check;
};

// det[(1/|D|) sum_{z in D} z^{k-j} f(z)]_{j,k<n}; zero when n > |D|.
DetResult discrete_toeplitz(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n);

// Brute-force Coulomb-gas sum over D^n; requires |D|^n <= 1e7.
cplx coulomb_oracle(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n);

// det[int z^{k-j} f(z) dz/(2 pi i z)]_{j,k<n} by the circle rule and LU,
// cross-checked against prod kappa_k^{-2}.
DetResult continuous_toeplitz(const WeightSymbol& f, std::size_t n, std::size_t quad_m);

// det[sum_{x in D} x^{j+k} f(x)]_{j,k<n}.
DetResult discrete_hankel(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n);

// det[int x^{j+k} f(x) dx]_{j,k<n} by Gauss-Legendre on [-L, L] and LU,
// cross-checked against prod kappa_k^{-2}. truncation <= 0 selects L
// automatically.
DetResult continuous_hankel(const WeightSymbol& f, std::size_t n, double truncation,
                            std::size_t quad_m);

// Ratios of a discrete determinant to the continuous determinant of the weight
// `basis` is orthonormal for, computed as the Gram determinant of p_0..p_{n-1}
// under the discrete measure. Well conditioned for any n the basis reaches.
DetResult discrete_toeplitz_ratio(const WeightSymbol& f, const DiscreteNodeSet& D,
                                  std::size_t n, const OrthoBasis& basis);
DetResult discrete_hankel_ratio(const WeightSymbol& f, const DiscreteNodeSet& D,
                                std::size_t n, const OrthoBasis& basis);

// T_n(f, D)/T_n(f) - 1 for D = {z^m = s}, with relative accuracy even when
// the defect is far below machine epsilon. The Gram entries of `basis` under
// D differ from the identity by aliased Fourier coefficients of f, which are
// summed exactly instead of being formed as a difference.
double discrete_toeplitz_defect(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n,
                                const OrthoBasis& basis);

}  // namespace detwidth
