#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "detwidth/numerics.hpp"
#include "detwidth/orthopoly.hpp"
#include "detwidth/weight.hpp"

namespace detwidth {

using Kernel = std::function<cplx(cplx, cplx)>;

enum class Assembly {
  automatic,   // symmetric when every weight is a positive real
  symmetric,   // sqrt(w_i) K(z_i, z_j) sqrt(w_j)
  asymmetric,  // K(z_i, z_j) w_j
};

// Nystrom matrix of a kernel on a union of contours, quadrature weights
// already absorbed.
struct KernelMatrix {
  std::vector<Contour> contours;
  ComplexMatrix matrix;
  std::size_t order = 0;  // nodes per contour (per ray for wedges)
};

struct FredholmResult {
  cplx value{1.0, 0.0};
  double err_estimate = 0.0;  // |value(order) - value(order / 2)|
  std::size_t order = 0;
};

KernelMatrix assemble(const Kernel& kernel, const std::vector<Contour>& contours,
                      Assembly assembly = Assembly::automatic);

// det(I + sign * K) of an assembled kernel.
cplx fredholm_det(const KernelMatrix& k, double sign = 1.0);

// The same contour kind and geometry with a different node count.
Contour rediscretize(const Contour& c, std::size_t nodes);

// det(1 + K) on the contours, with the error estimate from a second
// evaluation on contours of half the node count.
FredholmResult nystrom_det(const Kernel& kernel, const std::vector<Contour>& contours,
                           Assembly assembly = Assembly::automatic);

// Evaluates build(order) and build(order / 2).
FredholmResult det_with_estimate(const std::function<KernelMatrix(std::size_t)>& build,
                                 std::size_t order, double sign = 1.0);

enum class Side { inner, outer, upper, lower };

// The weight v built from a function gamma vanishing exactly on the discrete
// set: z^m - 1, z^M - s, or sin(pi(d z + s)).
class VWeight {
 public:
  enum class Kind { power, rotated_power, sine };

  static VWeight power(std::size_t m);
  static VWeight rotated_power(std::size_t m, cplx s);
  static VWeight sine(double d, double s);

  Kind kind() const noexcept { return kind_; }
  std::size_t m() const noexcept { return m_; }
  cplx rotation() const noexcept { return rot_; }
  double d() const noexcept { return d_; }
  double shift() const noexcept { return shift_; }

  // Circle kinds (sides inner/outer):
  //   inner  -z gamma'/(m gamma)
  //   outer   z gamma'/(m gamma) - b
  // Sine kind (sides upper/lower):
  //   upper  -gamma'/(2 pi i gamma) - b/2
  //   lower   gamma'/(2 pi i gamma) - b/2
  cplx operator()(cplx z, Side side, cplx b = 1.0) const;

  // |gamma(z)|, for collision checks.
  double gamma_abs(cplx z) const;

 private:
  Kind kind_ = Kind::power;
  std::size_t m_ = 0;
  cplx rot_{1.0, 0.0};
  double d_ = 0.0;
  double shift_ = 0.0;
};

// Circle-rule order per circle that resolves v and the kernel for the given
// symbol to double precision.
std::size_t suggested_circle_kernel_order(const WeightSymbol& f, std::size_t n, double eps);

// K(z, w) = K_conti(z, w) v(w) f(w) on the circles of radii 1 - eps and
// 1 + eps, measure dz/(2 pi i z). `basis` is orthonormal for f b; b = 1 when
// null. det(1 + K) T_n(f b) = T_n(f, D).
KernelMatrix circle_kernel(const WeightSymbol& f, const VWeight& v, const OrthoBasis& basis,
                         std::size_t n, double eps, std::size_t order,
                         const WeightSymbol* b = nullptr,
                         Assembly assembly = Assembly::automatic);

FredholmResult circle_fredholm_det(const WeightSymbol& f, const VWeight& v, const OrthoBasis& basis,
                        std::size_t n, double eps, std::size_t order = 0,
                        const WeightSymbol* b = nullptr);

// K(z, w) = K_CD(z, w) v(w) f(w) on C_+ and C_- (Im z = +-delta/2, left to
// right, truncated to |Re z| <= truncation), measure dz. `basis` is
// orthonormal for f b. det(1 + K) H_n(f b) = H_n(f, D).
KernelMatrix strip_kernel(const WeightSymbol& f, const WeightSymbol& b, const VWeight& v,
                         const OrthoBasis& basis, std::size_t n, double delta,
                         double truncation, std::size_t order,
                         Assembly assembly = Assembly::automatic);

FredholmResult strip_fredholm_det(const WeightSymbol& f, const WeightSymbol& b, const VWeight& v,
                        const OrthoBasis& basis, std::size_t n, double delta,
                        double truncation = 0.0, std::size_t order = 0);

// Half-width for C_+- such that |f(z) b(z)| (1 + |z|^2)^n is below 1e-18 of its
// peak beyond it on Im z = delta/2.
double strip_truncation(const WeightSymbol& f, const WeightSymbol& b, std::size_t n, double delta);
// The same, widened to where |f b| sum_{k<=n} |p_k|^2 has decayed on Im z = delta/2.
double strip_truncation(const WeightSymbol& f, const WeightSymbol& b, const OrthoBasis& basis,
                       std::size_t n, double delta);

// GUE Tracy-Widom distribution F(x) = det(1 - K_Airy) on (x, infinity).
double tracy_widom_F(double x, std::size_t order = 60);

// det(1 - K_x) on the wedge through `apex` with rays at +-pi/3, where
// K_x(xi, eta) = e^{m(xi) + m(eta)} int e^{-2 m(zeta)} / ((xi - zeta)(eta - zeta))
// dzeta/(2 pi i) over the reflected wedge and m(z) = -x z / 2 + z^3 / 6.
double limiting_kernel_det(double x, double wedge_extent = 12.0, std::size_t order = 80,
                           double apex = 1.122462048309373);

}  // namespace detwidth
