#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "detwidth/numerics.hpp"

namespace detwidth {

// CDF value as computed (raw) and after clamping to [0, 1]. `clamped` is set
// when the raw value left [0, 1] by more than kClampTolerance.
struct WidthResult {
  double value = 0.0;
  double raw = 0.0;
  bool clamped = false;
};

inline constexpr double kClampTolerance = 1e-6;

// n above which the Brownian bridge CDF switches from the Gram-ratio route to
// the Fredholm form on C_+ and C_-.
inline constexpr std::size_t kBridgeFredholmThreshold = 16;

// P(W_n < M) for n non-intersecting Brownian bridges on [0, 1], all starting
// and ending at 0. s-integral by Gauss-Legendre with s_quad nodes.
WidthResult width_cdf_bb(std::size_t n, double M, std::size_t s_quad = 32);

// The lattice integrand d^{-n} H_n(F, D_s) / H_n(F), F = e^{-n x^2}, at one s.
double bridge_integrand(std::size_t n, double M, double s);

// P(W_n(T) < M) for n non-intersecting continuous-time simple random walks
// (jump rate 1/2 each way) started at 0, 1, ..., n-1 and returning there at
// time T. W is top minus bottom.
WidthResult width_cdf_ct(std::size_t n, double T, std::size_t M, std::size_t s_quad = 64);

// P(W_n(2T) < 2M) for n non-intersecting discrete-time walks started at
// 0, 2, ..., 2n-2 and returning there after 2T steps.
WidthResult width_cdf_dt(std::size_t n, int T, std::size_t M, std::size_t s_quad = 0);

// Node counts of the s-circle rule chosen when s_quad = 0.
std::size_t default_s_quad_ct(std::size_t n, double T, std::size_t M);
std::size_t default_s_quad_dt(std::size_t n, int T, std::size_t M);

// Both sides of the Poisson summation identity for
// g(x, theta) = sum_h p(x + h M) e^{i M h theta}, p the standard normal
// density, summed over |h| <= h_max:
//   first:  the direct sum
//   second: (1/M) sum_h exp(-(2 pi h/M - theta)^2/2 + i x (2 pi h/M - theta))
std::pair<cplx, cplx> poisson_check(double x, double theta, double M, int h_max);

struct ProcessSpec {
  enum class Kind { brownian_bridge, ct_ssrw, dt_ssrw };
  Kind kind = Kind::brownian_bridge;
  std::size_t n = 1;
  double T = 1.0;  // unused for brownian_bridge; an integer for dt_ssrw

  static ProcessSpec brownian_bridge(std::size_t n);
  static ProcessSpec ct_ssrw(std::size_t n, double T);
  static ProcessSpec dt_ssrw(std::size_t n, int T);

  // Bounds of the width, when it is bounded (lower, upper); upper < 0 means
  // unbounded.
  std::pair<double, double> width_bounds() const;
};

struct ScalingLaw {
  double center = 0.0;
  double scale = 1.0;
  std::string regime;
};

ScalingLaw scaling_law(const ProcessSpec& spec);

// Threshold center + scale x and the normalizer 1/scale.
std::pair<double, double> scaling_eval(const ProcessSpec& spec, double x);

}  // namespace detwidth
