#include "detwidth/width.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "detwidth/error.hpp"
#include "detwidth/fredholm.hpp"
#include "detwidth/orthopoly.hpp"
#include "detwidth/parallel.hpp"
#include "detwidth/structured_dets.hpp"
#include "detwidth/weight.hpp"

namespace detwidth {

namespace {

WidthResult finish(double raw) {
  WidthResult r;
  r.raw = raw;
  r.value = std::clamp(raw, 0.0, 1.0);
  r.clamped = raw < -kClampTolerance || raw > 1.0 + kClampTolerance;
  return r;
}

// Gap between the strip contours of the Fredholm route, in lattice spacings.
constexpr double kStripSpacings = 8.0;

double bridge_integrand_with(std::size_t n, double M, double s, const WeightSymbol& F,
                             const OrthoBasis& basis) {
  const double d = bridge_lattice_inverse_spacing(M, n);
  if (n <= kBridgeFredholmThreshold) {
    // fewer than n lattice points in the window: the determinant vanishes
    const double half = hankel_window(F, n);
    if (std::floor(s + half * d) - std::ceil(s - half * d) + 1.0 < static_cast<double>(n))
      return 0.0;
    const DiscreteNodeSet D = hankel_lattice(F, d, s, n);
    return discrete_hankel_ratio(F.scaled(1.0 / d), D, n, basis).value.real();
  }
  const WeightSymbol b = WeightSymbol::constant(Support::line, d);
  const double delta = kStripSpacings / d;
  return strip_fredholm_det(F.scaled(1.0 / d), b, VWeight::sine(d, s), basis, n, delta).value.real();
}

// Average of T_n(f, {z^M = s}) / T_n(f) over the circle rule in s.
double circle_average(const WeightSymbol& f, std::size_t n, std::size_t M, std::size_t q) {
  const OrthoBasis basis = build_circle_basis(f, n, suggested_circle_order(f, n));
  std::vector<double> defect(q);
  parallel_for(q, default_thread_count(), [&](std::size_t j) {
    const cplx s = std::polar(1.0, 2.0 * kPi * (j + 0.5) / static_cast<double>(q));
    defect[j] = discrete_toeplitz_defect(f, DiscreteNodeSet::rotated_roots(M, s), n, basis);
  });
  double acc = 0.0;
  for (double v : defect) acc += v;
  return 1.0 + acc / static_cast<double>(q);
}

// Number of aliases l with |fhat(l M)| above 1e-18 |fhat(0)|.
std::size_t alias_reach(const WeightSymbol& f, std::size_t M) {
  const double f0 = std::abs(f.fourier_coefficient(0));
  std::size_t l = 1;
  while (l < 4096 && std::abs(f.fourier_coefficient(static_cast<int>(l * M))) > 1e-18 * f0) ++l;
  return l;
}

}  // namespace

double bridge_integrand(std::size_t n, double M, double s) {
  if (n == 0) throw ParameterError("bridge_integrand: n must be positive");
  if (!(M > 0.0)) throw ParameterError("bridge_integrand: M must be positive");
  const WeightSymbol F = WeightSymbol::gaussian(static_cast<double>(n));
  const OrthoBasis basis = build_line_basis(F, n, 0.0, 0);
  return bridge_integrand_with(n, M, s, F, basis);
}

WidthResult width_cdf_bb(std::size_t n, double M, std::size_t s_quad) {
  if (n == 0) throw ParameterError("width_cdf_bb: n must be positive");
  if (!(M > 0.0) || !std::isfinite(M)) throw ParameterError("width_cdf_bb: M must be positive");
  if (s_quad < 8) throw ParameterError("width_cdf_bb: s_quad must be at least 8");
  const WeightSymbol F = WeightSymbol::gaussian(static_cast<double>(n));
  const OrthoBasis basis = build_line_basis(F, n, 0.0, 0);
  const QuadratureRule rule = gauss_legendre(s_quad, 0.0, 1.0);
  std::vector<double> vals(s_quad);
  parallel_for(s_quad, default_thread_count(), [&](std::size_t j) {
    vals[j] = bridge_integrand_with(n, M, rule.nodes[j].real(), F, basis);
  });
  double acc = 0.0;
  for (std::size_t j = 0; j < s_quad; ++j) acc += rule.weights[j].real() * vals[j];
  return finish(acc);
}

WidthResult width_cdf_ct(std::size_t n, double T, std::size_t M, std::size_t s_quad) {
  if (n == 0) throw ParameterError("width_cdf_ct: n must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("width_cdf_ct: T must be positive");
  if (M == 0) throw ParameterError("width_cdf_ct: M must be positive");
  // the initial spacing forces W >= n - 1
  if (M < n) return finish(0.0);
  if (s_quad == 0) s_quad = default_s_quad_ct(n, T, M);
  return finish(circle_average(WeightSymbol::exp_cosh(T), n, M, s_quad));
}

WidthResult width_cdf_dt(std::size_t n, int T, std::size_t M, std::size_t s_quad) {
  if (n == 0) throw ParameterError("width_cdf_dt: n must be positive");
  if (T < 1) throw ParameterError("width_cdf_dt: T must be a positive integer");
  if (M == 0) throw ParameterError("width_cdf_dt: M must be positive");
  if (M < n) return finish(0.0);
  if (s_quad == 0) s_quad = default_s_quad_dt(n, T, M);
  return finish(circle_average(WeightSymbol::binom(T), n, M, s_quad));
}

std::size_t default_s_quad_ct(std::size_t n, double T, std::size_t M) {
  if (M == 0) throw ParameterError("default_s_quad_ct: M must be positive");
  return 2 * n * alias_reach(WeightSymbol::exp_cosh(T), M) + 8;
}

std::size_t default_s_quad_dt(std::size_t n, int T, std::size_t M) {
  if (M == 0) throw ParameterError("default_s_quad_dt: M must be positive");
  // the integrand is a Laurent polynomial in s of degree below n (T + n) / M + n
  return 2 * (n * (static_cast<std::size_t>(T) + n) / M + n) + 1;
}

std::pair<cplx, cplx> poisson_check(double x, double theta, double M, int h_max) {
  if (!(M > 0.0)) throw ParameterError("poisson_check: M must be positive");
  if (h_max < 0) throw ParameterError("poisson_check: h_max must be nonnegative");
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  cplx direct{0.0, 0.0}, dual{0.0, 0.0};
  for (int h = -h_max; h <= h_max; ++h) {
    const double y = x + h * M;
    direct += norm * std::exp(-0.5 * y * y) * std::polar(1.0, M * h * theta);
    const double u = 2.0 * kPi * h / M - theta;
    dual += std::exp(-0.5 * u * u) * std::polar(1.0, x * u);
  }
  return {direct, dual / M};
}

ProcessSpec ProcessSpec::brownian_bridge(std::size_t n) {
  if (n == 0) throw ParameterError("ProcessSpec: n must be positive");
  return {Kind::brownian_bridge, n, 1.0};
}

ProcessSpec ProcessSpec::ct_ssrw(std::size_t n, double T) {
  if (n == 0) throw ParameterError("ProcessSpec: n must be positive");
  if (!(T > 0.0)) throw ParameterError("ProcessSpec: T must be positive");
  return {Kind::ct_ssrw, n, T};
}

ProcessSpec ProcessSpec::dt_ssrw(std::size_t n, int T) {
  if (n == 0) throw ParameterError("ProcessSpec: n must be positive");
  if (T < 1) throw ParameterError("ProcessSpec: T must be a positive integer");
  return {Kind::dt_ssrw, n, static_cast<double>(T)};
}

std::pair<double, double> ProcessSpec::width_bounds() const {
  const double nn = static_cast<double>(n);
  switch (kind) {
    case Kind::brownian_bridge:
      return {0.0, -1.0};
    case Kind::ct_ssrw:
      return {nn - 1.0, -1.0};
    case Kind::dt_ssrw:
      return {2.0 * nn - 2.0, 2.0 * nn - 2.0 + 2.0 * T};
  }
  return {0.0, -1.0};
}

ScalingLaw scaling_law(const ProcessSpec& spec) {
  const double n = static_cast<double>(spec.n);
  const double T = spec.T;
  switch (spec.kind) {
    case ProcessSpec::Kind::brownian_bridge:
      return {2.0 * std::sqrt(n), std::pow(2.0, -2.0 / 3.0) * std::pow(n, -1.0 / 6.0), "bridge"};
    case ProcessSpec::Kind::ct_ssrw:
      if (n < T)
        return {2.0 * std::sqrt(n * T),
                std::pow(2.0, -2.0 / 3.0) * std::cbrt(T) *
                    std::cbrt(std::sqrt(n / T) + std::sqrt(T / n)),
                "n<T"};
      return {n + T, std::pow(2.0, -1.0 / 3.0) * std::cbrt(T), "n>=T"};
    case ProcessSpec::Kind::dt_ssrw: {
      const double q = n * n + 2.0 * n * T;
      return {2.0 * std::sqrt(q), std::pow(q, -1.0 / 6.0) * std::pow(T, 2.0 / 3.0), "hexagon"};
    }
  }
  return {};
}

std::pair<double, double> scaling_eval(const ProcessSpec& spec, double x) {
  const ScalingLaw law = scaling_law(spec);
  return {law.center + law.scale * x, 1.0 / law.scale};
}

}  // namespace detwidth
