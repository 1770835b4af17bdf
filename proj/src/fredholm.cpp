#include "detwidth/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "detwidth/airy.hpp"

namespace detwidth {

namespace {

bool positive_weights(const std::vector<Contour>& contours) {
  for (const auto& c : contours)
    for (const cplx& w : c.rule.weights)
      if (!(w.imag() == 0.0 && w.real() > 0.0)) return false;
  return true;
}

std::vector<cplx> all_nodes(const std::vector<Contour>& contours) {
  std::vector<cplx> out;
  for (const auto& c : contours) out.insert(out.end(), c.rule.nodes.begin(), c.rule.nodes.end());
  return out;
}

std::vector<cplx> all_weights(const std::vector<Contour>& contours) {
  std::vector<cplx> out;
  for (const auto& c : contours)
    out.insert(out.end(), c.rule.weights.begin(), c.rule.weights.end());
  return out;
}

// Fills m(i, j) = k(i, j) scaled by the quadrature weights.
template <class Entry>
ComplexMatrix weighted_matrix(const std::vector<Contour>& contours, Assembly assembly,
                              Entry&& k) {
  const std::vector<cplx> w = all_weights(contours);
  const std::size_t n = w.size();
  const bool sym = assembly == Assembly::symmetric ||
                   (assembly == Assembly::automatic && positive_weights(contours));
  std::vector<cplx> left(n, 1.0), right(w);
  if (sym) {
    for (std::size_t i = 0; i < n; ++i) left[i] = right[i] = std::sqrt(w[i]);
  }
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = k(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw EvaluationError("kernel is not finite at node pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      m(i, j) = left[i] * v * right[j];
    }
  return m;
}

}  // namespace

KernelMatrix assemble(const Kernel& kernel, const std::vector<Contour>& contours,
                      Assembly assembly) {
  const std::vector<cplx> z = all_nodes(contours);
  KernelMatrix out;
  out.contours = contours;
  out.order = contours.empty() ? 0 : contours.front().size();
  out.matrix = weighted_matrix(contours, assembly,
                               [&](std::size_t i, std::size_t j) { return kernel(z[i], z[j]); });
  return out;
}

cplx fredholm_det(const KernelMatrix& k, double sign) {
  const std::size_t n = k.matrix.rows();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) + sign * k.matrix(i, j);
  return det_lu(a);
}

Contour rediscretize(const Contour& c, std::size_t nodes) {
  switch (c.kind) {
    case Contour::Kind::circle:
      return circle_contour(c.circle.radius, nodes, c.circle.orientation);
    case Contour::Kind::segment:
      return segment_contour(c.segment.a, c.segment.b, nodes);
    case Contour::Kind::wedge:
      return wedge_contour(c.wedge.vertex, c.wedge.angle, c.wedge.extent, nodes / 2);
  }
  throw ParameterError("rediscretize: unknown contour kind");
}

FredholmResult nystrom_det(const Kernel& kernel, const std::vector<Contour>& contours,
                           Assembly assembly) {
  FredholmResult r;
  r.value = fredholm_det(assemble(kernel, contours, assembly));
  r.order = contours.empty() ? 0 : contours.front().size();
  std::vector<Contour> half;
  for (const auto& c : contours) half.push_back(rediscretize(c, std::max<std::size_t>(c.size() / 2, 1)));
  r.err_estimate = std::abs(r.value - fredholm_det(assemble(kernel, half, assembly)));
  return r;
}

FredholmResult det_with_estimate(const std::function<KernelMatrix(std::size_t)>& build,
                                 std::size_t order, double sign) {
  FredholmResult r;
  r.order = order;
  r.value = fredholm_det(build(order), sign);
  r.err_estimate = std::abs(r.value - fredholm_det(build(std::max<std::size_t>(order / 2, 1)), sign));
  return r;
}

VWeight VWeight::power(std::size_t m) {
  VWeight v = rotated_power(m, 1.0);
  v.kind_ = Kind::power;
  return v;
}

VWeight VWeight::rotated_power(std::size_t m, cplx s) {
  if (m == 0) throw ParameterError("VWeight: m must be positive");
  if (std::abs(std::abs(s) - 1.0) > 1e-12) throw ParameterError("VWeight: |s| must be 1");
  VWeight v;
  v.kind_ = Kind::rotated_power;
  v.m_ = m;
  v.rot_ = s;
  return v;
}

VWeight VWeight::sine(double d, double s) {
  if (!(d > 0.0)) throw ParameterError("VWeight: d must be positive");
  VWeight v;
  v.kind_ = Kind::sine;
  v.d_ = d;
  v.shift_ = s;
  return v;
}

cplx VWeight::operator()(cplx z, Side side, cplx b) const {
  if (kind_ == Kind::sine) {
    // gamma'/gamma = pi d cot(alpha); written through e^{+-2 i alpha}, which
    // is small on the respective line.
    const cplx alpha = kPi * (d_ * z + shift_);
    cplx e;
    if (side == Side::upper) {
      e = std::exp(2.0 * kI * alpha);
    } else if (side == Side::lower) {
      e = std::exp(-2.0 * kI * alpha);
    } else {
      throw ParameterError("VWeight: sine kind lives on the lines");
    }
    return d_ * e / (1.0 - e) + 0.5 * (d_ - b);
  }
  const double m = static_cast<double>(m_);
  const cplx zm = std::pow(z, m);
  if (side == Side::inner) {
    const cplx u = zm * std::conj(rot_);
    return u / (1.0 - u);
  }
  if (side == Side::outer) {
    const cplx w = rot_ / zm;
    return (1.0 - b) + w / (1.0 - w);
  }
  throw ParameterError("VWeight: circle kinds live on the circles");
}

double VWeight::gamma_abs(cplx z) const {
  if (kind_ == Kind::sine) return std::abs(std::sin(kPi * (d_ * z + shift_)));
  return std::abs(std::pow(z, static_cast<double>(m_)) - rot_);
}

std::size_t suggested_circle_kernel_order(const WeightSymbol& f, std::size_t n, double eps) {
  const double geometric = 30.0 / std::log1p(eps);
  return static_cast<std::size_t>(std::ceil(geometric)) + suggested_circle_order(f, n);
}

namespace {

// Orders sharing a factor with m alias the z^{km} terms of v; step to a
// coprime one.
std::size_t coprime_order(std::size_t order, std::size_t m) {
  while (std::gcd(order, m) != 1) ++order;
  return order;
}

std::size_t default_strip_order(std::size_t n, double delta, double truncation) {
  return static_cast<std::size_t>(std::ceil(30.0 * truncation / delta)) + 4 * n + 32;
}

}  // namespace

KernelMatrix circle_kernel(const WeightSymbol& f, const VWeight& v, const OrthoBasis& basis,
                         std::size_t n, double eps, std::size_t order, const WeightSymbol* b,
                         Assembly assembly) {
  if (v.kind() == VWeight::Kind::sine) throw ParameterError("circle_kernel: circle v required");
  if (!(eps >= 0.0 && eps < 1.0)) throw ParameterError("circle_kernel: eps must lie in (0, 1)");
  if (n > basis.degree_max()) throw ParameterError("circle_kernel: basis degree below n");
  if (order == 0) order = coprime_order(suggested_circle_kernel_order(f, n, eps), v.m());
  std::vector<Contour> contours{circle_contour(1.0 - eps, order), circle_contour(1.0 + eps, order)};

  const std::vector<cplx> z = all_nodes(contours);
  const std::size_t total = z.size();
  std::vector<cplx> pn(total), ps(total), vf(total), zp(total);
  for (std::size_t i = 0; i < total; ++i) {
    zp[i] = std::pow(z[i], 1.0 - static_cast<double>(n));
    if (v.gamma_abs(z[i]) < 1e-8) {
      throw ContourCollisionError("circle_kernel: contour node within 1e-8 of the discrete set");
    }
    const Side side = i < order ? Side::inner : Side::outer;
    const cplx bz = b ? (*b)(z[i]) : cplx{1.0, 0.0};
    pn[i] = basis.eval(n, z[i]);
    ps[i] = reversed_poly(basis, n, z[i]);
    vf[i] = v(z[i], side, bz) * f(z[i]);
  }
  KernelMatrix out;
  out.contours = contours;
  out.order = order;
  out.matrix = weighted_matrix(contours, assembly, [&](std::size_t i, std::size_t j) {
    cplx k;
    if (std::abs(z[i] - z[j]) < kDiagonalSwitch * (1.0 + std::abs(z[i]))) {
      k = cd_kernel_circle(basis, n, z[i], z[j]);
    } else {
      k = zp[i] * (pn[i] * ps[j] - ps[i] * pn[j]) / (z[i] - z[j]);
    }
    return k * vf[j];
  });
  return out;
}

FredholmResult circle_fredholm_det(const WeightSymbol& f, const VWeight& v, const OrthoBasis& basis,
                        std::size_t n, double eps, std::size_t order, const WeightSymbol* b) {
  if (order == 0) order = coprime_order(suggested_circle_kernel_order(f, n, eps), v.m());
  return det_with_estimate(
      [&](std::size_t o) { return circle_kernel(f, v, basis, n, eps, o, b); }, order);
}

double strip_truncation(const WeightSymbol& f, const WeightSymbol& b, std::size_t n, double delta) {
  const double y = 0.5 * delta;
  auto env = [&](double x) {
    const cplx z{x, y};
    return std::abs(f(z) * b(z)) * std::pow(1.0 + std::norm(z), static_cast<double>(n));
  };
  double peak = 0.0, step = 0.05;
  for (double x = 0.0; x < 1e3; x += step) peak = std::max(peak, env(x));
  double x = step;
  while (x < 1e4 && (env(x) > 1e-18 * peak || env(-x) > 1e-18 * peak)) x += step;
  if (x >= 1e4) throw TruncationError("strip_truncation: weight does not decay along the line");
  return x;
}

double strip_truncation(const WeightSymbol& f, const WeightSymbol& b, const OrthoBasis& basis,
                       std::size_t n, double delta) {
  const double plain = strip_truncation(f, b, n, delta);
  if (!basis.has_recurrence()) return plain;
  return std::max(plain, christoffel_truncation(basis, n, 0.5 * delta, [&](cplx z) {
                    return std::abs(f(z) * b(z));
                  }));
}

KernelMatrix strip_kernel(const WeightSymbol& f, const WeightSymbol& b, const VWeight& v,
                         const OrthoBasis& basis, std::size_t n, double delta,
                         double truncation, std::size_t order, Assembly assembly) {
  if (v.kind() != VWeight::Kind::sine) throw ParameterError("strip_kernel: line v required");
  if (!(delta > 0.0)) throw ParameterError("strip_kernel: delta must be positive");
  if (n == 0 || n > basis.degree_max()) throw ParameterError("strip_kernel: basis degree below n");
  if (!(truncation > 0.0)) truncation = strip_truncation(f, b, basis, n, delta);
  if (order == 0) order = default_strip_order(n, delta, truncation);
  const double y = 0.5 * delta;
  std::vector<Contour> contours{segment_contour({-truncation, y}, {truncation, y}, order),
                                segment_contour({-truncation, -y}, {truncation, -y}, order)};
  const std::vector<cplx> z = all_nodes(contours);
  const std::size_t total = z.size();
  const double ratio = basis.leading()[n - 1] / basis.leading()[n];
  std::vector<cplx> pn(total), pm(total), vf(total);
  // rows carry p(z_i), columns p(w_j) f(w_j): the similarity
  // K -> diag(1/rho) K diag(rho) keeps both bounded far from the bulk
  std::vector<double> rho(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (v.gamma_abs(z[i]) < 1e-8) {
      throw ContourCollisionError("strip_kernel: contour node within 1e-8 of the lattice");
    }
    const Side side = i < order ? Side::upper : Side::lower;
    const auto p = basis.eval_all(n, z[i]);
    pn[i] = p[n];
    pm[i] = p[n - 1];
    rho[i] = std::sqrt(std::norm(pn[i]) + std::norm(pm[i]));
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) rho[i] = 1.0;
    vf[i] = v(z[i], side, b(z[i])) * f(z[i]);
  }
  KernelMatrix out;
  out.contours = contours;
  out.order = order;
  out.matrix = weighted_matrix(contours, assembly, [&](std::size_t i, std::size_t j) {
    cplx k;
    if (std::abs(z[i] - z[j]) < kDiagonalSwitch * (1.0 + std::abs(z[i]))) {
      k = cd_kernel_line(basis, n, z[i], z[j]);
    } else {
      k = ratio * (pn[i] * pm[j] - pm[i] * pn[j]) / (z[i] - z[j]);
    }
    return k * vf[j] * (rho[j] / rho[i]);
  });
  return out;
}

FredholmResult strip_fredholm_det(const WeightSymbol& f, const WeightSymbol& b, const VWeight& v,
                        const OrthoBasis& basis, std::size_t n, double delta, double truncation,
                        std::size_t order) {
  if (!(truncation > 0.0)) truncation = strip_truncation(f, b, basis, n, delta);
  if (order == 0) order = default_strip_order(n, delta, truncation);
  return det_with_estimate(
      [&](std::size_t o) { return strip_kernel(f, b, v, basis, n, delta, truncation, o); }, order);
}

double tracy_widom_F(double x, std::size_t order) {
  if (!std::isfinite(x)) throw ParameterError("tracy_widom_F: non-finite argument");
  if (order < 20) throw ParameterError("tracy_widom_F: order must be at least 20");
  // (x, infinity) -> (0, 1) by t -> x - c log(1 - t)
  const double c = 4.0;
  const QuadratureRule rule = gauss_legendre(order, 0.0, 1.0);
  std::vector<double> s(order), w(order), ai(order), aip(order);
  for (std::size_t i = 0; i < order; ++i) {
    const double t = rule.nodes[i].real();
    s[i] = x - c * std::log1p(-t);
    w[i] = rule.weights[i].real() * c / (1.0 - t);
    const AiryValues a = airy(s[i]);
    ai[i] = a.ai;
    aip[i] = a.aip;
  }
  ComplexMatrix m(order, order);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j) {
      double k;
      if (i == j) {
        k = aip[i] * aip[i] - s[i] * ai[i] * ai[i];
      } else {
        k = (ai[i] * aip[j] - aip[i] * ai[j]) / (s[i] - s[j]);
      }
      m(i, j) = (i == j ? 1.0 : 0.0) - std::sqrt(w[i]) * k * std::sqrt(w[j]);
    }
  return det_lu(m).real();
}

double limiting_kernel_det(double x, double wedge_extent, std::size_t order, double apex) {
  if (!(apex > 0.0)) throw ParameterError("limiting_kernel_det: apex must be positive");
  const Contour s1 = wedge_contour(apex, kPi / 3.0, wedge_extent, order);
  const Contour s2 = wedge_contour(-apex, 2.0 * kPi / 3.0, wedge_extent, order);
  auto mx = [x](cplx z) { return -0.5 * x * z + z * z * z / 6.0; };

  // e^{m} at the far end of s1 and e^{-2m} at the far end of s2
  const cplx end1 = apex + wedge_extent * std::polar(1.0, kPi / 3.0);
  const cplx end2 = -apex + wedge_extent * std::polar(1.0, 2.0 * kPi / 3.0);
  const double edge = std::max(std::exp(mx(end1).real()), std::exp(-2.0 * mx(end2).real()));
  if (edge > 1e-12) {
    throw TruncationError("limiting_kernel_det: wedge extent leaves boundary term " +
                          std::to_string(edge));
  }

  const std::size_t n1 = s1.size(), n2 = s2.size();
  // K = E B D B^T E W with B_ik = 1 / (xi_i - zeta_k)
  std::vector<cplx> e1(n1), d2(n2);
  for (std::size_t i = 0; i < n1; ++i) e1[i] = std::exp(mx(s1.rule.nodes[i]));
  for (std::size_t k = 0; k < n2; ++k) d2[k] = std::exp(-2.0 * mx(s2.rule.nodes[k])) * s2.rule.weights[k];
  ComplexMatrix bd(n1, n2), bt(n2, n1);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) {
      const cplx inv = 1.0 / (s1.rule.nodes[i] - s2.rule.nodes[k]);
      bd(i, k) = e1[i] * inv * d2[k];
      bt(k, i) = inv * e1[i] * s1.rule.weights[i];
    }
  const ComplexMatrix k = bd * bt;
  ComplexMatrix a(n1, n1);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - k(i, j);
  return det_lu(a).real();
}

}  // namespace detwidth
