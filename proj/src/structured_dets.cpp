#include "detwidth/structured_dets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace detwidth {

DiscreteNodeSet DiscreteNodeSet::roots_of_unity(std::size_t m) {
  return rotated_roots(m, cplx{1.0, 0.0});
}

DiscreteNodeSet DiscreteNodeSet::rotated_roots(std::size_t m, cplx s) {
  if (m == 0) throw ParameterError("rotated_roots: empty node set");
  if (std::abs(std::abs(s) - 1.0) > 1e-12) throw ParameterError("rotated_roots: |s| must be 1");
  DiscreteNodeSet d;
  d.kind_ = s == cplx{1.0, 0.0} ? Kind::roots_of_unity : Kind::rotated_roots;
  d.m_ = m;
  d.rotation_ = s;
  const double base = std::arg(s);
  for (std::size_t k = 0; k < m; ++k) {
    d.nodes_.push_back(std::polar(1.0, (base + 2.0 * kPi * static_cast<double>(k)) /
                                           static_cast<double>(m)));
  }
  return d;
}

DiscreteNodeSet DiscreteNodeSet::shifted_lattice(double d, double s, double half_width) {
  if (!(d > 0.0)) throw ParameterError("shifted_lattice: d must be positive");
  if (!(half_width > 0.0)) throw ParameterError("shifted_lattice: half width must be positive");
  DiscreteNodeSet out;
  out.kind_ = Kind::shifted_lattice;
  out.d_ = d;
  out.shift_ = s;
  const auto lo = static_cast<long long>(std::ceil(s - half_width * d));
  const auto hi = static_cast<long long>(std::floor(s + half_width * d));
  for (long long k = lo; k <= hi; ++k) {
    out.nodes_.emplace_back((static_cast<double>(k) - s) / d, 0.0);
  }
  if (out.nodes_.empty()) throw ParameterError("shifted_lattice: no nodes inside window");
  return out;
}

double bridge_lattice_inverse_spacing(double M, std::size_t n) {
  return M * std::sqrt(static_cast<double>(n)) / (std::sqrt(2.0) * kPi);
}

double hankel_window(const WeightSymbol& f, std::size_t n) {
  const double plain = line_truncation(f, n > 0 ? n - 1 : 0);
  if (n < 2) return plain;
  const OrthoBasis basis = build_line_basis(f, n, 0.0, 0);
  return std::max(plain, christoffel_truncation(basis, n - 1, 0.0, [&](cplx z) {
                    return std::abs(f(z));
                  }));
}

DiscreteNodeSet hankel_lattice(const WeightSymbol& f, double d, double s, std::size_t n) {
  return DiscreteNodeSet::shifted_lattice(d, s, hankel_window(f, n));
}

namespace {

DetResult from_lu(const ComplexMatrix& m, DetResult::Method method) {
  const LuDeterminant lu = det_lu_full(m);
  DetResult r;
  r.value = lu.value;
  r.log_abs = lu.log_abs;
  r.method = method;
  return r;
}

DetResult zero_result() {
  DetResult r;
  r.value = 0.0;
  r.log_abs = -std::numeric_limits<double>::infinity();
  return r;
}

void require_circle(const WeightSymbol& f, const DiscreteNodeSet& D, const char* who) {
  if (f.support() != Support::circle) throw ParameterError(std::string(who) + ": weight not on circle");
  if (D.size() == 0) throw ParameterError(std::string(who) + ": empty node set");
  if (!D.on_circle()) throw ParameterError(std::string(who) + ": node set not on the circle");
}

void require_line(const WeightSymbol& f, const DiscreteNodeSet& D, const char* who) {
  if (f.support() != Support::line) throw ParameterError(std::string(who) + ": weight not on line");
  if (D.size() == 0) throw ParameterError(std::string(who) + ": empty node set");
  if (D.on_circle()) throw ParameterError(std::string(who) + ": node set not on the line");
}

// Relative envelope mass at the two outermost lattice points.
void check_lattice_truncation(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n) {
  const double power = n > 0 ? static_cast<double>(n - 1) : 0.0;
  auto env = [&](cplx x) { return std::abs(f(x)) * std::pow(1.0 + std::norm(x), power); };
  // the first lattice points left out on either side carry the tail
  const double step = 1.0 / D.spacing_inverse();
  const cplx below = D.nodes().front() - step, above = D.nodes().back() + step;
  double peak = std::max(env(below), env(above));
  for (const cplx& x : D.nodes()) peak = std::max(peak, env(x));
  const double edge = std::max(env(below), env(above));
  if (peak > 0.0 && edge > 1e-12 * peak) {
    throw TruncationError("discrete_hankel: lattice window cuts off relative mass " +
                          std::to_string(edge / peak));
  }
}

}  // namespace

DetResult discrete_toeplitz(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n) {
  require_circle(f, D, "discrete_toeplitz");
  if (n == 0) return DetResult{1.0, 0.0, DetResult::Method::direct_lu, false, {}};
  if (n > D.size()) return zero_result();
  // c[p + n - 1] = (1/|D|) sum z^p f(z), p in [-(n-1), n-1]
  std::vector<cplx> c(2 * n - 1, cplx{0.0, 0.0});
  const double inv = 1.0 / static_cast<double>(D.size());
  for (const cplx& z : D.nodes()) {
    const cplx fz = f(z) * inv;
    cplx up = fz, down = fz;
    c[n - 1] += fz;
    const cplx zinv = 1.0 / z;
    for (std::size_t p = 1; p < n; ++p) {
      up *= z;
      down *= zinv;
      c[n - 1 + p] += up;
      c[n - 1 - p] += down;
    }
  }
  ComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = c[n - 1 + k - j];
  m.require_finite("discrete_toeplitz");
  return from_lu(m, DetResult::Method::direct_lu);
}

cplx coulomb_oracle(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n) {
  if (D.size() == 0) throw ParameterError("coulomb_oracle: empty node set");
  if (n == 0) return 1.0;
  const double terms = std::pow(static_cast<double>(D.size()), static_cast<double>(n));
  if (terms > 1e7) {
    throw OracleScaleError("coulomb_oracle: |D|^n = " + std::to_string(terms) + " exceeds 1e7");
  }
  const auto& z = D.nodes();
  std::vector<cplx> fz(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) fz[i] = f(z[i]);
  std::vector<std::size_t> idx(n, 0);
  cplx total{0.0, 0.0};
  const auto count = static_cast<std::size_t>(terms + 0.5);
  for (std::size_t t = 0; t < count; ++t) {
    cplx term{1.0, 0.0};
    for (std::size_t a = 0; a < n && term != cplx{0.0, 0.0}; ++a) {
      term *= fz[idx[a]];
      for (std::size_t b = a + 1; b < n; ++b) term *= std::norm(z[idx[a]] - z[idx[b]]);
    }
    total += term;
    for (std::size_t a = 0; a < n; ++a) {
      if (++idx[a] < z.size()) break;
      idx[a] = 0;
    }
  }
  double norm = 1.0;
  for (std::size_t k = 2; k <= n; ++k) norm *= static_cast<double>(k);
  norm *= terms;
  // The nodes carry mass 1/|D| on the circle and 1 on a lattice.
  if (!D.on_circle()) norm /= terms;
  return total / norm;
}

DetResult continuous_toeplitz(const WeightSymbol& f, std::size_t n, std::size_t quad_m) {
  if (f.support() != Support::circle) throw ParameterError("continuous_toeplitz: weight not on circle");
  if (n == 0) return DetResult{1.0, 0.0, DetResult::Method::direct_lu, false, cplx{1.0, 0.0}};
  if (quad_m < 2 * n) throw ParameterError("continuous_toeplitz: quad_m too small");
  const QuadratureRule rule = circle_rule(quad_m);
  std::vector<cplx> c(2 * n - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < quad_m; ++i) {
    const cplx z = rule.nodes[i];
    const cplx fz = f(z) * rule.weights[i];
    const double theta = std::arg(z);
    c[n - 1] += fz;
    for (std::size_t p = 1; p < n; ++p) {
      const double ang = theta * static_cast<double>(p);
      c[n - 1 + p] += fz * std::polar(1.0, ang);
      c[n - 1 - p] += fz * std::polar(1.0, -ang);
    }
  }
  ComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = c[n - 1 + k - j];
  m.require_finite("continuous_toeplitz");
  DetResult r = from_lu(m, DetResult::Method::direct_lu);
  const OrthoBasis basis = build_circle_basis(f, n - 1, quad_m);
  const cplx kappa = std::exp(basis.log_inverse_kappa_product(n));
  r.cross_check = kappa;
  r.cond_flag = std::abs(r.value - kappa) > 1e-8 * std::abs(kappa);
  return r;
}

DetResult discrete_hankel(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n) {
  require_line(f, D, "discrete_hankel");
  if (n == 0) return DetResult{1.0, 0.0, DetResult::Method::direct_lu, false, {}};
  if (n > D.size()) return zero_result();
  check_lattice_truncation(f, D, n);
  std::vector<double> mom(2 * n - 1, 0.0);
  for (const cplx& x : D.nodes()) {
    double term = f(x).real();
    for (std::size_t p = 0; p < mom.size(); ++p) {
      mom[p] += term;
      term *= x.real();
    }
  }
  ComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = mom[j + k];
  m.require_finite("discrete_hankel");
  return from_lu(m, DetResult::Method::direct_lu);
}

DetResult continuous_hankel(const WeightSymbol& f, std::size_t n, double truncation,
                            std::size_t quad_m) {
  if (f.support() != Support::line) throw ParameterError("continuous_hankel: weight not on line");
  if (n == 0) return DetResult{1.0, 0.0, DetResult::Method::direct_lu, false, cplx{1.0, 0.0}};
  if (truncation <= 0.0) truncation = line_truncation(f, 2 * n);
  const QuadratureRule rule = gauss_legendre(quad_m, -truncation, truncation);
  std::vector<double> mom(2 * n - 1, 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i].real();
    double term = f(rule.nodes[i]).real() * rule.weights[i].real();
    for (std::size_t p = 0; p < mom.size(); ++p) {
      mom[p] += term;
      term *= x;
    }
  }
  ComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = mom[j + k];
  m.require_finite("continuous_hankel");
  DetResult r = from_lu(m, DetResult::Method::direct_lu);
  const OrthoBasis basis = build_line_basis(f, n - 1, truncation, quad_m);
  const cplx kappa = std::exp(basis.log_inverse_kappa_product(n));
  r.cross_check = kappa;
  r.cond_flag = std::abs(r.value - kappa) > 1e-8 * std::abs(kappa) || !(r.value.real() > 0.0);
  return r;
}

namespace {

DetResult gram_ratio(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n,
                     const OrthoBasis& basis, bool circle) {
  if (n == 0) return DetResult{1.0, 0.0, DetResult::Method::orthonormal_gram, false, {}};
  if (n > D.size()) {
    DetResult r = zero_result();
    r.method = DetResult::Method::orthonormal_gram;
    return r;
  }
  if (n > basis.degree_max() + 1) throw ParameterError("gram ratio: basis degree too small");
  const double mass = circle ? 1.0 / static_cast<double>(D.size()) : 1.0;
  ComplexMatrix g(n, n);
  for (const cplx& z : D.nodes()) {
    const cplx fz = f(z) * mass;
    std::vector<cplx> p = basis.eval_all(n - 1, z);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx pj = circle ? std::conj(p[j]) * fz : p[j] * fz;
      for (std::size_t k = 0; k < n; ++k) g(j, k) += pj * p[k];
    }
  }
  g.require_finite("gram ratio");
  return from_lu(g, DetResult::Method::orthonormal_gram);
}

}  // namespace

DetResult discrete_toeplitz_ratio(const WeightSymbol& f, const DiscreteNodeSet& D,
                                  std::size_t n, const OrthoBasis& basis) {
  require_circle(f, D, "discrete_toeplitz_ratio");
  return gram_ratio(f, D, n, basis, true);
}

DetResult discrete_hankel_ratio(const WeightSymbol& f, const DiscreteNodeSet& D,
                                std::size_t n, const OrthoBasis& basis) {
  require_line(f, D, "discrete_hankel_ratio");
  if (n > 0) check_lattice_truncation(f, D, n);
  return gram_ratio(f, D, n, basis, false);
}

}  // namespace detwidth

namespace detwidth {

double discrete_toeplitz_defect(const WeightSymbol& f, const DiscreteNodeSet& D, std::size_t n,
                                const OrthoBasis& basis) {
  require_circle(f, D, "discrete_toeplitz_defect");
  if (n == 0) return 0.0;
  if (n > D.size()) return -1.0;
  if (n > basis.degree_max() + 1) throw ParameterError("discrete_toeplitz_defect: basis degree too small");
  const long m = static_cast<long>(D.size());
  const cplx s = D.rotation();
  const long span = static_cast<long>(n) - 1;

  // alias[c + span] = sum_{l != 0} s^l fhat(c + l m), c = a - b in [-span, span]
  std::vector<cplx> alias(2 * span + 1, cplx{0.0, 0.0});
  for (long c = -span; c <= span; ++c) {
    cplx acc{0.0, 0.0};
    for (int sign : {1, -1}) {
      cplx sl{1.0, 0.0};
      for (long l = 1; l < 10000; ++l) {
        sl *= sign > 0 ? s : std::conj(s);
        const long idx = c + sign * l * m;
        const cplx term = sl * f.fourier_coefficient(static_cast<int>(idx));
        acc += term;
        if (std::abs(term) < 1e-300 || (std::abs(idx) > 8 && std::abs(term) < 1e-20 * std::abs(acc)))
          break;
      }
    }
    alias[c + span] = acc;
  }

  // E_jk = sum_{a,b} conj(c_ja) c_kb alias[a - b]
  const auto& co = basis.coeffs();
  std::vector<cplx> e(n * n, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t a = 0; a <= j; ++a)
        for (std::size_t b = 0; b <= k; ++b)
          acc += std::conj(co[j][a]) * co[k][b] * alias[static_cast<long>(a) - static_cast<long>(b) + span];
      e[j * n + k] = acc;
    }

  // Elimination on I + E without pivoting (the matrix is a Gram matrix),
  // carrying each diagonal entry as 1 + e_ii so small pivots keep their digits.
  cplx log_det{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx pivot = 1.0 + e[k * n + k];
    if (pivot == cplx{0.0, 0.0}) return -1.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = e[i * n + k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) e[i * n + j] -= l * e[k * n + j];
    }
    const cplx d = e[k * n + k];
    // log(1 + d) with relative accuracy for small d
    log_det += std::abs(d) < 1e-4 ? d - d * d / 2.0 + d * d * d / 3.0 - d * d * d * d / 4.0
                                  : std::log(1.0 + d);
  }
  const double re = log_det.real();
  // det is real for a Hermitian Gram matrix
  return std::expm1(re);
}

}  // namespace detwidth
