#include "detwidth/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace detwidth {

namespace {

PolyJet horner_jet(const std::vector<cplx>& c, cplx z) {
  PolyJet j{0.0, 0.0, 0.0};
  for (std::size_t k = c.size(); k-- > 0;) {
    j.d2 = j.d2 * z + 2.0 * j.d1;
    j.d1 = j.d1 * z + j.value;
    j.value = j.value * z + c[k];
  }
  return j;
}

cplx inner_product(const std::vector<cplx>& g, const std::vector<cplx>& h,
                   const std::vector<double>& mu) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < mu.size(); ++i) acc += std::conj(g[i]) * h[i] * mu[i];
  return acc;
}

}  // namespace

OrthoBasis make_circle_basis(Support support, std::vector<std::vector<cplx>> coeffs) {
  OrthoBasis b;
  b.support_ = support;
  b.leading_.reserve(coeffs.size());
  for (const auto& c : coeffs) b.leading_.push_back(c.back().real());
  b.coeffs_ = std::move(coeffs);
  return b;
}

OrthoBasis make_line_basis(std::vector<double> a, std::vector<double> bcoef, double p0) {
  OrthoBasis b;
  b.support_ = Support::line;
  const std::size_t n = a.size() - 1;
  b.rec_a_ = std::move(a);
  b.rec_b_ = std::move(bcoef);
  b.p0_ = p0;
  // Monomial coefficients from the recurrence.
  b.coeffs_.assign(n + 1, {});
  b.coeffs_[0] = {cplx{p0, 0.0}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cplx> next(k + 2, cplx{0.0, 0.0});
    const auto& pk = b.coeffs_[k];
    for (std::size_t j = 0; j <= k; ++j) {
      next[j + 1] += pk[j];
      next[j] -= b.rec_a_[k] * pk[j];
    }
    if (k > 0) {
      const auto& pkm = b.coeffs_[k - 1];
      for (std::size_t j = 0; j < k; ++j) next[j] -= b.rec_b_[k] * pkm[j];
    }
    for (auto& c : next) c /= b.rec_b_[k + 1];
    b.coeffs_[k + 1] = std::move(next);
  }
  b.leading_.resize(n + 1);
  b.leading_[0] = p0;
  for (std::size_t k = 0; k < n; ++k) b.leading_[k + 1] = b.leading_[k] / b.rec_b_[k + 1];
  return b;
}

PolyJet OrthoBasis::jet(std::size_t k, cplx z) const {
  if (k > degree_max()) {
    throw ParameterError("OrthoBasis: degree " + std::to_string(k) + " exceeds " +
                         std::to_string(degree_max()));
  }
  if (!has_recurrence()) return horner_jet(coeffs_[k], z);
  PolyJet prev{0.0, 0.0, 0.0};
  PolyJet cur{p0_, 0.0, 0.0};
  for (std::size_t j = 0; j < k; ++j) {
    const cplx shift = z - rec_a_[j];
    const double bj = j > 0 ? rec_b_[j] : 0.0;
    PolyJet next;
    next.value = (shift * cur.value - bj * prev.value) / rec_b_[j + 1];
    next.d1 = (cur.value + shift * cur.d1 - bj * prev.d1) / rec_b_[j + 1];
    next.d2 = (2.0 * cur.d1 + shift * cur.d2 - bj * prev.d2) / rec_b_[j + 1];
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<cplx> OrthoBasis::eval_all(std::size_t k, cplx z) const {
  std::vector<cplx> out(k + 1);
  if (!has_recurrence()) {
    for (std::size_t j = 0; j <= k; ++j) out[j] = horner_jet(coeffs_[j], z).value;
    return out;
  }
  if (k > degree_max()) throw ParameterError("OrthoBasis: degree exceeds basis");
  out[0] = p0_;
  for (std::size_t j = 0; j < k; ++j) {
    const cplx prev = j > 0 ? rec_b_[j] * out[j - 1] : cplx{0.0, 0.0};
    out[j + 1] = ((z - rec_a_[j]) * out[j] - prev) / rec_b_[j + 1];
  }
  return out;
}

double OrthoBasis::log_inverse_kappa_product(std::size_t n) const {
  if (n > leading_.size()) throw ParameterError("kappa product beyond basis degree");
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc -= 2.0 * std::log(leading_[k]);
  return acc;
}

std::size_t suggested_circle_order(const WeightSymbol& f, std::size_t n) {
  const int band = f.laurent_bandwidth();
  if (band >= 0) return 4 * n + static_cast<std::size_t>(band) + 8;
  // Fourier tail of exp((T/2)(z+1/z)) behaves like (T/2)^k / k!.
  double t = 0.0;
  std::size_t extra = 0;
  for (const WeightSymbol* w = &f; w; w = w->factor()) {
    if (w->form() == WeightForm::exp_cosh) {
      t += w->parameter();
    } else if (const int b = w->base().laurent_bandwidth(); b > 0) {
      extra += static_cast<std::size_t>(b);
    }
  }
  std::size_t k = 1;
  double term = 1.0;
  while (k < 4096) {
    term *= 0.5 * t / static_cast<double>(k);
    if (term < 1e-18 && static_cast<double>(k) > t) break;
    ++k;
  }
  return 4 * n + k + extra + 16;
}

OrthoBasis build_circle_basis(const WeightSymbol& f, std::size_t n, std::size_t quad_m) {
  if (f.support() != Support::circle) throw ParameterError("build_circle_basis: weight not on circle");
  if (quad_m < 2 * n + 2) {
    throw ParameterError("build_circle_basis: quad_m=" + std::to_string(quad_m) +
                         " too small for degree " + std::to_string(n));
  }
  const QuadratureRule rule = circle_rule(quad_m);
  std::vector<double> mu(quad_m);
  for (std::size_t i = 0; i < quad_m; ++i) {
    const cplx v = f(rule.nodes[i]);
    if (!(v.real() >= 0.0)) {
      throw ParameterError("build_circle_basis: weight negative on the circle (" +
                           f.describe() + ")");
    }
    mu[i] = v.real() * rule.weights[i].real();
  }

  std::vector<std::vector<cplx>> coeffs;
  std::vector<std::vector<cplx>> values;  // p_j at the nodes
  std::vector<cplx> zk(quad_m, cplx{1.0, 0.0});
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<cplx> c(k + 1, cplx{0.0, 0.0});
    c[k] = 1.0;
    std::vector<cplx> v = zk;
    const double norm0 = std::sqrt(inner_product(v, v, mu).real());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        const cplx proj = inner_product(values[j], v, mu);
        for (std::size_t i = 0; i < quad_m; ++i) v[i] -= proj * values[j][i];
        for (std::size_t i = 0; i <= j; ++i) c[i] -= proj * coeffs[j][i];
      }
    }
    const double norm = std::sqrt(inner_product(v, v, mu).real());
    if (!(norm > 1e-13 * norm0)) {
      throw ConditioningError("build_circle_basis: Gram matrix singular at degree " +
                                  std::to_string(k) + " for " + f.describe(),
                              k);
    }
    for (auto& x : c) x /= norm;
    for (auto& x : v) x /= norm;
    coeffs.push_back(std::move(c));
    values.push_back(std::move(v));
    for (std::size_t i = 0; i < quad_m; ++i) zk[i] *= rule.nodes[i];
  }
  return make_circle_basis(Support::circle, std::move(coeffs));
}

PolyJet reversed_jet(const OrthoBasis& basis, std::size_t k, cplx z) {
  if (basis.support() != Support::circle) throw ParameterError("reversed_poly: circle basis required");
  if (k > basis.degree_max()) throw ParameterError("reversed_poly: degree exceeds basis");
  const auto& c = basis.coeffs()[k];
  std::vector<cplx> rev(k + 1);
  for (std::size_t j = 0; j <= k; ++j) rev[k - j] = std::conj(c[j]);
  return horner_jet(rev, z);
}

cplx reversed_poly(const OrthoBasis& basis, std::size_t k, cplx z) {
  return reversed_jet(basis, k, z).value;
}

cplx cd_kernel_circle(const OrthoBasis& basis, std::size_t n, cplx z, cplx w) {
  if (z == cplx{0.0, 0.0}) throw ParameterError("cd_kernel_circle: z must be nonzero");
  const PolyJet pz = basis.jet(n, z);
  const PolyJet sz = reversed_jet(basis, n, z);
  const cplx scale = std::pow(z, 1 - static_cast<int>(n));
  if (std::abs(z - w) < kDiagonalSwitch * (1.0 + std::abs(z))) {
    // N(w) = p_n(z) p*_n(w) - p*_n(z) p_n(w) vanishes at w = z.
    const cplx n1 = pz.value * sz.d1 - sz.value * pz.d1;
    const cplx n2 = pz.value * sz.d2 - sz.value * pz.d2;
    return scale * (-n1 - 0.5 * n2 * (w - z));
  }
  const cplx pw = basis.eval(n, w);
  const cplx sw = reversed_poly(basis, n, w);
  return scale * (pz.value * sw - sz.value * pw) / (z - w);
}

double line_truncation(const WeightSymbol& f, std::size_t degree) {
  auto envelope = [&](double x) {
    return std::abs(f(cplx{x, 0.0})) * std::pow(1.0 + x * x, static_cast<double>(degree));
  };
  double step = 0.01;
  if (f.form() == WeightForm::gaussian) step = 0.01 / std::sqrt(f.parameter());
  double peak = 0.0;
  double x = 0.0;
  double last = 0.0;
  for (int i = 0; i < 2000000; ++i, x += step) {
    const double e = std::max(envelope(x), envelope(-x));
    peak = std::max(peak, e);
    last = x;
    if (peak > 0.0 && e < 1e-18 * peak && x > 0.0) return last;
  }
  throw TruncationError("line_truncation: weight does not decay for " + f.describe());
}

double christoffel_truncation(const OrthoBasis& basis, std::size_t n, double im,
                              const std::function<double(cplx)>& weight, double rel) {
  if (!basis.has_recurrence()) throw ParameterError("christoffel_truncation: line basis required");
  n = std::min(n, basis.degree_max());
  // the zeros of p_0..p_n lie inside [-R, R] (Gershgorin on the Jacobi matrix)
  const auto& a = basis.recurrence_a();
  const auto& b = basis.recurrence_b();
  double R = 0.0;
  for (std::size_t k = 0; k <= n && k < a.size(); ++k) {
    const double up = k + 1 < b.size() ? b[k + 1] : 0.0;
    R = std::max(R, std::abs(a[k]) + b[k] + up);
  }
  if (!(R > 0.0)) R = 1.0;
  auto env = [&](double x) {
    const cplx z{x, im};
    double acc = 0.0;
    for (const cplx& p : basis.eval_all(n, z)) acc += std::norm(p);
    return weight(z) * acc;
  };
  const double step = R / 2000.0;
  double peak = 0.0;
  for (double x = 0.0; x < 1e4 * R; x += step) {
    const double e = std::max(env(x), env(-x));
    peak = std::max(peak, e);
    if (x > R && e < rel * peak) return x;
  }
  throw TruncationError("christoffel_truncation: density does not decay");
}

namespace {

bool gaussian_closed_form(const WeightSymbol& f, double& a, double& scale) {
  if (f.form() != WeightForm::gaussian) return false;
  a = f.parameter();
  scale = f.scale();
  if (const WeightSymbol* b = f.factor()) {
    if (b->form() == WeightForm::constant) {
      scale *= b->scale() * b->parameter();
    } else if (b->form() == WeightForm::gaussian) {
      a += b->parameter();
      scale *= b->scale();
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace

OrthoBasis build_line_basis(const WeightSymbol& f, std::size_t n, double truncation,
                            std::size_t quad_m, LineBasisMethod method) {
  if (f.support() != Support::line) throw ParameterError("build_line_basis: weight not on line");
  double a = 0.0, scale = 1.0;
  if (method == LineBasisMethod::automatic && gaussian_closed_form(f, a, scale)) {
    // p_k(x) = scale^{-1/2} a^{1/4} h_k(sqrt(a) x), h_k orthonormal Hermite.
    std::vector<double> ra(n + 1, 0.0), rb(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) rb[k] = std::sqrt(static_cast<double>(k) / (2.0 * a));
    const double p0 = std::pow(a / kPi, 0.25) / std::sqrt(scale);
    return make_line_basis(std::move(ra), std::move(rb), p0);
  }

  if (truncation <= 0.0) truncation = line_truncation(f, 2 * n + 2);
  if (quad_m < n + 2) throw ParameterError("build_line_basis: quad_m too small");
  const QuadratureRule rule = gauss_legendre(quad_m, -truncation, truncation);
  std::vector<double> x(quad_m), mu(quad_m);
  for (std::size_t i = 0; i < quad_m; ++i) {
    x[i] = rule.nodes[i].real();
    const cplx v = f(rule.nodes[i]);
    if (!(v.real() >= 0.0)) throw ParameterError("build_line_basis: weight negative on the line");
    mu[i] = v.real() * rule.weights[i].real();
  }
  auto dot = [&](const std::vector<double>& g, const std::vector<double>& h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < quad_m; ++i) acc += g[i] * h[i] * mu[i];
    return acc;
  };

  // Orthogonalize x p_k against all previous p_j (two passes); the projections
  // onto p_k and p_{k-1} are the recurrence coefficients.
  std::vector<std::vector<double>> p;
  std::vector<double> ra(n + 1, 0.0), rb(n + 1, 0.0);
  double mass = 0.0;
  for (double m : mu) mass += m;
  if (!(mass > 0.0)) throw ConditioningError("build_line_basis: zero mass", 0);
  const double p0 = 1.0 / std::sqrt(mass);
  p.emplace_back(quad_m, p0);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> q(quad_m);
    for (std::size_t i = 0; i < quad_m; ++i) q[i] = x[i] * p[k][i];
    const double norm0 = std::sqrt(dot(q, q));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j <= k; ++j) {
        const double proj = dot(p[j], q);
        if (pass == 0 && j == k) ra[k] = proj;
        for (std::size_t i = 0; i < quad_m; ++i) q[i] -= proj * p[j][i];
      }
    }
    const double norm = std::sqrt(dot(q, q));
    if (!(norm > 1e-13 * norm0)) {
      throw ConditioningError("build_line_basis: Gram matrix singular at degree " +
                                  std::to_string(k + 1),
                              k + 1);
    }
    rb[k + 1] = norm;
    for (auto& v : q) v /= norm;
    p.push_back(std::move(q));
  }
  return make_line_basis(std::move(ra), std::move(rb), p0);
}

cplx cd_kernel_line(const OrthoBasis& basis, std::size_t n, cplx z, cplx w) {
  if (n == 0) return 0.0;
  if (n > basis.degree_max()) throw ParameterError("cd_kernel_line: n exceeds basis degree");
  const double ratio = basis.leading()[n - 1] / basis.leading()[n];
  const PolyJet an = basis.jet(n, z);
  const PolyJet am = basis.jet(n - 1, z);
  if (std::abs(z - w) < kDiagonalSwitch * (1.0 + std::abs(z))) {
    const cplx n1 = an.value * am.d1 - am.value * an.d1;
    const cplx n2 = an.value * am.d2 - am.value * an.d2;
    return ratio * (-n1 - 0.5 * n2 * (w - z));
  }
  const cplx bn = basis.eval(n, w);
  const cplx bm = basis.eval(n - 1, w);
  return ratio * (an.value * bm - am.value * bn) / (z - w);
}

}  // namespace detwidth
