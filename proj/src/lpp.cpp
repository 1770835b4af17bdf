#include "detwidth/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detwidth/error.hpp"
#include "detwidth/fredholm.hpp"
#include "detwidth/parallel.hpp"

namespace detwidth {

namespace {

void require_q(double q, const char* who) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError(std::string(who) + ": q must lie in (0, 1)");
}

// Passage times to the antidiagonal i + j = S from a fresh triangle
// {i, j >= 1, i + j <= S} drawn row-major. out_g[i] = G(i, S - i) and
// out_w[i] = w(i, S - i) for 1 <= i <= S - 1.
void triangle_to_antidiagonal(std::size_t S, const GeometricSampler& geo, CounterRng& rng,
                              std::vector<std::int64_t>& g, std::vector<std::int64_t>& out_g,
                              std::vector<std::int64_t>& out_w) {
  g.assign(S, 0);
  out_g.assign(S, 0);
  out_w.assign(S, 0);
  for (std::size_t i = 1; i + 1 <= S; ++i) {
    const std::size_t len = S - i;
    std::int64_t left = 0;
    std::int64_t w = 0;
    for (std::size_t j = 1; j <= len; ++j) {
      w = geo(rng);
      left = std::max(g[j], left) + w;
      g[j] = left;
    }
    out_g[i] = left;
    out_w[i] = w;
  }
}

std::int64_t square_passage(std::size_t n, const GeometricSampler& geo, CounterRng& rng,
                            std::vector<std::int64_t>& g) {
  g.assign(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    std::int64_t left = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      left = std::max(g[j], left) + geo(rng);
      g[j] = left;
    }
  }
  return g[n];
}

}  // namespace

LppField::LppField(std::size_t rows, std::size_t cols, double q, const SeedSpec& seed)
    : rows_(rows), cols_(cols), q_(q) {
  require_q(q, "LppField");
  if (rows == 0 || cols == 0) throw ParameterError("LppField: empty field");
  const GeometricSampler geo(q);
  CounterRng rng(seed);
  w_.resize(rows * cols);
  for (auto& w : w_) w = geo(rng);
}

LppField LppField::from_weights(std::size_t rows, std::size_t cols,
                                std::vector<std::uint32_t> weights) {
  if (rows == 0 || cols == 0) throw ParameterError("LppField: empty field");
  if (weights.size() != rows * cols) throw DimensionError("LppField: weight count mismatch");
  LppField f;
  f.rows_ = rows;
  f.cols_ = cols;
  f.w_ = std::move(weights);
  return f;
}

std::vector<std::int64_t> lpp_table(const LppField& field) {
  const std::size_t R = field.rows(), C = field.cols();
  std::vector<std::int64_t> g(R * C, 0);
  for (std::size_t i = 1; i <= R; ++i)
    for (std::size_t j = 1; j <= C; ++j) {
      const std::int64_t up = i > 1 ? g[(i - 2) * C + (j - 1)] : 0;
      const std::int64_t left = j > 1 ? g[(i - 1) * C + (j - 2)] : 0;
      g[(i - 1) * C + (j - 1)] = std::max(up, left) + field(i, j);
    }
  return g;
}

std::int64_t lpp_passage(const LppField& field) { return lpp_table(field).back(); }

CutResult cut_decomposition(const LppField& field, std::size_t alpha_n) {
  const std::size_t N = field.rows();
  if (field.cols() != N) throw ParameterError("cut_decomposition: square field required");
  if (alpha_n == 0 || 2 * alpha_n > N + 1)
    throw ParameterError("cut_decomposition: cut line outside the grid");
  const auto fwd = lpp_table(field);
  // backward table from (N, N), down/left
  std::vector<std::int64_t> bwd(N * N, 0);
  for (std::size_t i = N; i >= 1; --i)
    for (std::size_t j = N; j >= 1; --j) {
      const std::int64_t down = i < N ? bwd[i * N + (j - 1)] : 0;
      const std::int64_t right = j < N ? bwd[(i - 1) * N + j] : 0;
      bwd[(i - 1) * N + (j - 1)] = std::max(down, right) + field(i, j);
    }
  CutResult r;
  r.g_total = fwd.back();
  r.g_cut = -1;
  const long a = static_cast<long>(alpha_n);
  for (long u = -(a - 1); u <= a - 1; ++u) {
    const std::size_t i = static_cast<std::size_t>(a + u), j = static_cast<std::size_t>(a - u);
    const std::size_t k = (i - 1) * N + (j - 1);
    const std::int64_t v = fwd[k] + bwd[k] - field(i, j);
    if (v > r.g_cut) {
      r.g_cut = v;
      r.argmax_u = u;
    }
  }
  return r;
}

LppConstants lpp_constants(double q) {
  require_q(q, "lpp_constants");
  const double r = std::sqrt(q);
  return {2.0 * r / (1.0 - r), std::pow(q, 1.0 / 6.0) * std::cbrt(1.0 + r) / (1.0 - r),
          std::pow(q, 1.0 / 6.0) * std::pow(1.0 + r, -2.0 / 3.0)};
}

double DistTable::sup_distance() const {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(empirical[i] - reference[i]));
  return m;
}

DistTable compare_to_tracy_widom(const std::vector<double>& samples, double lo, double hi,
                                 double step) {
  if (samples.empty()) throw ParameterError("compare_to_tracy_widom: no samples");
  if (!(step > 0.0) || !(hi > lo)) throw ParameterError("compare_to_tracy_widom: bad grid");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  DistTable t;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = lo + step * static_cast<double>(k);
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    t.x.push_back(x);
    t.empirical.push_back(static_cast<double>(below) / static_cast<double>(sorted.size()));
    t.reference.push_back(tracy_widom_F(x));
  }
  return t;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

LppStats tw_convergence_test(std::size_t n, double q, std::size_t samples, const SeedSpec& seed) {
  require_q(q, "tw_convergence_test");
  if (n == 0) throw ParameterError("tw_convergence_test: n must be positive");
  if (samples == 0) throw ParameterError("tw_convergence_test: no samples requested");
  LppStats st;
  st.n = n;
  st.q = q;
  st.alpha_n = n;
  st.constants = lpp_constants(q);
  st.samples.resize(samples);
  const GeometricSampler geo(q);
  const double center = st.constants.mu * n;
  const double scale = st.constants.sigma * std::cbrt(static_cast<double>(n));
  parallel_for(samples, default_thread_count(), [&](std::size_t k) {
    CounterRng rng(seed.substream(k));
    std::vector<std::int64_t> g;
    st.samples[k] = (static_cast<double>(square_passage(n, geo, rng, g)) - center) / scale;
  });
  st.table = compare_to_tracy_widom(st.samples);
  st.ks_distance = st.table.sup_distance();
  return st;
}

double default_cut_window(double alpha, std::size_t n, double q) {
  return 3.0 * lpp_constants(q).d * std::cbrt(alpha * static_cast<double>(n));
}

LppStats airy_sum_identity_test(double alpha, double beta, std::size_t n, double q,
                                std::size_t samples, const SeedSpec& seed, const CutScan& scan) {
  require_q(q, "airy_sum_identity_test");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ParameterError("airy_sum_identity_test: alpha and beta must be positive");
  if (samples == 0) throw ParameterError("airy_sum_identity_test: no samples requested");
  LppStats st;
  st.n = n;
  st.q = q;
  st.alpha = alpha;
  st.beta = beta;
  st.alpha_n = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
  st.beta_n = static_cast<std::size_t>(std::floor(beta * static_cast<double>(n)));
  if (st.alpha_n == 0 || st.beta_n == 0)
    throw ParameterError("airy_sum_identity_test: alpha n and beta n must be at least 1");
  st.constants = lpp_constants(q);
  const std::size_t a = st.alpha_n, b = st.beta_n;
  // cut points (a + u, a - u) need |u| <= a - 1; the second field reaches |u| <= b
  std::size_t half = std::min(a - 1, b);
  if (scan.window_tau) {
    const double u = *scan.window_tau * std::pow(static_cast<double>(n), 2.0 / 3.0) /
                     st.constants.d;
    half = std::min(half, static_cast<std::size_t>(std::max(0.0, std::floor(u))));
  }
  if (scan.corner_only) half = 0;
  st.scan_halfwidth = half;

  const double N = static_cast<double>(a + b);
  const double center = st.constants.mu * N;
  const double scale = st.constants.sigma * std::cbrt(N);
  const GeometricSampler geo(q);
  st.samples.resize(samples);
  parallel_for(samples, default_thread_count(), [&](std::size_t k) {
    CounterRng rng(seed.substream(k));
    std::vector<std::int64_t> g, g1, w1, g2, w2;
    triangle_to_antidiagonal(2 * a, geo, rng, g, g1, w1);
    triangle_to_antidiagonal(2 * b + 2, geo, rng, g, g2, w2);
    std::int64_t best = -1;
    const long h = static_cast<long>(half);
    for (long u = -h; u <= h; ++u) {
      const std::size_t i1 = static_cast<std::size_t>(static_cast<long>(a) + u);
      const std::size_t i2 = static_cast<std::size_t>(static_cast<long>(b) + 1 + u);
      best = std::max(best, g1[i1] + g2[i2] - w2[i2]);
    }
    st.samples[k] = (static_cast<double>(best) - center) / scale;
  });
  st.table = compare_to_tracy_widom(st.samples);
  st.ks_distance = st.table.sup_distance();
  return st;
}

}  // namespace detwidth
