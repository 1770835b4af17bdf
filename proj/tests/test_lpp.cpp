#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "detwidth/error.hpp"
#include "detwidth/fredholm.hpp"
#include "detwidth/lpp.hpp"

using namespace detwidth;

namespace {

// plain recursion over all paths, small fields only
std::int64_t brute_passage(const LppField& f, std::size_t i, std::size_t j) {
  const std::int64_t w = f(i, j);
  if (i == 1 && j == 1) return w;
  std::int64_t best = 0;
  if (i > 1) best = std::max(best, brute_passage(f, i - 1, j));
  if (j > 1) best = std::max(best, brute_passage(f, i, j - 1));
  return best + w;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

double empirical_cdf(const std::vector<double>& v, double x) {
  return static_cast<double>(std::count_if(v.begin(), v.end(), [x](double s) { return s <= x; })) /
         static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("passage on fixed fields") {
  CHECK(lpp_passage(LppField::from_weights(2, 2, {1, 2, 3, 4})) == 8);
  CHECK(lpp_passage(LppField::from_weights(1, 1, {5})) == 5);
  CHECK(lpp_passage(LppField::from_weights(3, 4, std::vector<std::uint32_t>(12, 0))) == 0);
  CHECK(lpp_passage(LppField::from_weights(3, 4, std::vector<std::uint32_t>(12, 1))) == 6);
  CHECK(lpp_passage(LppField::from_weights(1, 4, {1, 2, 3, 4})) == 10);
  CHECK_THROWS_AS(LppField::from_weights(2, 2, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(LppField(0, 3, 0.5, {}), ParameterError);
  CHECK_THROWS_AS(LppField(3, 3, 1.0, {}), ParameterError);
}

TEST_CASE("passage matches path recursion") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t r = 1 + k % 6, c = 1 + (k / 6) % 5;
    const LppField f(r, c, 0.6, SeedSpec{11, k});
    CHECK(lpp_passage(f) == brute_passage(f, r, c));
  }
}

TEST_CASE("geometric weights have the right mean") {
  const double q = 0.3;
  const LppField f(200, 200, q, SeedSpec{3, 0});
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 1; i <= 200; ++i)
    for (std::size_t j = 1; j <= 200; ++j) {
      sum += f(i, j);
      sq += double(f(i, j)) * f(i, j);
    }
  const double N = 40000.0;
  const double mean = q / (1 - q), var = q / ((1 - q) * (1 - q));
  CHECK(std::abs(sum / N - mean) < 3.0 * std::sqrt(var / N));
  CHECK(std::abs(sq / N - mean * mean - var) < 0.05 * var);
}

TEST_CASE("fields depend only on the seed") {
  const LppField a(5, 7, 0.5, SeedSpec{9, 4});
  const LppField b(5, 7, 0.5, SeedSpec{9, 4});
  const LppField c(5, 7, 0.5, SeedSpec{9, 5});
  bool same = true, differs = false;
  for (std::size_t i = 1; i <= 5; ++i)
    for (std::size_t j = 1; j <= 7; ++j) {
      same = same && a(i, j) == b(i, j);
      differs = differs || a(i, j) != c(i, j);
    }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("cut decomposition recovers the passage time") {
  std::size_t trials = 0, ok = 0;
  for (std::size_t N : {8u, 16u, 32u})
    for (std::uint64_t k = 0; k < 334; ++k) {
      const LppField f(N, N, 0.5, SeedSpec{21, N * 1000 + k});
      const std::size_t a = 1 + k % ((N + 1) / 2);
      const CutResult r = cut_decomposition(f, a);
      ++trials;
      ok += r.g_cut == r.g_total;
      CHECK(std::labs(r.argmax_u) < static_cast<long>(a));
    }
  CHECK(trials >= 1000);
  CHECK(ok == trials);
  const LppField f(8, 8, 0.5, SeedSpec{1, 1});
  CHECK_THROWS_AS(cut_decomposition(f, 0), ParameterError);
  CHECK_THROWS_AS(cut_decomposition(f, 5), ParameterError);
  CHECK_THROWS_AS(cut_decomposition(LppField(4, 5, 0.5, {}), 2), ParameterError);
}

TEST_CASE("normalizing constants") {
  const LppConstants c = lpp_constants(0.25);
  CHECK(c.mu == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.sigma == doctest::Approx(std::pow(0.25, 1.0 / 6.0) * std::cbrt(1.5) / 0.5).epsilon(1e-14));
  CHECK(c.d == doctest::Approx(std::pow(0.25, 1.0 / 6.0) * std::pow(1.5, -2.0 / 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lpp_constants(0.0), ParameterError);
  CHECK_THROWS_AS(lpp_constants(1.0), ParameterError);
}

TEST_CASE("two-sample distance") {
  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_two_sample({1, 2, 3, 4}, {2.5}) == doctest::Approx(0.5));
  CHECK(ks_two_sample({0, 0, 1}, {0, 1, 1}) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(ks_two_sample({}, {1}), ParameterError);
}

TEST_CASE("distribution table against F") {
  const DistTable t = compare_to_tracy_widom({-100.0, 100.0}, -1.0, 1.0, 0.5);
  REQUIRE(t.x.size() == 5);
  CHECK(t.x.back() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    CHECK(t.empirical[i] == 0.5);
    CHECK(t.reference[i] == doctest::Approx(tracy_widom_F(t.x[i])).epsilon(1e-14));
  }
  CHECK(t.sup_distance() == doctest::Approx(std::max(0.5 - tracy_widom_F(-1.0),
                                                     tracy_widom_F(1.0) - 0.5)));
}

TEST_CASE("streamed samples match explicit fields") {
  const SeedSpec seed{77, 2};
  const double q = 0.5;
  const std::size_t n = 12;
  const LppStats st = tw_convergence_test(n, q, 20, seed);
  const LppConstants c = lpp_constants(q);
  for (std::size_t k = 0; k < 20; ++k) {
    const auto g = lpp_passage(LppField(n, n, q, seed.substream(k)));
    CHECK(st.samples[k] ==
          doctest::Approx((g - c.mu * n) / (c.sigma * std::cbrt(double(n)))).epsilon(1e-14));
  }
}

TEST_CASE("samples do not depend on the thread count") {
  const SeedSpec seed{5, 0};
  setenv("DETWIDTH_THREADS", "1", 1);
  const auto one = airy_sum_identity_test(1.0, 1.0, 16, 0.5, 64, seed).samples;
  const auto tw1 = tw_convergence_test(16, 0.5, 64, seed).samples;
  setenv("DETWIDTH_THREADS", "4", 1);
  const auto four = airy_sum_identity_test(1.0, 1.0, 16, 0.5, 64, seed).samples;
  const auto tw4 = tw_convergence_test(16, 0.5, 64, seed).samples;
  unsetenv("DETWIDTH_THREADS");
  CHECK(one == four);
  CHECK(tw1 == tw4);
}

TEST_CASE("glued independent copies have the law of the full passage time") {
  // the two triangles of a square are disjoint, so gluing independent
  // copies along the cut reproduces G(N, N) in law
  const std::size_t n = 64;
  const auto glued = airy_sum_identity_test(1.0, 1.0, n, 0.5, 20000, SeedSpec{101, 0});
  CHECK(glued.alpha_n == 64);
  CHECK(glued.beta_n == 64);
  const auto direct = tw_convergence_test(2 * n, 0.5, 20000, SeedSpec{202, 0});
  const double ks = ks_two_sample(glued.samples, direct.samples);
  MESSAGE("KS glued vs direct: " << ks);
  CHECK(ks < 0.02);
}

TEST_CASE("cut position does not change the law") {
  const auto ab = airy_sum_identity_test(2.0, 1.0, 24, 0.5, 10000, SeedSpec{7, 0});
  const auto ba = airy_sum_identity_test(1.0, 2.0, 24, 0.5, 10000, SeedSpec{8, 0});
  CHECK(ab.alpha_n == 48);
  CHECK(ba.beta_n == 48);
  const double ks = ks_two_sample(ab.samples, ba.samples);
  MESSAGE("KS alpha/beta swapped: " << ks);
  CHECK(ks < 0.03);
}

TEST_CASE("corner-only scan is stochastically smaller") {
  const SeedSpec seed{31, 0};
  const auto full = airy_sum_identity_test(1.0, 1.0, 32, 0.5, 4000, seed);
  CutScan corner;
  corner.corner_only = true;
  const auto c = airy_sum_identity_test(1.0, 1.0, 32, 0.5, 4000, seed, corner);
  CHECK(c.scan_halfwidth == 0);
  bool dominated = true;
  for (std::size_t k = 0; k < full.samples.size(); ++k)
    dominated = dominated && c.samples[k] <= full.samples[k];
  CHECK(dominated);
  const double m = median(full.samples);
  CHECK(empirical_cdf(c.samples, m) > empirical_cdf(full.samples, m) + 0.2);
}

TEST_CASE("narrow window agrees with the full scan") {
  const SeedSpec seed{41, 0};
  const std::size_t n = 48;
  const auto full = airy_sum_identity_test(1.0, 1.0, n, 0.5, 2000, seed);
  CutScan narrow;
  narrow.window_tau = 1.5;
  const auto w = airy_sum_identity_test(1.0, 1.0, n, 0.5, 2000, seed, narrow);
  CHECK(w.scan_halfwidth < full.scan_halfwidth);
  std::size_t agree = 0;
  for (std::size_t k = 0; k < full.samples.size(); ++k) agree += w.samples[k] == full.samples[k];
  MESSAGE("window agreement " << agree << " / " << full.samples.size());
  CHECK(agree >= 0.999 * full.samples.size());
  // the default window already spans the whole cut
  CutScan dflt;
  dflt.window_tau = default_cut_window(1.0, n, 0.5);
  CHECK(airy_sum_identity_test(1.0, 1.0, n, 0.5, 4, seed, dflt).scan_halfwidth ==
        full.scan_halfwidth);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(tw_convergence_test(0, 0.5, 10, {}), ParameterError);
  CHECK_THROWS_AS(tw_convergence_test(8, 0.5, 0, {}), ParameterError);
  CHECK_THROWS_AS(airy_sum_identity_test(0.0, 1.0, 8, 0.5, 10, {}), ParameterError);
  CHECK_THROWS_AS(airy_sum_identity_test(0.01, 1.0, 8, 0.5, 10, {}), ParameterError);
  CHECK_THROWS_AS(airy_sum_identity_test(1.0, 1.0, 8, 1.5, 10, {}), ParameterError);
}
