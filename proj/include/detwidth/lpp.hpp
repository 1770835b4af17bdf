#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "detwidth/rng.hpp"

namespace detwidth {

// Weights w(i, j), 1 <= i <= rows, 1 <= j <= cols.
class LppField {
 public:
  // i.i.d. geometric(q) weights drawn in row-major order from the stream.
  LppField(std::size_t rows, std::size_t cols, double q, const SeedSpec& seed);
  static LppField from_weights(std::size_t rows, std::size_t cols,
                               std::vector<std::uint32_t> weights);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double q() const noexcept { return q_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const {
    return w_[(i - 1) * cols_ + (j - 1)];
  }

 private:
  LppField() = default;
  std::size_t rows_ = 0, cols_ = 0;
  double q_ = 0.0;
  std::vector<std::uint32_t> w_;
};

// G(rows, cols): the maximal weight of an up/right path from (1, 1).
std::int64_t lpp_passage(const LppField& field);

// The full table G(i, j), row-major, 1-based coordinates mapped to
// (i - 1) * cols + (j - 1).
std::vector<std::int64_t> lpp_table(const LppField& field);

struct CutResult {
  std::int64_t g_total = 0;
  std::int64_t g_cut = 0;
  long argmax_u = 0;  // u of the maximizing cut point (alpha_n + u, alpha_n - u)
};

// Square field of side N; the cut is {(a + u, a - u) : |u| < a}, a = alpha_n.
// g_cut = max over the cut of G_fwd(p) + G_bwd(p) - w(p), with G_bwd the
// passage time from (N, N) down/left to p; equal to g_total exactly.
CutResult cut_decomposition(const LppField& field, std::size_t alpha_n);

struct LppConstants {
  double mu;     // 2 sqrt(q) / (1 - sqrt(q))
  double sigma;  // q^{1/6} (1 + sqrt(q))^{1/3} / (1 - sqrt(q))
  double d;      // q^{1/6} (1 + sqrt(q))^{-2/3}
};

LppConstants lpp_constants(double q);

// Empirical CDF against F on a grid.
struct DistTable {
  std::vector<double> x;
  std::vector<double> empirical;
  std::vector<double> reference;
  double sup_distance() const;
};

// Grid lo, lo + step, ..., hi.
DistTable compare_to_tracy_widom(const std::vector<double>& samples, double lo = -5.0,
                                 double hi = 2.0, double step = 0.01);

// sup_x |F_a(x) - F_b(x)| over the pooled sample points.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LppStats {
  std::vector<double> samples;  // normalized, in sample-index order
  std::size_t n = 0;
  double q = 0.0;
  double alpha = 1.0, beta = 1.0;
  std::size_t alpha_n = 0, beta_n = 0;  // floor(alpha n), floor(beta n)
  std::size_t scan_halfwidth = 0;       // largest |u| scanned on the cut
  LppConstants constants{};
  double ks_distance = 0.0;
  DistTable table;
};

// Samples (G(n, n) - mu n) / (sigma n^{1/3}); sample k uses seed.substream(k).
LppStats tw_convergence_test(std::size_t n, double q, std::size_t samples, const SeedSpec& seed);

struct CutScan {
  // Half-width of the scan in units of tau = d u / n^{2/3}; empty scans the
  // whole cut.
  std::optional<double> window_tau;
  // Only the cut point u = 0.
  bool corner_only = false;
};

// Samples max_u (G1(a + u, a - u) + G2'(u) - mu N) / (sigma N^{1/3}),
// N = a + b, a = floor(alpha n), b = floor(beta n), where G1 and G2 come
// from independent fields and G2'(u) is the passage time of the second field
// to (b + 1 + u, b + 1 - u) without its end weight. Equal in law to the
// normalized G(N, N).
LppStats airy_sum_identity_test(double alpha, double beta, std::size_t n, double q,
                                std::size_t samples, const SeedSpec& seed,
                                const CutScan& scan = {});

// Default window from the parabolic confinement: 3 d (alpha n)^{1/3}.
double default_cut_window(double alpha, std::size_t n, double q);

}  // namespace detwidth
