#pragma once

// Exact width laws of small non-intersecting walk ensembles, by brute force.
// Test-only; shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

// Discrete time: n walkers at 0, 2, ..., 2n-2, 2T simultaneous +-1 steps,
// conditioned on strict order throughout and on returning. Returns
// P(W < 2M) for M = 0..n+T+1 by enumerating all 2^{2nT} step patterns.
inline std::vector<double> dt_width_cdf_exhaustive(int n, int T) {
  const int steps = 2 * T;
  const int bits = n * steps;
  std::vector<double> count(2 * n + 2 * T + 4, 0.0);
  double total = 0.0;
  std::vector<int> x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    for (int i = 0; i < n; ++i) x[i] = 2 * i;
    int width = 2 * n - 2;
    bool ok = true;
    for (int t = 0; t < steps && ok; ++t) {
      for (int i = 0; i < n; ++i) x[i] += (mask >> (t * n + i)) & 1 ? 1 : -1;
      for (int i = 0; i + 1 < n; ++i) ok = ok && x[i] < x[i + 1];
      width = std::max(width, x[n - 1] - x[0]);
    }
    for (int i = 0; i < n && ok; ++i) ok = x[i] == 2 * i;
    if (!ok) continue;
    total += 1.0;
    count[width] += 1.0;
  }
  std::vector<double> cdf(n + T + 2, 0.0);
  for (int M = 0; M < static_cast<int>(cdf.size()); ++M) {
    double acc = 0.0;
    for (int w = 0; w < 2 * M && w < static_cast<int>(count.size()); ++w) acc += count[w];
    cdf[M] = acc / total;
  }
  return cdf;
}

// State-space recursion over configurations with a width cap. Each step
// moves one walker by +-1 (continuous time after uniformization) or all
// walkers at once (discrete time). Returns the weight of returning paths
// kept in x_0 < ... < x_{n-1} < x_0 + cap.
class WalkRecursion {
 public:
  using State = std::vector<int>;

  // continuous time: P(W_n(T) < M) with jump rate 1/2 each way per walker
  static double ct_cdf(int n, double T, int M) {
    return ct_weight(n, T, M) / ct_weight(n, T, 1 << 20);
  }

  // discrete time: P(W_n(2T) < 2M)
  static double dt_cdf(int n, int T, int M) {
    return dt_weight(n, T, 2 * M) / dt_weight(n, T, 1 << 20);
  }

 private:
  static bool inside(const State& s, int cap) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i] >= s[i + 1]) return false;
    return s.back() - s.front() < cap;
  }

  static int distance(const State& s, int gap) {
    int d = 0;
    for (std::size_t i = 0; i < s.size(); ++i) d += std::abs(s[i] - gap * static_cast<int>(i));
    return d;
  }

  // sum_k (T/2)^k / k! c_k, c_k = number of k-jump paths (the e^{-nT} and
  // per-jump 1/(2n) factors cancel in the ratio)
  static double ct_weight(int n, double T, int cap) {
    State start(n);
    for (int i = 0; i < n; ++i) start[i] = i;
    if (!inside(start, cap)) return 0.0;
    const double lam = n * T;
    const int kmax = static_cast<int>(lam + 12.0 * std::sqrt(lam) + 40.0);
    std::map<State, double> cur{{start, 1.0}};
    double acc = 1.0, coef = 1.0;
    for (int k = 1; k <= kmax; ++k) {
      std::map<State, double> next;
      for (const auto& [s, w] : cur) {
        for (int i = 0; i < n; ++i)
          for (int dir : {-1, 1}) {
            State t = s;
            t[i] += dir;
            if (!inside(t, cap) || distance(t, 1) > kmax - k) continue;
            next[t] += w;
          }
      }
      cur.swap(next);
      coef *= 0.5 * T / k;
      const auto it = cur.find(start);
      if (it != cur.end()) acc += coef * it->second;
    }
    return acc;
  }

  static double dt_weight(int n, int T, int cap) {
    State start(n);
    for (int i = 0; i < n; ++i) start[i] = 2 * i;
    if (!inside(start, cap)) return 0.0;
    std::map<State, double> cur{{start, 1.0}};
    for (int k = 1; k <= 2 * T; ++k) {
      std::map<State, double> next;
      for (const auto& [s, w] : cur) {
        for (int mask = 0; mask < (1 << n); ++mask) {
          State t = s;
          for (int i = 0; i < n; ++i) t[i] += (mask >> i) & 1 ? 1 : -1;
          if (!inside(t, cap) || distance(t, 2) > n * (2 * T - k)) continue;
          next[t] += w;
        }
      }
      cur.swap(next);
    }
    const auto it = cur.find(start);
    return it == cur.end() ? 0.0 : it->second;
  }
};

}  // namespace oracle
