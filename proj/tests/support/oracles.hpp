#pragma once

// Brute-force reference implementations used only by tests.

#include "hwip/holder.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hwip::oracle {

struct PairMax {
  double value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Every pair, i-major order, strict improvement: the first maximiser in
/// lexicographic order wins.
inline PairMax brute_holder(std::span<const double> s, double alpha, std::size_t max_lag) {
  PairMax best{-1.0, 0, 0};
  const std::size_t n = s.size() - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j <= std::min(n, i + max_lag); ++j) {
      const double v = std::abs(s[j] - s[i]) * std::pow(static_cast<double>(j - i), -alpha);
      if (v > best.value) best = {v, i, j};
    }
  return best;
}

inline PairMax brute_holder(std::span<const double> s, double alpha) {
  return brute_holder(s, alpha, s.size() - 1);
}

/// sup |W(t) - W(s)| / |t - s|^alpha over the grid k / (factor n), t != s,
/// optionally restricted to |t - s| <= delta.
inline double dense_grid_modulus(const PolygonalPath& path, double alpha, std::size_t factor, double delta = 1.0) {
  const std::size_t points = factor * path.n();
  std::vector<double> w(points + 1);
  for (std::size_t k = 0; k <= points; ++k)
    w[k] = path.evaluate(static_cast<double>(k) / static_cast<double>(points));
  double best = 0.0;
  for (std::size_t a = 0; a < points; ++a)
    for (std::size_t b = a + 1; b <= points; ++b) {
      const double gap = static_cast<double>(b - a) / static_cast<double>(points);
      if (gap > delta + 1e-15) break;
      best = std::max(best, std::abs(w[b] - w[a]) / std::pow(gap, alpha));
    }
  return best;
}

inline std::vector<double> partial_sums(std::span<const double> h) {
  std::vector<double> s(h.size() + 1, 0.0);
  for (std::size_t k = 0; k < h.size(); ++k) s[k + 1] = s[k] + h[k];
  return s;
}

}  // namespace hwip::oracle
