#include "hwip/holder.hpp"

#include "hwip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hwip {

PolygonalPath PolygonalPath::from_increments(std::span<const double> increments) {
  if (increments.empty()) throw InvalidArgument("a polygonal path needs n >= 1 increments");
  PolygonalPath path;
  path.sums_.resize(increments.size() + 1);
  path.sums_[0] = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k) {
    s += increments[k];
    path.sums_[k + 1] = s;
  }
  return path;
}

PolygonalPath PolygonalPath::from_partial_sums(std::vector<double> sums) {
  if (sums.size() < 2) throw InvalidArgument("a polygonal path needs S_0..S_n with n >= 1");
  if (sums[0] != 0.0) throw InvalidArgument("partial sums must start at S_0 = 0");
  for (double s : sums)
    if (!std::isfinite(s)) throw InvalidArgument("partial sums must be finite");
  PolygonalPath path;
  path.sums_ = std::move(sums);
  return path;
}

std::vector<double> PolygonalPath::increments() const {
  std::vector<double> h(n());
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = sums_[k + 1] - sums_[k];
  return h;
}

double PolygonalPath::evaluate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("W(t) is defined for t in [0, 1]");
  const double x = static_cast<double>(n()) * t;
  const auto k = static_cast<std::size_t>(std::floor(x));
  if (k >= n()) return sums_.back();
  return sums_[k] + (x - static_cast<double>(k)) * (sums_[k + 1] - sums_[k]);
}

std::string_view to_string(HolderMethod method) noexcept {
  switch (method) {
    case HolderMethod::exact_pairs: return "exact_pairs";
    case HolderMethod::windowed: return "windowed";
    case HolderMethod::dyadic_upper: return "dyadic_upper";
    case HolderMethod::dyadic_lower: return "dyadic_lower";
  }
  return "unknown";
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

// w[d] = d^{-alpha}, d = 1..max_lag (w[0] unused).
std::vector<double> lag_weights(std::size_t max_lag, double alpha) {
  std::vector<double> w(max_lag + 1, 0.0);
  for (std::size_t d = 1; d <= max_lag; ++d) w[d] = std::pow(static_cast<double>(d), -alpha);
  return w;
}

// max_{i < count} |s[i + d] - s[i]|
double lag_abs_max(const double* s, std::size_t count, std::size_t d) {
  double m = 0.0;
#pragma omp simd reduction(max : m)
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::abs(s[i + d] - s[i]);
    m = v > m ? v : m;
  }
  return m;
}

std::size_t first_hit(const double* s, std::size_t count, std::size_t d, double target) {
  for (std::size_t i = 0; i < count; ++i)
    if (std::abs(s[i + d] - s[i]) == target) return i;
  return count;
}

struct Envelope {
  std::vector<double> prefix_min, prefix_max, suffix_min, suffix_max;
  double max_step = 0.0;
};

Envelope envelope_of(std::span<const double> s) {
  const std::size_t len = s.size();
  Envelope e;
  e.prefix_min.resize(len);
  e.prefix_max.resize(len);
  e.suffix_min.resize(len);
  e.suffix_max.resize(len);
  e.prefix_min[0] = e.prefix_max[0] = s[0];
  for (std::size_t k = 1; k < len; ++k) {
    e.prefix_min[k] = std::min(e.prefix_min[k - 1], s[k]);
    e.prefix_max[k] = std::max(e.prefix_max[k - 1], s[k]);
    e.max_step = std::max(e.max_step, std::abs(s[k] - s[k - 1]));
  }
  e.suffix_min[len - 1] = e.suffix_max[len - 1] = s[len - 1];
  for (std::size_t k = len - 1; k-- > 0;) {
    e.suffix_min[k] = std::min(e.suffix_min[k + 1], s[k]);
    e.suffix_max[k] = std::max(e.suffix_max[k + 1], s[k]);
  }
  return e;
}

HolderStatistic scan_lags(const PolygonalPath& path, double alpha, std::size_t max_lag, HolderMethod method) {
  check_alpha(alpha);
  const std::size_t n = path.n();
  if (n == 0) throw InvalidArgument("Hoelder statistic needs n >= 1");
  if (max_lag == 0) throw InvalidArgument("max_lag must be >= 1");
  max_lag = std::min(max_lag, n);
  const std::span<const double> s = path.partial_sums();
  const std::vector<double> w = lag_weights(max_lag, alpha);
  const Envelope env = envelope_of(s);

  double best = -1.0;
  std::size_t bi = 0;
  std::size_t bj = 0;
  auto offer = [&](double value, std::size_t i, std::size_t j) {
    if (value > best || (value == best && std::pair(i, j) < std::pair(bi, bj))) {
      best = value;
      bi = i;
      bj = j;
    }
  };

  for (std::size_t d = 1; d <= max_lag; ++d) {
    // Any pair at lag d has S_j in s[d..n] and S_i in s[0..n-d].
    const double spread = std::max(env.suffix_max[d] - env.prefix_min[n - d],
                                   env.prefix_max[n - d] - env.suffix_min[d]);
    // Slack covers rounding in the differences the bound is built from.
    const double bound = std::min(spread, static_cast<double>(d) * env.max_step) * w[d] * (1.0 + 1e-12);
    if (bound < best) continue;
    const double m = lag_abs_max(s.data(), n - d + 1, d);
    const double value = m * w[d];
    if (value < best) continue;
    const std::size_t i = first_hit(s.data(), n - d + 1, d, m);
    offer(value, i, i + d);
  }
  HolderStatistic stat;
  stat.value = best;
  stat.method = method;
  stat.alpha = alpha;
  stat.argmax = std::pair(bi, bj);
  return stat;
}

}  // namespace

HolderStatistic holder_max_exact(const PolygonalPath& path, double alpha) {
  return scan_lags(path, alpha, path.n(), HolderMethod::exact_pairs);
}

HolderStatistic holder_max_windowed(const PolygonalPath& path, double alpha, std::size_t max_lag) {
  if (max_lag == 0) throw InvalidArgument("max_lag must be >= 1");
  if (max_lag > path.n())
    throw InvalidArgument("max_lag " + std::to_string(max_lag) + " exceeds n = " + std::to_string(path.n()));
  return scan_lags(path, alpha, max_lag, HolderMethod::windowed);
}

std::vector<double> holder_lag_maxima(const PolygonalPath& path, double alpha, std::size_t max_lag) {
  check_alpha(alpha);
  const std::size_t n = path.n();
  if (max_lag == 0 || max_lag > n) throw InvalidArgument("max_lag must lie in [1, n]");
  const std::vector<double> w = lag_weights(max_lag, alpha);
  const double* s = path.partial_sums().data();
  std::vector<double> out(max_lag);
  for (std::size_t d = 1; d <= max_lag; ++d) out[d - 1] = lag_abs_max(s, n - d + 1, d) * w[d];
  return out;
}

std::vector<double> holder_max_prefixes(const PolygonalPath& path, double alpha) {
  check_alpha(alpha);
  const std::size_t n = path.n();
  if (n == 0) throw InvalidArgument("Hoelder statistic needs n >= 1");
  const std::vector<double> w = lag_weights(n, alpha);
  // reversed[x] = w[n - x], so w[k - i] = reversed[n - k + i].
  std::vector<double> reversed(n);
  for (std::size_t x = 0; x < n; ++x) reversed[x] = w[n - x];
  const double* s = path.partial_sums().data();
  std::vector<double> out(n + 1, 0.0);
  double running = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double sk = s[k];
    const double* wk = reversed.data() + (n - k);
    double m = 0.0;
#pragma omp simd reduction(max : m)
    for (std::size_t i = 0; i < k; ++i) {
      const double v = std::abs(sk - s[i]) * wk[i];
      m = v > m ? v : m;
    }
    running = std::max(running, m);
    out[k] = running;
  }
  return out;
}

double holder_norm_of_path(const PolygonalPath& path, double alpha) {
  const HolderStatistic m = holder_max_exact(path, alpha);
  return std::pow(static_cast<double>(path.n()), alpha) * m.value;
}

double modulus_restricted(const PolygonalPath& path, double alpha, double delta) {
  check_alpha(alpha);
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  const std::size_t n = path.n();
  if (n == 0) throw InvalidArgument("modulus needs n >= 1");
  const double nd = static_cast<double>(n) * delta;
  const auto lag = std::min<std::size_t>(n, static_cast<std::size_t>(std::floor(nd)));
  if (lag == 0) {
    double step = 0.0;
    const auto s = path.partial_sums();
    for (std::size_t k = 0; k < n; ++k) step = std::max(step, std::abs(s[k + 1] - s[k]));
    return step * static_cast<double>(n) * std::pow(delta, 1.0 - alpha);
  }
  const HolderStatistic m = scan_lags(path, alpha, lag, HolderMethod::windowed);
  return std::pow(static_cast<double>(n), alpha) * m.value;
}

std::vector<double> pairwise_sum(std::span<const double> increments) {
  std::vector<double> out(increments.size() / 2);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = increments[2 * t] + increments[2 * t + 1];
  return out;
}

HolderStatistic dyadic_upper(std::span<const double> increments, double alpha) {
  check_alpha(alpha);
  if (increments.empty()) throw InvalidArgument("dyadic bound needs n >= 1");
  std::vector<double> level(increments.begin(), increments.end());
  double total = 0.0;
  for (int l = 0; !level.empty(); ++l) {
    double top = 0.0;
    for (double x : level) top = std::max(top, std::abs(x));
    total += std::pow(2.0, -static_cast<double>(l) * alpha) * 6.0 * top;
    level = pairwise_sum(level);
  }
  HolderStatistic stat;
  stat.value = total;
  stat.method = HolderMethod::dyadic_upper;
  stat.alpha = alpha;
  return stat;
}

HolderStatistic dyadic_lower(const PolygonalPath& path, double alpha) {
  check_alpha(alpha);
  const std::size_t n = path.n();
  if (n == 0) throw InvalidArgument("dyadic bound needs n >= 1");
  const auto s = path.partial_sums();
  double best = -1.0;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t d = 1; d <= n; d *= 2) {
    const double w = std::pow(static_cast<double>(d), -alpha);
    for (std::size_t i = 0; i + d <= n; i += d) {
      const double value = std::abs(s[i + d] - s[i]) * w;
      if (value > best || (value == best && std::pair(i, i + d) < std::pair(bi, bj))) {
        best = value;
        bi = i;
        bj = i + d;
      }
    }
  }
  HolderStatistic stat;
  stat.value = best;
  stat.method = HolderMethod::dyadic_lower;
  stat.alpha = alpha;
  stat.argmax = std::pair(bi, bj);
  return stat;
}

}  // namespace hwip
