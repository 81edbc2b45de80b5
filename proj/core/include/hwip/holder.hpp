#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hwip {

/// Partial sums S_0 = 0, S_1, ..., S_n of an increment sequence, read as the
/// polygonal line W(t) = S_[nt] + (nt - [nt]) (S_[nt]+1 - S_[nt]) on [0, 1].
class PolygonalPath {
 public:
  PolygonalPath() = default;

  static PolygonalPath from_increments(std::span<const double> increments);
  /// Throws InvalidArgument unless sums.size() >= 2 and sums[0] == 0.
  static PolygonalPath from_partial_sums(std::vector<double> sums);

  std::size_t n() const noexcept { return sums_.empty() ? 0 : sums_.size() - 1; }
  std::span<const double> partial_sums() const noexcept { return sums_; }
  double operator[](std::size_t k) const noexcept { return sums_[k]; }
  std::vector<double> increments() const;

  /// W(t) for t in [0, 1].
  double evaluate(double t) const;

 private:
  std::vector<double> sums_;
};

enum class HolderMethod { exact_pairs, windowed, dyadic_upper, dyadic_lower };

std::string_view to_string(HolderMethod method) noexcept;

struct HolderStatistic {
  double value = 0.0;
  HolderMethod method = HolderMethod::exact_pairs;
  double alpha = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> argmax;
};

/// max over 0 <= i < j <= n of |S_j - S_i| / (j - i)^alpha; ties go to the
/// smallest (i, j).
HolderStatistic holder_max_exact(const PolygonalPath& path, double alpha);

/// Same maximum restricted to 1 <= j - i <= max_lag.
HolderStatistic holder_max_windowed(const PolygonalPath& path, double alpha, std::size_t max_lag);

/// Per-lag maxima: entry d - 1 is max_i |S_{i+d} - S_i| / d^alpha, d = 1..max_lag.
std::vector<double> holder_lag_maxima(const PolygonalPath& path, double alpha, std::size_t max_lag);

/// M(k) for k = 0..n on the prefixes of one path (M(0) = 0).
std::vector<double> holder_max_prefixes(const PolygonalPath& path, double alpha);

/// Hoelder norm of t -> W(t) on [0, 1]: n^alpha * M(n). W(0) = 0 so the
/// sup-norm part vanishes.
double holder_norm_of_path(const PolygonalPath& path, double alpha);

/// Vertex-restricted modulus sup |W(t) - W(s)| / |t - s|^alpha over vertex
/// pairs with |t - s| <= delta, i.e. n^alpha * windowed(floor(n delta)).
/// Below one segment (n delta < 1) the in-segment slope bound is returned.
/// Always a lower bound for the continuous modulus.
double modulus_restricted(const PolygonalPath& path, double alpha, double delta);

/// O(n) upper bound: sum over dyadic levels of 2^{-l alpha} * 6 max |h^(l)|,
/// with h^(l+1)_t = h^(l)_{2t} + h^(l)_{2t+1}; an odd trailing increment only
/// enters its own level's max.
HolderStatistic dyadic_upper(std::span<const double> increments, double alpha);

/// Maximum over aligned dyadic pairs (k 2^l, (k + 1) 2^l).
HolderStatistic dyadic_lower(const PolygonalPath& path, double alpha);

/// h_{2t} + h_{2t+1}, t < floor(n / 2).
std::vector<double> pairwise_sum(std::span<const double> increments);

}  // namespace hwip
