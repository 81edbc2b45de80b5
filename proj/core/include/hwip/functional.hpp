#pragma once

#include <cstdint>
#include <vector>

namespace hwip {

/// A finite linear combination  h = sum_s coef[s - first] * zeta_s  of a
/// model's unit innovations (zeta_s)_{s in Z}, where zeta_s is measurable
/// with respect to F_s = sigma(eps_r, r <= s) and E[zeta_s | F_{s-1}] = 0.
///
/// With M = F_0 and the Koopman operator U (zeta_s -> zeta_{s+1}), every
/// conditional expectation and shift used by the P_T operators stays inside
/// this class, which is what makes those operators exact.
struct InnovationFunctional {
  std::int64_t first = 0;
  std::vector<double> coef;

  InnovationFunctional() = default;
  InnovationFunctional(std::int64_t first_index, std::vector<double> coefficients);

  static InnovationFunctional single(std::int64_t index, double weight);

  bool empty() const noexcept { return coef.empty(); }
  std::int64_t last() const noexcept {
    return first + static_cast<std::int64_t>(coef.size()) - 1;
  }
  double at(std::int64_t s) const noexcept;
  bool is_zero() const noexcept;
  /// Euclidean norm of the coefficient vector (= L^2 norm for orthonormal zeta).
  double l2() const noexcept;
  /// Drops leading and trailing zero coefficients.
  InnovationFunctional& trim();

  friend bool operator==(const InnovationFunctional&, const InnovationFunctional&) = default;
};

InnovationFunctional operator+(const InnovationFunctional& a, const InnovationFunctional& b);
InnovationFunctional operator-(const InnovationFunctional& a, const InnovationFunctional& b);
InnovationFunctional operator*(double lambda, const InnovationFunctional& h);

/// U^k h: composition with T^k (k may be negative).
InnovationFunctional shift(const InnovationFunctional& h, std::int64_t k);

/// E[h | F_t]: keeps the terms with index s <= t.
InnovationFunctional condition_on(const InnovationFunctional& h, std::int64_t t = 0);

/// h - E[h | F_t].
InnovationFunctional innovation_part(const InnovationFunctional& h, std::int64_t t = 0);

}  // namespace hwip
