#include "hwip/functional.hpp"

#include <algorithm>
#include <cmath>

namespace hwip {

InnovationFunctional::InnovationFunctional(std::int64_t first_index,
                                           std::vector<double> coefficients)
    : first(first_index), coef(std::move(coefficients)) {}

InnovationFunctional InnovationFunctional::single(std::int64_t index, double weight) {
  return InnovationFunctional(index, {weight});
}

double InnovationFunctional::at(std::int64_t s) const noexcept {
  if (coef.empty() || s < first || s > last()) return 0.0;
  return coef[static_cast<std::size_t>(s - first)];
}

bool InnovationFunctional::is_zero() const noexcept {
  return std::all_of(coef.begin(), coef.end(), [](double c) { return c == 0.0; });
}

double InnovationFunctional::l2() const noexcept {
  double sum = 0.0;
  for (double c : coef) sum += c * c;
  return std::sqrt(sum);
}

InnovationFunctional& InnovationFunctional::trim() {
  auto begin = std::find_if(coef.begin(), coef.end(), [](double c) { return c != 0.0; });
  if (begin == coef.end()) {
    coef.clear();
    first = 0;
    return *this;
  }
  auto end = std::find_if(coef.rbegin(), coef.rend(), [](double c) { return c != 0.0; }).base();
  first += begin - coef.begin();
  coef = std::vector<double>(begin, end);
  return *this;
}

namespace {

InnovationFunctional combine(const InnovationFunctional& a, const InnovationFunctional& b,
                             double sign) {
  if (a.empty()) return sign * b;
  if (b.empty()) return a;
  const std::int64_t lo = std::min(a.first, b.first);
  const std::int64_t hi = std::max(a.last(), b.last());
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::int64_t s = lo; s <= hi; ++s)
    out[static_cast<std::size_t>(s - lo)] = a.at(s) + sign * b.at(s);
  return InnovationFunctional(lo, std::move(out)).trim();
}

}  // namespace

InnovationFunctional operator+(const InnovationFunctional& a, const InnovationFunctional& b) {
  return combine(a, b, 1.0);
}

InnovationFunctional operator-(const InnovationFunctional& a, const InnovationFunctional& b) {
  return combine(a, b, -1.0);
}

InnovationFunctional operator*(double lambda, const InnovationFunctional& h) {
  InnovationFunctional out = h;
  for (double& c : out.coef) c *= lambda;
  return out.trim();
}

InnovationFunctional shift(const InnovationFunctional& h, std::int64_t k) {
  InnovationFunctional out = h;
  if (!out.empty()) out.first += k;
  return out;
}

InnovationFunctional condition_on(const InnovationFunctional& h, std::int64_t t) {
  if (h.empty() || h.first > t) return {};
  if (h.last() <= t) return h;
  std::vector<double> kept(h.coef.begin(), h.coef.begin() + (t - h.first + 1));
  return InnovationFunctional(h.first, std::move(kept)).trim();
}

InnovationFunctional innovation_part(const InnovationFunctional& h, std::int64_t t) {
  if (h.empty() || h.last() <= t) return {};
  if (h.first > t) return h;
  std::vector<double> kept(h.coef.begin() + (t + 1 - h.first), h.coef.end());
  return InnovationFunctional(t + 1, std::move(kept)).trim();
}

}  // namespace hwip
