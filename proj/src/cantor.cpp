#include "qp/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace qp {

double LabelSet::distance(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) {
    double d = std::abs(x - v);
    d -= std::floor(d);
    best = std::min(best, std::min(d, 1.0 - d));
  }
  return best;
}

double LabelSet::nearest(double x) const {
  double best = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (double v : values) {
    double d = std::abs(x - v);
    d -= std::floor(d);
    d = std::min(d, 1.0 - d);
    if (d < best) {
      best = d;
      arg = v;
    }
  }
  return arg;
}

LabelSet make_label_set(std::vector<double> values) {
  for (double& v : values) {
    v -= std::floor(v);
    if (v >= 1.0 - kLabelDedupTol) v = 0.0;
  }
  std::sort(values.begin(), values.end());
  LabelSet out;
  for (double v : values) {
    if (out.values.empty() || v - out.values.back() > kLabelDedupTol) out.values.push_back(v);
  }
  return out;
}

namespace {

double cantor_alpha_float(double x) {
  double value = 0.0;
  double weight = 0.5;
  for (int n = 0; n < kCantorDigitCap; ++n) {
    x *= 3.0;
    const double digit = std::floor(x);
    x -= digit;
    if (digit >= 1.0 && digit < 2.0) return value + weight;
    if (digit >= 2.0) value += weight;
    weight *= 0.5;
  }
  return value;
}

// value at m / 3^k from the exact base-3 digits of m
double cantor_alpha_triadic(std::int64_t m, int k) {
  std::vector<int> digits(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i, m /= 3) digits[static_cast<std::size_t>(i)] = static_cast<int>(m % 3);
  double value = 0.0;
  double weight = 0.5;
  for (int digit : digits) {
    if (digit == 1) return value + weight;
    if (digit == 2) value += weight;
    weight *= 0.5;
  }
  return value;
}

constexpr int kTriadicSnapDepth = 20;

}  // namespace

double cantor_alpha(double x) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  // the double nearest 1/3 is not 1/3; read near-triadic inputs as exact
  std::int64_t p3 = 1;
  for (int k = 1; k <= kTriadicSnapDepth; ++k) {
    p3 *= 3;
    const double y = x * static_cast<double>(p3);
    const double m = std::round(y);
    if (std::abs(y - m) <= 4.0 * std::numeric_limits<double>::epsilon() * y)
      return cantor_alpha_triadic(static_cast<std::int64_t>(m), k);
  }
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, mant in [1/2, 1)
  // x = m / 2^k with m < 2^53
  const auto m = static_cast<__int128>(std::ldexp(mant, 53));
  const int k = 53 - exp;
  if (k > 125) return cantor_alpha_float(x);

  const __int128 one = static_cast<__int128>(1) << k;
  __int128 num = m;
  double value = 0.0;
  double weight = 0.5;
  // 64 digits put the truncation error below 2^-64
  for (int n = 0; n < 64; ++n) {
    num *= 3;
    const int digit = static_cast<int>(num >> k);
    num -= static_cast<__int128>(digit) * one;
    if (digit == 1) return value + weight;
    if (digit == 2) value += weight;
    weight *= 0.5;
    if (num == 0) break;
  }
  return value;
}

std::complex<double> cantor_fourier(double t, int N) {
  if (N < 1) throw DomainError("cantor_fourier needs N >= 1");
  double prod = 1.0;
  double scale = 1.0;
  for (int n = 1; n <= N; ++n) {
    scale *= 3.0;
    prod *= std::cos(t / scale);
  }
  return std::polar(1.0, 0.5 * t) * prod;
}

LabelSet sturmian_label_set(const Alpha& alpha, int k_max) {
  if (k_max < 0) throw DomainError("sturmian_label_set needs k_max >= 0");
  if (!(alpha.value() > 0.0 && alpha.value() < 1.0))
    throw DomainError("sturmian_label_set needs 0 < alpha < 1");
  std::vector<double> v;
  for (int k = -k_max; k <= k_max; ++k) v.push_back(alpha.frac_multiple(k));
  return make_label_set(std::move(v));
}

LabelSet hierarchical_labels(int n_max) {
  if (n_max < 0 || n_max > 30) throw DomainError("hierarchical_labels needs 0 <= n_max <= 30");
  std::vector<double> v;
  for (int n = 0; n <= n_max; ++n) {
    const double denom = std::ldexp(1.0, n + 1);
    for (std::int64_t k = 1; k <= (std::int64_t{1} << n); ++k)
      v.push_back(static_cast<double>(2 * k - 1) / denom);
  }
  return make_label_set(std::move(v));
}

std::vector<std::pair<double, double>> middle_thirds(int level) {
  if (level < 0 || level > 24) throw DomainError("middle_thirds needs 0 <= level <= 24");
  std::vector<std::pair<double, double>> cur{{0.0, 1.0}};
  for (int l = 0; l < level; ++l) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * cur.size());
    for (const auto& [lo, hi] : cur) {
      const double third = (hi - lo) / 3.0;
      next.emplace_back(lo, lo + third);
      next.emplace_back(hi - third, hi);
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace qp
