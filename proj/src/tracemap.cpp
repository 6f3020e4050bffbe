#include "qp/tracemap.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "qp/kernels.hpp"

namespace qp {

namespace {

const double kLogThreshold = std::log(kLogRealThreshold);

}  // namespace

LogReal::LogReal(double x) : value_(x) { normalize(); }

LogReal LogReal::from_log(int sign, double log_abs) {
  LogReal r;
  if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
  r.is_log_ = true;
  r.value_ = sign > 0 ? 1.0 : -1.0;
  r.log_abs_ = log_abs;
  r.normalize();
  return r;
}

LogReal LogReal::from_trace(const Mat2& m) {
  const double t = m.a + m.d;
  if (t == 0.0) return LogReal(0.0);
  return from_log(t > 0.0 ? 1 : -1, std::log(std::abs(t)) + m.log_scale);
}

void LogReal::normalize() {
  if (!is_log_) {
    if (std::abs(value_) > kLogRealThreshold) {
      is_log_ = true;
      log_abs_ = std::log(std::abs(value_));
      value_ = value_ > 0.0 ? 1.0 : -1.0;
    }
  } else if (log_abs_ <= kLogThreshold) {
    is_log_ = false;
    value_ = value_ * std::exp(log_abs_);
    log_abs_ = 0.0;
  }
}

int LogReal::sign() const { return value_ > 0.0 ? 1 : (value_ < 0.0 ? -1 : 0); }

double LogReal::log_abs() const { return is_log_ ? log_abs_ : std::log(std::abs(value_)); }

double LogReal::value() const { return is_log_ ? value_ * std::exp(log_abs_) : value_; }

bool LogReal::abs_greater(double bound) const {
  if (is_log_) return log_abs_ > std::log(bound);
  return std::abs(value_) > bound;
}

LogReal LogReal::operator-() const {
  LogReal r = *this;
  r.value_ = -r.value_;
  return r;
}

LogReal operator*(const LogReal& x, const LogReal& y) {
  if (!x.is_log_ && !y.is_log_) {
    const double p = x.value_ * y.value_;
    if (std::isfinite(p)) return LogReal(p);
  }
  const int s = x.sign() * y.sign();
  if (s == 0) return LogReal(0.0);
  return LogReal::from_log(s, x.log_abs() + y.log_abs());
}

LogReal operator+(const LogReal& x, const LogReal& y) {
  if (!x.is_log_ && !y.is_log_) return LogReal(x.value_ + y.value_);
  if (x.sign() == 0) return y;
  if (y.sign() == 0) return x;
  const bool x_big = x.log_abs() >= y.log_abs();
  const LogReal& big = x_big ? x : y;
  const LogReal& small = x_big ? y : x;
  const double ratio = std::exp(small.log_abs() - big.log_abs());
  const double s = static_cast<double>(big.sign() * small.sign());
  if (s < 0.0 && ratio == 1.0) return LogReal(0.0);
  return LogReal::from_log(big.sign(), big.log_abs() + std::log1p(s * ratio));
}

LogReal operator-(const LogReal& x, const LogReal& y) { return x + (-y); }

double relative_difference(const LogReal& x, const LogReal& y) {
  const LogReal d = x - y;
  if (d.sign() == 0) return 0.0;
  const double scale = std::max({0.0, x.log_abs(), y.log_abs()});
  return std::exp(d.log_abs() - scale);
}

double fricke_invariant(double t2, double t1, double t0) {
  return t2 * t2 + t1 * t1 + t0 * t0 - t2 * t1 * t0 - 4.0;
}

double fricke_deviation(const LogReal& t2, const LogReal& t1, const LogReal& t0, double target) {
  const LogReal value =
      t2 * t2 + t1 * t1 + t0 * t0 - t2 * t1 * t0 - LogReal(4.0) - LogReal(target);
  if (value.sign() == 0) return 0.0;
  const double scale = 2.0 * std::max({0.0, t2.log_abs(), t1.log_abs(), t0.log_abs()});
  return std::exp(value.log_abs() - scale);
}

TraceOrbit fibonacci_trace_orbit(double E, double lambda, int n_max) {
  if (n_max < 1) throw DomainError("fibonacci_trace_orbit needs n_max >= 1");
  TraceOrbit orbit;
  orbit.taus.reserve(static_cast<std::size_t>(n_max) + 2);
  orbit.taus.emplace_back(2.0);
  orbit.taus.emplace_back(E);
  orbit.taus.emplace_back(E - lambda);
  while (orbit.last_index() < n_max) {
    const std::size_t k = orbit.taus.size();
    orbit.taus.push_back(orbit.taus[k - 1] * orbit.taus[k - 2] - orbit.taus[k - 3]);
  }
  orbit.invariant = fricke_invariant(E - lambda, E, 2.0);
  for (int n = 0; n <= n_max; ++n) {
    if (orbit.tau(n - 1).abs_greater(2.0) && orbit.tau(n).abs_greater(2.0)) {
      orbit.escape_index = n;
      break;
    }
  }
  return orbit;
}

std::optional<int> fibonacci_escape(double E, double lambda, int n_max) {
  return fibonacci_trace_orbit(E, lambda, n_max).escape_index;
}

const LogReal& LetterOrbit::trace(int step, char letter) const {
  const auto pos = alphabet.find(letter);
  if (pos == std::string::npos) throw DomainError(std::string("letter not in alphabet: ") + letter);
  return traces.at(static_cast<std::size_t>(step)).at(pos);
}

LetterOrbit letter_matrix_orbit(const SubstitutionRule& rule,
                                const std::map<char, double>& letter_values, double E, int n_max) {
  if (n_max < 0) throw DomainError("letter_matrix_orbit needs n_max >= 0");
  if (!rule.is_primitive()) throw DomainError("letter_matrix_orbit needs a primitive rule");
  LetterOrbit out;
  out.alphabet = rule.alphabet();
  const std::size_t k = out.alphabet.size();

  std::vector<Mat2> mats(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto it = letter_values.find(out.alphabet[i]);
    if (it == letter_values.end())
      throw DomainError(std::string("no value for letter ") + out.alphabet[i]);
    mats[i] = step_matrix(E, it->second);
  }

  auto record = [&] {
    std::vector<LogReal> row;
    row.reserve(k);
    for (const Mat2& m : mats) row.push_back(LogReal::from_trace(m));
    out.traces.push_back(std::move(row));
  };
  record();
  for (int step = 1; step <= n_max; ++step) {
    std::vector<Mat2> next(k);
    for (std::size_t i = 0; i < k; ++i) {
      Mat2 m = Mat2::identity();
      // word w_1...w_m maps to T(w_m) ... T(w_1)
      for (char c : rule.image(out.alphabet[i])) m = mats[rule.index_of(c)] * m;
      next[i] = m;
    }
    mats = std::move(next);
    record();
  }
  out.final_matrices = mats;
  return out;
}

namespace {

struct Interval {
  double lo;
  double hi;
};

Interval widen(double lo, double hi) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {std::nextafter(lo, -inf), std::nextafter(hi, inf)};
}

Interval operator*(const Interval& x, const Interval& y) {
  const double p[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
  return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval operator-(const Interval& x, const Interval& y) { return widen(x.lo - y.hi, x.hi - y.lo); }

bool outside_two(const Interval& x) { return x.lo > 2.0 || x.hi < -2.0; }

// True when every energy of [e_lo, e_hi] escapes within n_max steps.
bool cell_escapes(double lambda, double e_lo, double e_hi, int n_max) {
  Interval prev2{2.0, 2.0};
  Interval prev{e_lo, e_hi};
  Interval cur = widen(e_lo - lambda, e_hi - lambda);
  // (prev2, prev, cur) = (tau_{n-2}, tau_{n-1}, tau_n) starting at n = 1
  if (outside_two(prev2) && outside_two(prev)) return true;
  for (int n = 1; n <= n_max; ++n) {
    if (outside_two(prev) && outside_two(cur)) return true;
    const Interval next = cur * prev - prev2;
    if (!std::isfinite(next.lo) || !std::isfinite(next.hi)) return false;
    prev2 = prev;
    prev = cur;
    cur = next;
  }
  return false;
}

BandSet merge_cells(const std::vector<std::int64_t>& cells, double e_lo, double width) {
  BandSet out;
  std::int64_t run_start = -1, run_end = -1;
  auto flush = [&] {
    if (run_start < 0) return;
    out.bands.push_back({e_lo + static_cast<double>(run_start) * width,
                         e_lo + static_cast<double>(run_end + 1) * width, 1});
  };
  for (std::int64_t c : cells) {
    if (run_start >= 0 && c == run_end + 1) {
      run_end = c;
      continue;
    }
    flush();
    run_start = run_end = c;
  }
  flush();
  return out;
}

template <bool Parallel>
BandSet bounded_spectrum_impl(double lambda, double e_lo, double e_hi, int depth, int n_max) {
  if (depth < 1 || n_max < 1) throw DomainError("bounded_spectrum needs depth, n_max >= 1");
  if (!(e_hi > e_lo)) throw DomainError("bounded_spectrum needs e_lo < e_hi");
  if (depth > 40) throw DomainError("bounded_spectrum depth is capped at 40");
  std::vector<std::int64_t> cells{0};
  const double span = e_hi - e_lo;
  for (int level = 0; level <= depth; ++level) {
    const double width = std::ldexp(span, -level);
    const auto n = static_cast<std::int64_t>(cells.size());
    std::vector<char> keep(cells.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(num_threads()) if (Parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      const double lo = e_lo + static_cast<double>(cells[i]) * width;
      keep[i] = cell_escapes(lambda, lo, lo + width, n_max) ? 0 : 1;
    }
    std::vector<std::int64_t> next;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!keep[i]) continue;
      if (level == depth) {
        next.push_back(cells[i]);
      } else {
        next.push_back(2 * cells[i]);
        next.push_back(2 * cells[i] + 1);
      }
    }
    cells = std::move(next);
  }
  return merge_cells(cells, e_lo, std::ldexp(span, -depth));
}

}  // namespace

BandSet bounded_spectrum(double lambda, double e_lo, double e_hi, int depth, int n_max) {
  return bounded_spectrum_impl<true>(lambda, e_lo, e_hi, depth, n_max);
}

namespace serial {
BandSet bounded_spectrum(double lambda, double e_lo, double e_hi, int depth, int n_max) {
  return bounded_spectrum_impl<false>(lambda, e_lo, e_hi, depth, n_max);
}
}  // namespace serial

namespace {

LogReal thue_morse_trace(const std::map<char, double>& values, double E, int n) {
  static const SubstitutionRule rule = SubstitutionRule::thue_morse();
  return letter_matrix_orbit(rule, values, E, n).trace(n, 'a');
}

}  // namespace

double thue_morse_identity_residual(const std::map<char, double>& letter_values, double E, int n) {
  if (n < 0) throw DomainError("thue_morse_identity_residual needs n >= 0");
  static const SubstitutionRule rule = SubstitutionRule::thue_morse();
  const auto orbit = letter_matrix_orbit(rule, letter_values, E, n + 2);
  const LogReal& xn = orbit.trace(n, 'a');
  const LogReal lhs = orbit.trace(n + 2, 'a') - LogReal(2.0);
  const LogReal rhs = (orbit.trace(n + 1, 'a') - LogReal(2.0)) * xn * xn;
  return relative_difference(lhs, rhs);
}

std::vector<double> thue_morse_zeros(const std::map<char, double>& letter_values, int n,
                                     double e_lo, double e_hi, int samples) {
  if (samples < 2) throw DomainError("thue_morse_zeros needs at least two samples");
  auto f = [&](double E) { return thue_morse_trace(letter_values, E, n).value(); };
  const auto grid = linspace(e_lo, e_hi, static_cast<std::size_t>(samples));
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);

  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (vals[i] == 0.0) {
      zeros.push_back(grid[i]);
      continue;
    }
    if ((vals[i] < 0.0) == (vals[i + 1] < 0.0) || vals[i + 1] == 0.0) continue;
    double lo = grid[i], hi = grid[i + 1];
    const bool lo_negative = vals[i] < 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == lo_negative) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    zeros.push_back(0.5 * (lo + hi));
  }
  if (!grid.empty() && vals.back() == 0.0) zeros.push_back(grid.back());
  return zeros;
}

GapClosingResidual gap_closing_residual(const std::map<char, double>& letter_values,
                                        double E_star, int n, double h) {
  if (n < 0) throw DomainError("gap_closing_residual needs n >= 0");
  if (!(h > 0.0)) throw DomainError("gap_closing_residual needs h > 0");
  auto x = [&](int m, double E) { return thue_morse_trace(letter_values, E, m).value(); };
  GapClosingResidual out;
  out.value_residual = std::abs(x(n + 2, E_star) - 2.0);
  out.derivative = ((x(n + 2, E_star + h) - 2.0) - (x(n + 2, E_star - h) - 2.0)) / (2.0 * h);
  const double dxn = (x(n, E_star + h) - x(n, E_star - h)) / (2.0 * h);
  out.curvature_scale = std::abs(x(n + 1, E_star) - 2.0) * dxn * dxn;
  out.derivative_residual = std::abs(out.derivative) / std::max(1.0, out.curvature_scale);
  return out;
}

}  // namespace qp
