#include "qp/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qp {

namespace {

constexpr double kLn2 = std::numbers::ln2;

}  // namespace

void Mat2::rescale() {
  const double m = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (m == 0.0 || !std::isfinite(m)) return;
  int e = 0;
  std::frexp(m, &e);
  if (e == 0) return;
  a = std::ldexp(a, -e);
  b = std::ldexp(b, -e);
  c = std::ldexp(c, -e);
  d = std::ldexp(d, -e);
  log_scale += e * kLn2;
}

double Mat2::det() const { return std::exp(2.0 * log_scale) * (a * d - b * c); }

double Mat2::trace() const { return std::exp(log_scale) * (a + d); }

double Mat2::log_abs_trace() const {
  const double t = std::abs(a + d);
  if (t == 0.0) return -std::numeric_limits<double>::infinity();
  return log_scale + std::log(t);
}

double Mat2::trace_norm_sq() const {
  return std::exp(2.0 * log_scale) * (a * a + b * b + c * c + d * d);
}

double Mat2::log_trace_norm_sq() const {
  return 2.0 * log_scale + std::log(a * a + b * b + c * c + d * d);
}

double Mat2::log_norm() const {
  const double t = a * a + b * b + c * c + d * d;
  const double det_n = a * d - b * c;
  const double disc = std::max(0.0, 0.25 * t * t - det_n * det_n);
  return log_scale + 0.5 * std::log(0.5 * t + std::sqrt(disc));
}

double Mat2::norm() const { return std::exp(log_norm()); }

Mat2 Mat2::inverse() const {
  // unimodular: A^{-1} = adj(A)
  Mat2 inv{d, -b, -c, a, log_scale};
  return inv;
}

Mat2 operator*(const Mat2& lhs, const Mat2& rhs) {
  Mat2 out{lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
           lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d,
           lhs.log_scale + rhs.log_scale};
  out.rescale();
  return out;
}

std::string_view to_string(MatClass c) {
  switch (c) {
    case MatClass::Elliptic: return "elliptic";
    case MatClass::Hyperbolic: return "hyperbolic";
    case MatClass::Parabolic: return "parabolic";
    case MatClass::PlusIdentity: return "+I";
    case MatClass::MinusIdentity: return "-I";
  }
  return "unknown";
}

double StateVec::log_norm() const {
  return log_scale + 0.5 * std::log(psi_next * psi_next + psi * psi);
}

StateVec operator*(const Mat2& m, const StateVec& v) {
  StateVec out{m.a * v.psi_next + m.b * v.psi, m.c * v.psi_next + m.d * v.psi,
               m.log_scale + v.log_scale};
  const double mag = std::max(std::abs(out.psi_next), std::abs(out.psi));
  if (mag != 0.0 && std::isfinite(mag)) {
    int e = 0;
    std::frexp(mag, &e);
    out.psi_next = std::ldexp(out.psi_next, -e);
    out.psi = std::ldexp(out.psi, -e);
    out.log_scale += e * kLn2;
  }
  return out;
}

Mat2 step_matrix(double E, double v) { return {E - v, -1.0, 1.0, 0.0, 0.0}; }

Mat2 propagate(double E, std::span<const double> values) {
  if (values.empty()) throw DomainError("propagate needs at least one site");
  // left-multiply T_n = [[E - V_n, -1], [1, 0]] in place
  Mat2 m = step_matrix(E, values[0]);
  for (std::size_t n = 1; n < values.size(); ++n) {
    const double x = E - values[n];
    const double na = x * m.a - m.c;
    const double nb = x * m.b - m.d;
    m.c = m.a;
    m.d = m.b;
    m.a = na;
    m.b = nb;
    m.rescale();
  }
  return m;
}

MatClass classify(const Mat2& m, double tol) {
  const double tr = m.trace();
  const double mag = std::abs(tr);
  if (mag < 2.0 - tol) return MatClass::Elliptic;
  if (mag > 2.0 + tol) return MatClass::Hyperbolic;
  const double s = std::exp(m.log_scale);
  const bool diagonal = std::abs(s * m.b) <= tol && std::abs(s * m.c) <= tol;
  if (diagonal) return tr > 0 ? MatClass::PlusIdentity : MatClass::MinusIdentity;
  return MatClass::Parabolic;
}

double lyapunov_estimate(std::span<const double> values, double E) {
  const Mat2 m = propagate(E, values);
  return std::max(0.0, m.log_norm() / static_cast<double>(values.size()));
}

double lyapunov_estimate(const PotentialSpec& spec, double E, std::int64_t n) {
  if (n < 1) throw DomainError("lyapunov_estimate needs n >= 1");
  const auto v = sample_potential(spec, 1, n);
  return lyapunov_estimate(v, E);
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.coeffs.empty() || rhs.coeffs.empty()) return {};
  Polynomial out{std::vector<double>(lhs.coeffs.size() + rhs.coeffs.size() - 1, 0.0)};
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs.size(); ++j)
      out.coeffs[i + j] += lhs.coeffs[i] * rhs.coeffs[j];
  return out;
}

Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs) {
  Polynomial out{std::vector<double>(std::max(lhs.coeffs.size(), rhs.coeffs.size()), 0.0)};
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) out.coeffs[i] += lhs.coeffs[i];
  for (std::size_t i = 0; i < rhs.coeffs.size(); ++i) out.coeffs[i] += rhs.coeffs[i];
  return out;
}

Polynomial operator-(const Polynomial& lhs, const Polynomial& rhs) {
  Polynomial neg = rhs;
  for (double& c : neg.coeffs) c = -c;
  return lhs + neg;
}

Polynomial trace_poly(const PeriodicPotential& p) {
  const std::size_t L = p.period();
  if (L == 0) throw DomainError("trace_poly needs a nonempty period");
  if (L > kTracePolyMaxPeriod)
    throw DomainError("trace_poly period " + std::to_string(L) + " exceeds the cap of " +
                      std::to_string(kTracePolyMaxPeriod));
  Polynomial a{{1.0}}, b{{0.0}}, c{{0.0}}, d{{1.0}};
  for (double v : p.values) {
    const Polynomial step{{-v, 1.0}};  // E - v
    Polynomial na = step * a - c;
    Polynomial nb = step * b - d;
    c = std::move(a);
    d = std::move(b);
    a = std::move(na);
    b = std::move(nb);
  }
  Polynomial tr = a + d;
  tr.coeffs.resize(L + 1);
  return tr;
}

GordonRatio gordon_ratio(std::span<const double> values, double E, int L, double tol) {
  if (L < 1) throw DomainError("gordon_ratio needs L >= 1");
  const auto len = static_cast<std::size_t>(L);
  if (values.size() != 3 * len)
    throw DomainError("gordon_ratio needs V_{-L+1}..V_{2L} (3L values)");
  for (std::size_t j = 0; j < len; ++j) {
    const double left = values[j];
    const double mid = values[len + j];
    const double right = values[2 * len + j];
    if (std::abs(left - mid) > tol || std::abs(mid - right) > tol)
      throw DomainError("potential does not repeat on three neighbouring blocks");
  }
  // V_n lives at values[n + L - 1]
  const StateVec psi0{1.0, 0.0, 0.0};

  StateVec fwd = psi0;
  Mat2 block = Mat2::identity();
  double log_psi_L = 0.0;
  for (std::size_t n = 1; n <= 2 * len; ++n) {
    const Mat2 t = step_matrix(E, values[n + len - 1]);
    fwd = t * fwd;
    if (n <= len) block = t * block;
    if (n == len) log_psi_L = fwd.log_norm();
  }
  const double log_psi_2L = fwd.log_norm();

  StateVec back = psi0;
  for (std::int64_t n = 0; n >= -static_cast<std::int64_t>(len) + 1; --n) {
    const double v = values[static_cast<std::size_t>(n + L - 1)];
    const Mat2 t_inv{0.0, 1.0, -1.0, E - v, 0.0};
    back = t_inv * back;
  }
  const double log_psi_mL = back.log_norm();

  GordonRatio out;
  out.three_block = std::exp(std::max({log_psi_mL, log_psi_L, log_psi_2L}));
  const double tr = std::abs(block.trace());
  out.two_block = std::max(tr * std::exp(log_psi_L), std::exp(log_psi_2L));
  return out;
}

}  // namespace qp
