#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qp/potentials.hpp"

namespace qp {

// Real 2x2 matrix e^{log_scale} * [[a, b], [c, d]].  Products renormalize
// the entries by a power of two so that the largest magnitude stays in
// [1/2, 1); the exponent is accumulated into log_scale.
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  double log_scale = 0.0;

  static Mat2 identity() { return {}; }

  void rescale();
  // det of the true matrix, e^{2 log_scale} (ad - bc)
  double det() const;
  // trace of the true matrix (may overflow to +-inf)
  double trace() const;
  // log |trace| of the true matrix, -inf for a zero trace
  double log_abs_trace() const;
  // ||A||_2^2 = a^2 + b^2 + c^2 + d^2 of the true matrix
  double trace_norm_sq() const;
  double log_trace_norm_sq() const;
  // operator norm: ||A||^2 = t/2 + sqrt(t^2/4 - det^2), t = ||A||_2^2
  double log_norm() const;
  double norm() const;

  Mat2 inverse() const;
};

Mat2 operator*(const Mat2& lhs, const Mat2& rhs);

enum class MatClass { Elliptic, Hyperbolic, Parabolic, PlusIdentity, MinusIdentity };
std::string_view to_string(MatClass c);

// Psi_n = (psi_{n+1}, psi_n) times e^{log_scale}
struct StateVec {
  double psi_next = 1.0;
  double psi = 0.0;
  double log_scale = 0.0;

  double log_norm() const;
};

StateVec operator*(const Mat2& m, const StateVec& v);

// T_n = [[E - v, -1], [1, 0]]
Mat2 step_matrix(double E, double v);

// T_{1->L} = T_L ... T_1 for values V_1..V_L
Mat2 propagate(double E, std::span<const double> values);

inline constexpr double kIdentityTol = 1e-9;
MatClass classify(const Mat2& m, double tol = kIdentityTol);

// gamma_n = ln ||T_{1->n}|| / n over V_1..V_n
double lyapunov_estimate(std::span<const double> values, double E);
double lyapunov_estimate(const PotentialSpec& spec, double E, std::int64_t n);

// Dense polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<double> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double operator()(double x) const;
};

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs);
Polynomial operator-(const Polynomial& lhs, const Polynomial& rhs);

inline constexpr std::size_t kTracePolyMaxPeriod = 64;

// Exact coefficients of tr T_{1->L}(E).
Polynomial trace_poly(const PeriodicPotential& p);

struct GordonRatio {
  // max{|Psi_{-L}|, |Psi_L|, |Psi_{2L}|} / |Psi_0|
  double three_block = 0.0;
  // max{|tr A_L| |Psi_L|, |Psi_{2L}|} / |Psi_0|
  double two_block = 0.0;
};

// values holds V_{-L+1}..V_{2L} (3L entries); Psi_0 = (1, 0).
GordonRatio gordon_ratio(std::span<const double> values, double E, int L, double tol = 1e-12);

}  // namespace qp
