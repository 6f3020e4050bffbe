#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qp/periodic.hpp"
#include "qp/potentials.hpp"
#include "qp/transfer.hpp"

namespace qp {

inline constexpr double kLogRealThreshold = 1e100;

// Real number stored as a plain double while |x| <= 1e100 and as
// (sign, ln|x|) beyond that.
class LogReal {
 public:
  LogReal(double x = 0.0);  // NOLINT: implicit from double is intended
  static LogReal from_log(int sign, double log_abs);
  static LogReal from_trace(const Mat2& m);

  bool is_log() const { return is_log_; }
  int sign() const;
  double log_abs() const;
  // plain value; +-inf when the magnitude exceeds the double range
  double value() const;
  double abs_value() const { return std::abs(value()); }

  friend LogReal operator*(const LogReal& x, const LogReal& y);
  friend LogReal operator+(const LogReal& x, const LogReal& y);
  friend LogReal operator-(const LogReal& x, const LogReal& y);
  LogReal operator-() const;

  // |x| > bound, exact in the log representation
  bool abs_greater(double bound) const;

 private:
  void normalize();

  bool is_log_ = false;
  double value_ = 0.0;  // plain value, or sign (+-1) when is_log_
  double log_abs_ = 0.0;
};

// |x - y| / max(1, |x|, |y|), evaluated without overflow.
double relative_difference(const LogReal& x, const LogReal& y);

struct TraceOrbit {
  // taus[i] = tau_{i-1}: tau_{-1}, tau_0, tau_1, ...
  std::vector<LogReal> taus;
  double invariant = 0.0;
  // first n >= 0 with |tau_{n-1}| > 2 and |tau_n| > 2
  std::optional<int> escape_index;

  const LogReal& tau(int n) const { return taus.at(static_cast<std::size_t>(n + 1)); }
  int last_index() const { return static_cast<int>(taus.size()) - 2; }
};

// tau_{n+2} = tau_{n+1} tau_n - tau_{n-1} from tau_{-1} = 2, tau_0 = E,
// tau_1 = E - lambda.  For the potential V_n = lambda (floor((n+1)a) -
// floor(na)) at the golden mean, tau_n = tr T_{1->F_n} with F_0 = F_1 = 1.
TraceOrbit fibonacci_trace_orbit(double E, double lambda, int n_max);

double fricke_invariant(double t2, double t1, double t0);
// |I(t2, t1, t0) - target| / max(1, max|t|^2), evaluated without overflow
double fricke_deviation(const LogReal& t2, const LogReal& t1, const LogReal& t0, double target);

// First escape index of the Fibonacci orbit within n_max steps, or nullopt.
std::optional<int> fibonacci_escape(double E, double lambda, int n_max);

// Per-letter transfer matrices under iterated substitution: at step n the
// matrix of letter x is T(xi^n(x)), the product over the word in reversed
// order.  traces[n][i] is the trace of alphabet()[i] at step n.  For the
// Fibonacci rule with f(a) = lambda, f(b) = 0 the letter-a trace at step n is
// tau_{n+1} and the letter-b trace is tau_n.
struct LetterOrbit {
  std::string alphabet;
  std::vector<std::vector<LogReal>> traces;
  std::vector<Mat2> final_matrices;

  const LogReal& trace(int step, char letter) const;
};

LetterOrbit letter_matrix_orbit(const SubstitutionRule& rule,
                                const std::map<char, double>& letter_values, double E, int n_max);

// Outer approximation of {E : Fibonacci orbit bounded} in [e_lo, e_hi].
// Dyadic cells are dropped when the interval extension of the orbit over the
// whole cell fires the escape criterion within n_max steps; undecided cells
// are refined down to `depth` and kept.
BandSet bounded_spectrum(double lambda, double e_lo, double e_hi, int depth, int n_max);

namespace serial {
BandSet bounded_spectrum(double lambda, double e_lo, double e_hi, int depth, int n_max);
}

// Thue-Morse: x_n = tr T(xi^n(a)) for the rule a->ab, b->ba.
double thue_morse_identity_residual(const std::map<char, double>& letter_values, double E, int n);

// Simple zeros of x_n inside [e_lo, e_hi] located by sign changes on a grid
// of `samples` points plus bisection.
std::vector<double> thue_morse_zeros(const std::map<char, double>& letter_values, int n,
                                     double e_lo, double e_hi, int samples = 20000);

struct GapClosingResidual {
  double value_residual = 0.0;       // |x_{n+2}(E*) - 2|
  double derivative = 0.0;           // central difference of x_{n+2} - 2 at E*
  double curvature_scale = 0.0;      // |x_{n+1}(E*) - 2| |x_n'(E*)|^2
  double derivative_residual = 0.0;  // |derivative| / max(1, curvature_scale)
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

GapClosingResidual gap_closing_residual(const std::map<char, double>& letter_values,
                                        double E_star, int n,
                                        double h = kFiniteDifferenceStep);

}  // namespace qp
