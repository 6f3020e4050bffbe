#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qp/common.hpp"

namespace qp {

inline const double kGoldenMean = (std::sqrt(5.0) - 1.0) / 2.0;

// Frequency parameter of circle-type potentials.  Rational values are kept
// exact so that periodic approximants use integer floor arithmetic.
class Alpha {
 public:
  Alpha() = default;
  static Alpha real(double value);
  static Alpha rational(std::int64_t p, std::int64_t q);

  bool is_rational() const { return q_ != 0; }
  double value() const { return value_; }
  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }

  // floor(n * alpha + omega), exact in n when alpha is rational
  std::int64_t floor_affine(std::int64_t n, double omega) const;
  std::int64_t ceil_affine(std::int64_t n, double omega) const;
  // fractional part of n * alpha in [0, 1)
  double frac_multiple(std::int64_t n) const;

 private:
  double value_ = 0.0;
  std::int64_t p_ = 0;
  std::int64_t q_ = 0;
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
  bool operator==(const Convergent&) const = default;
};

// Continued-fraction convergents p/q with q <= q_max in increasing q.
// Expansion stops once the residual drops below 1e-12.
std::vector<Convergent> convergents(double alpha, std::int64_t q_max);
std::vector<Convergent> convergents(const Alpha& alpha, std::int64_t q_max);

class SubstitutionRule {
 public:
  SubstitutionRule() = default;
  // images[i] is the image of alphabet[i]
  SubstitutionRule(std::string alphabet, std::vector<std::string> images);

  // "a->ab, b->a" (whitespace and ';' separators also accepted)
  static SubstitutionRule parse(std::string_view text);
  static SubstitutionRule fibonacci();
  static SubstitutionRule thue_morse();
  static SubstitutionRule period_doubling();

  const std::string& alphabet() const { return alphabet_; }
  const std::string& image(char letter) const;
  std::size_t index_of(char letter) const;
  bool contains(char letter) const;

  std::string apply(std::string_view word) const;
  std::string iterate(char letter, int power) const;
  SubstitutionRule power(int n) const;

  // M[i][j] = number of occurrences of alphabet[i] in image(alphabet[j])
  std::vector<std::vector<std::int64_t>> matrix() const;
  bool is_primitive() const;

  std::string to_string() const;
  bool operator==(const SubstitutionRule&) const = default;

 private:
  std::string alphabet_;
  std::vector<std::string> images_;
};

// Prefix of the right fixed point xi^inf(seed) of length >= min_length.
std::string generate_substitution_word(const SubstitutionRule& rule, char seed,
                                       std::size_t min_length);

// Two-sided fixed point u.v of some power eta = xi^n: u = eta^inf(left)
// occupies n <= 0 and v = eta^inf(right) occupies n >= 1.
struct TwoSidedChoice {
  char left = 0;
  char right = 0;
  int power = 0;
};

inline constexpr int kTwoSidedPowerCap = 6;

// Smallest n, then lexicographically first (left, right), such that
// eta(left) ends in left, eta(right) starts with right and the junction
// word left+right occurs in the language of the substitution.
TwoSidedChoice two_sided_choice(const SubstitutionRule& rule);

struct IndexedWord {
  std::int64_t first = 1;  // index of letters[0]
  std::string letters;

  bool empty() const { return letters.empty(); }
  std::int64_t last() const { return first + static_cast<std::int64_t>(letters.size()) - 1; }
  char at(std::int64_t n) const { return letters.at(static_cast<std::size_t>(n - first)); }
};

// Letters at indices from..to of the two-sided fixed point; empty when to < from.
IndexedWord generate_two_sided(const SubstitutionRule& rule, std::int64_t from, std::int64_t to);

// Perron-Frobenius letter frequencies, positive and summing to one.
std::map<char, double> letter_frequencies(const SubstitutionRule& rule);

enum class PotentialKind { AlmostMathieu, Sturmian, Circle, Substitution, ExplicitPeriodic, Constant };
enum class Rounding { Floor, Ceil };

std::string_view to_string(PotentialKind kind);

// Declarative potential family.  Conventions for V_n:
//   AlmostMathieu    lambda * cos 2pi(n alpha + omega)
//   Sturmian         lambda * (R((n+1) alpha + omega) - R(n alpha + omega)),
//                    R = floor or ceil; at omega = 0 this is the Fibonacci
//                    word abaab... for the golden mean
//   Circle           lambda * 1_A(frac(n alpha + omega)), A a union of
//                    half-open intervals [lo, hi), default [0, alpha)
//   Substitution     f(w_n) on the two-sided fixed point w
//   ExplicitPeriodic values[(n - 1) mod L]
//   Constant         values[0]
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Constant;
  Alpha alpha;
  double omega = 0.0;
  double lambda = 1.0;
  std::optional<SubstitutionRule> rule;
  std::map<char, double> letter_values;
  char seed = 0;  // 0: first alphabet letter
  std::vector<double> values;
  Rounding rounding = Rounding::Floor;
  std::vector<std::pair<double, double>> circle_set;

  static PotentialSpec constant(double v);
  static PotentialSpec almost_mathieu(Alpha alpha, double lambda, double omega = 0.0);
  static PotentialSpec sturmian(Alpha alpha, double lambda, double omega = 0.0,
                                Rounding rounding = Rounding::Floor);
  static PotentialSpec circle(Alpha alpha, double lambda, double omega,
                              std::vector<std::pair<double, double>> set = {});
  static PotentialSpec substitution(SubstitutionRule rule, std::map<char, double> letter_values,
                                    char seed = 0);
  static PotentialSpec explicit_periodic(std::vector<double> values);

  void validate() const;
  char seed_letter() const;
};

struct PeriodicPotential {
  std::vector<double> values;
  std::size_t period() const { return values.size(); }
};

std::vector<double> sample_potential(const PotentialSpec& spec, std::int64_t from, std::int64_t to);

// order >= 1 indexes the convergent list (1-based) for alpha kinds and the
// substitution power for Substitution kind.
PeriodicPotential periodic_approximant(const PotentialSpec& spec, int order);
// Approximant whose period is the convergent denominator q.
PeriodicPotential periodic_approximant_q(const PotentialSpec& spec, std::int64_t q);

}  // namespace qp
