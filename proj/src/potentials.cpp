#include "qp/potentials.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qp {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

}  // namespace

Alpha Alpha::real(double value) {
  Alpha a;
  a.value_ = value;
  return a;
}

Alpha Alpha::rational(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw DomainError("rational alpha needs a positive denominator");
  std::int64_t g = std::gcd(p, q);
  if (g == 0) g = 1;
  Alpha a;
  a.p_ = p / g;
  a.q_ = q / g;
  a.value_ = static_cast<double>(a.p_) / static_cast<double>(a.q_);
  return a;
}

std::int64_t Alpha::floor_affine(std::int64_t n, double omega) const {
  if (is_rational()) {
    const std::int64_t m = n * p_;
    const std::int64_t whole = floor_div(m, q_);
    const std::int64_t rem = m - whole * q_;
    if (omega == 0.0) return whole;
    return whole + static_cast<std::int64_t>(
                       std::floor(static_cast<double>(rem) / static_cast<double>(q_) + omega));
  }
  return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * value_ + omega));
}

std::int64_t Alpha::ceil_affine(std::int64_t n, double omega) const {
  return -floor_affine(-n, -omega);
}

double Alpha::frac_multiple(std::int64_t n) const {
  if (is_rational()) {
    return static_cast<double>(positive_mod(n * p_, q_)) / static_cast<double>(q_);
  }
  const double x = static_cast<double>(n) * value_;
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}

std::vector<Convergent> convergents(double alpha, std::int64_t q_max) {
  std::vector<Convergent> out;
  if (q_max < 1) return out;
  // h/k recursion with seeds h_{-1}=1, h_{-2}=0, k_{-1}=0, k_{-2}=1
  std::int64_t h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  double x = alpha;
  for (int iter = 0; iter < 80; ++iter) {
    const double a_real = std::floor(x);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    if (k > q_max) break;
    out.push_back({h, k});
    const double residual = x - a_real;
    if (residual < 1e-12) break;
    if (std::abs(alpha - static_cast<double>(h) / static_cast<double>(k)) < 1e-15) break;
    x = 1.0 / residual;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return out;
}

std::vector<Convergent> convergents(const Alpha& alpha, std::int64_t q_max) {
  if (!alpha.is_rational()) return convergents(alpha.value(), q_max);
  std::vector<Convergent> out;
  std::int64_t num = alpha.p(), den = alpha.q();
  std::int64_t h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  while (den != 0) {
    const std::int64_t a = floor_div(num, den);
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    if (k > q_max) break;
    out.push_back({h, k});
    const std::int64_t rem = num - a * den;
    num = den;
    den = rem;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitutions

SubstitutionRule::SubstitutionRule(std::string alphabet, std::vector<std::string> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
  if (alphabet_.empty()) throw DomainError("substitution alphabet is empty");
  if (images_.size() != alphabet_.size())
    throw DomainError("substitution needs exactly one image per letter");
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (alphabet_.find(alphabet_[i], i + 1) != std::string::npos)
      throw DomainError(std::string("duplicate letter in alphabet: ") + alphabet_[i]);
  }
  for (const auto& img : images_) {
    if (img.empty()) throw DomainError("substitution image must be nonempty");
    for (char c : img) {
      if (alphabet_.find(c) == std::string::npos)
        throw DomainError(std::string("image letter not in alphabet: ") + c);
    }
  }
}

SubstitutionRule SubstitutionRule::parse(std::string_view text) {
  std::string alphabet;
  std::vector<std::string> images;
  std::string cleaned;
  for (char c : text) cleaned.push_back((c == ',' || c == ';') ? ' ' : c);
  // glue "a -> ab" into one token
  for (auto pos = cleaned.find("->"); pos != std::string::npos; pos = cleaned.find("->", pos + 2)) {
    while (pos > 0 && std::isspace(static_cast<unsigned char>(cleaned[pos - 1]))) cleaned.erase(--pos, 1);
    while (pos + 2 < cleaned.size() && std::isspace(static_cast<unsigned char>(cleaned[pos + 2])))
      cleaned.erase(pos + 2, 1);
  }
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) {
    const auto arrow = tok.find("->");
    if (arrow != 1 || tok.size() < 4)
      throw DomainError("cannot parse substitution entry '" + tok + "' (expected x->word)");
    alphabet.push_back(tok[0]);
    images.push_back(tok.substr(3));
  }
  return SubstitutionRule(alphabet, images);
}

SubstitutionRule SubstitutionRule::fibonacci() { return SubstitutionRule("ab", {"ab", "a"}); }
SubstitutionRule SubstitutionRule::thue_morse() { return SubstitutionRule("ab", {"ab", "ba"}); }
SubstitutionRule SubstitutionRule::period_doubling() { return SubstitutionRule("ab", {"ab", "aa"}); }

std::size_t SubstitutionRule::index_of(char letter) const {
  const auto pos = alphabet_.find(letter);
  if (pos == std::string::npos) throw DomainError(std::string("letter not in alphabet: ") + letter);
  return pos;
}

bool SubstitutionRule::contains(char letter) const {
  return alphabet_.find(letter) != std::string::npos;
}

const std::string& SubstitutionRule::image(char letter) const { return images_[index_of(letter)]; }

std::string SubstitutionRule::apply(std::string_view word) const {
  std::string out;
  for (char c : word) out += image(c);
  return out;
}

std::string SubstitutionRule::iterate(char letter, int power) const {
  std::string w(1, letter);
  index_of(letter);
  for (int i = 0; i < power; ++i) w = apply(w);
  return w;
}

SubstitutionRule SubstitutionRule::power(int n) const {
  if (n < 1) throw DomainError("substitution power must be >= 1");
  std::vector<std::string> imgs;
  for (char c : alphabet_) imgs.push_back(iterate(c, n));
  return SubstitutionRule(alphabet_, imgs);
}

std::vector<std::vector<std::int64_t>> SubstitutionRule::matrix() const {
  const std::size_t r = alphabet_.size();
  std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t j = 0; j < r; ++j) {
    for (char c : images_[j]) ++m[index_of(c)][j];
  }
  return m;
}

bool SubstitutionRule::is_primitive() const {
  const std::size_t r = alphabet_.size();
  const auto m = matrix();
  std::vector<std::vector<bool>> pos(r, std::vector<bool>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) pos[i][j] = m[i][j] > 0;
  auto current = pos;
  // Wielandt: a primitive r x r matrix has a positive power <= (r-1)^2 + 1
  const std::size_t bound = (r - 1) * (r - 1) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    bool all = true;
    for (std::size_t i = 0; i < r && all; ++i)
      for (std::size_t j = 0; j < r && all; ++j) all = current[i][j];
    if (all) return true;
    std::vector<std::vector<bool>> next(r, std::vector<bool>(r, false));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t l = 0; l < r; ++l)
        if (current[i][l])
          for (std::size_t j = 0; j < r; ++j)
            if (pos[l][j]) next[i][j] = true;
    current = std::move(next);
  }
  return false;
}

std::string SubstitutionRule::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (i) out += ", ";
    out += alphabet_[i];
    out += "->";
    out += images_[i];
  }
  return out;
}

std::string generate_substitution_word(const SubstitutionRule& rule, char seed,
                                       std::size_t min_length) {
  const std::string& img = rule.image(seed);
  if (img.front() != seed)
    throw DomainError(std::string("image of '") + seed + "' does not begin with '" + seed + "'");
  if (!rule.is_primitive()) throw DomainError("substitution is not primitive");
  std::string w(1, seed);
  while (w.size() < std::max<std::size_t>(min_length, 1)) {
    std::string next = rule.apply(w);
    if (next.size() == w.size()) break;  // seed -> seed alone
    w = std::move(next);
  }
  if (w.size() < min_length)
    throw DomainError("substitution does not grow from the seed letter");
  w.resize(std::max<std::size_t>(min_length, 1));
  return w;
}

namespace {

bool is_legal_word(const SubstitutionRule& rule, std::string_view word) {
  constexpr std::size_t kSearchLength = 4096;
  for (char c : rule.alphabet()) {
    std::string w(1, c);
    for (int k = 0; k < 64 && w.size() < kSearchLength; ++k) w = rule.apply(w);
    if (w.find(word) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TwoSidedChoice two_sided_choice(const SubstitutionRule& rule) {
  if (!rule.is_primitive()) throw DomainError("substitution is not primitive");
  for (int n = 1; n <= kTwoSidedPowerCap; ++n) {
    const SubstitutionRule eta = rule.power(n);
    for (char left : rule.alphabet()) {
      if (eta.image(left).back() != left) continue;
      for (char right : rule.alphabet()) {
        if (eta.image(right).front() != right) continue;
        if (!is_legal_word(rule, std::string{left, right})) continue;
        return {left, right, n};
      }
    }
  }
  throw DomainError("no two-sided fixed point found for powers <= 6");
}

IndexedWord generate_two_sided(const SubstitutionRule& rule, std::int64_t from, std::int64_t to) {
  IndexedWord out;
  out.first = from;
  if (to < from) return out;
  const TwoSidedChoice choice = two_sided_choice(rule);
  const SubstitutionRule eta = rule.power(choice.power);

  const std::size_t need_left = from <= 0 ? static_cast<std::size_t>(-from + 1) : 0;
  const std::size_t need_right = to >= 1 ? static_cast<std::size_t>(to) : 0;

  std::string u(1, choice.left);
  while (u.size() < need_left) u = eta.apply(u);
  std::string v(1, choice.right);
  while (v.size() < need_right) v = eta.apply(v);

  out.letters.reserve(static_cast<std::size_t>(to - from + 1));
  for (std::int64_t n = from; n <= to; ++n) {
    if (n <= 0) {
      out.letters.push_back(u[u.size() - 1 - static_cast<std::size_t>(-n)]);
    } else {
      out.letters.push_back(v[static_cast<std::size_t>(n - 1)]);
    }
  }
  return out;
}

std::map<char, double> letter_frequencies(const SubstitutionRule& rule) {
  if (!rule.is_primitive()) throw DomainError("substitution is not primitive");
  const auto m = rule.matrix();
  const std::size_t r = m.size();
  std::vector<double> x(r, 1.0 / static_cast<double>(r));
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> y(r, 0.0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) y[i] += static_cast<double>(m[i][j]) * x[j];
    // averaging with the previous iterate damps eigenvalues on the unit
    // circle other than the Perron root (e.g. -1 for period doubling)
    const double total = std::accumulate(y.begin(), y.end(), 0.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      y[i] = 0.5 * (y[i] / total + x[i]);
      diff = std::max(diff, std::abs(y[i] - x[i]));
    }
    x = std::move(y);
    if (diff < 1e-16) break;
  }
  std::map<char, double> out;
  for (std::size_t i = 0; i < r; ++i) out[rule.alphabet()[i]] = x[i];
  return out;
}

// ---------------------------------------------------------------------------
// Potential specs

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::AlmostMathieu: return "almost-mathieu";
    case PotentialKind::Sturmian: return "sturmian";
    case PotentialKind::Circle: return "circle";
    case PotentialKind::Substitution: return "substitution";
    case PotentialKind::ExplicitPeriodic: return "periodic";
    case PotentialKind::Constant: return "constant";
  }
  return "unknown";
}

PotentialSpec PotentialSpec::constant(double v) {
  PotentialSpec s;
  s.kind = PotentialKind::Constant;
  s.values = {v};
  return s;
}

PotentialSpec PotentialSpec::almost_mathieu(Alpha alpha, double lambda, double omega) {
  PotentialSpec s;
  s.kind = PotentialKind::AlmostMathieu;
  s.alpha = alpha;
  s.lambda = lambda;
  s.omega = omega;
  return s;
}

PotentialSpec PotentialSpec::sturmian(Alpha alpha, double lambda, double omega, Rounding rounding) {
  PotentialSpec s;
  s.kind = PotentialKind::Sturmian;
  s.alpha = alpha;
  s.lambda = lambda;
  s.omega = omega;
  s.rounding = rounding;
  return s;
}

PotentialSpec PotentialSpec::circle(Alpha alpha, double lambda, double omega,
                                    std::vector<std::pair<double, double>> set) {
  PotentialSpec s;
  s.kind = PotentialKind::Circle;
  s.alpha = alpha;
  s.lambda = lambda;
  s.omega = omega;
  s.circle_set = std::move(set);
  return s;
}

PotentialSpec PotentialSpec::substitution(SubstitutionRule rule,
                                          std::map<char, double> letter_values, char seed) {
  PotentialSpec s;
  s.kind = PotentialKind::Substitution;
  s.rule = std::move(rule);
  s.letter_values = std::move(letter_values);
  s.seed = seed;
  return s;
}

PotentialSpec PotentialSpec::explicit_periodic(std::vector<double> values) {
  PotentialSpec s;
  s.kind = PotentialKind::ExplicitPeriodic;
  s.values = std::move(values);
  return s;
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::AlmostMathieu:
    case PotentialKind::Sturmian:
    case PotentialKind::Circle:
      if (!(alpha.value() > 0.0 && alpha.value() < 1.0))
        throw DomainError("alpha must lie in (0, 1)");
      if (lambda == 0.0) throw DomainError("lambda must be nonzero");
      for (const auto& [lo, hi] : circle_set) {
        if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
          throw DomainError("circle set intervals must be [lo, hi) within [0, 1)");
      }
      break;
    case PotentialKind::Substitution: {
      if (!rule) throw DomainError("substitution potential needs a rule");
      for (char c : rule->alphabet()) {
        if (!letter_values.count(c))
          throw DomainError(std::string("no value assigned to letter ") + c);
      }
      if (seed != 0 && !rule->contains(seed)) throw DomainError("seed letter not in alphabet");
      break;
    }
    case PotentialKind::ExplicitPeriodic:
    case PotentialKind::Constant:
      if (values.empty()) throw DomainError("periodic potential needs at least one value");
      break;
  }
}

char PotentialSpec::seed_letter() const {
  if (seed != 0) return seed;
  if (!rule) throw DomainError("substitution potential needs a rule");
  return rule->alphabet().front();
}

namespace {

double circle_indicator(const PotentialSpec& spec, const Alpha& alpha, std::int64_t n) {
  double x = alpha.frac_multiple(n) + spec.omega;
  x -= std::floor(x);
  if (x >= 1.0) x = 0.0;
  if (spec.circle_set.empty()) return x < alpha.value() ? 1.0 : 0.0;
  for (const auto& [lo, hi] : spec.circle_set) {
    if (x >= lo && x < hi) return 1.0;
  }
  return 0.0;
}

std::vector<double> sample_with_alpha(const PotentialSpec& spec, const Alpha& alpha,
                                      std::int64_t from, std::int64_t to) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (std::int64_t n = from; n <= to; ++n) {
    switch (spec.kind) {
      case PotentialKind::AlmostMathieu: {
        double x = alpha.frac_multiple(n) + spec.omega;
        x -= std::floor(x);
        out.push_back(spec.lambda * std::cos(2.0 * std::numbers::pi * x));
        break;
      }
      case PotentialKind::Sturmian: {
        const std::int64_t jump =
            spec.rounding == Rounding::Floor
                ? alpha.floor_affine(n + 1, spec.omega) - alpha.floor_affine(n, spec.omega)
                : alpha.ceil_affine(n + 1, spec.omega) - alpha.ceil_affine(n, spec.omega);
        out.push_back(spec.lambda * static_cast<double>(jump));
        break;
      }
      case PotentialKind::Circle:
        out.push_back(spec.lambda * circle_indicator(spec, alpha, n));
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace

std::vector<double> sample_potential(const PotentialSpec& spec, std::int64_t from, std::int64_t to) {
  spec.validate();
  if (to < from) return {};
  switch (spec.kind) {
    case PotentialKind::AlmostMathieu:
    case PotentialKind::Sturmian:
    case PotentialKind::Circle:
      return sample_with_alpha(spec, spec.alpha, from, to);
    case PotentialKind::Substitution: {
      const IndexedWord w = generate_two_sided(*spec.rule, from, to);
      std::vector<double> out;
      out.reserve(w.letters.size());
      for (char c : w.letters) out.push_back(spec.letter_values.at(c));
      return out;
    }
    case PotentialKind::ExplicitPeriodic: {
      const auto L = static_cast<std::int64_t>(spec.values.size());
      std::vector<double> out;
      out.reserve(static_cast<std::size_t>(to - from + 1));
      for (std::int64_t n = from; n <= to; ++n)
        out.push_back(spec.values[static_cast<std::size_t>(positive_mod(n - 1, L))]);
      return out;
    }
    case PotentialKind::Constant:
      return std::vector<double>(static_cast<std::size_t>(to - from + 1), spec.values.front());
  }
  return {};
}

namespace {

PeriodicPotential substitution_approximant(const PotentialSpec& spec, int order) {
  const std::string w = spec.rule->iterate(spec.seed_letter(), order);
  PeriodicPotential p;
  p.values.reserve(w.size());
  for (char c : w) p.values.push_back(spec.letter_values.at(c));
  return p;
}

PeriodicPotential alpha_approximant(const PotentialSpec& spec, const Convergent& c) {
  PeriodicPotential p;
  p.values = sample_with_alpha(spec, Alpha::rational(c.p, c.q), 1, c.q);
  return p;
}

constexpr std::int64_t kConvergentQCap = std::int64_t{1} << 40;

}  // namespace

PeriodicPotential periodic_approximant(const PotentialSpec& spec, int order) {
  spec.validate();
  if (order < 1) throw DomainError("approximant order must be >= 1");
  switch (spec.kind) {
    case PotentialKind::Constant:
      return {{spec.values.front()}};
    case PotentialKind::ExplicitPeriodic:
      return {spec.values};
    case PotentialKind::Substitution:
      return substitution_approximant(spec, order);
    default:
      break;
  }
  const auto cs = convergents(spec.alpha, kConvergentQCap);
  if (static_cast<std::size_t>(order) > cs.size())
    throw DomainError("approximant order " + std::to_string(order) + " exceeds the " +
                      std::to_string(cs.size()) + " available convergents");
  return alpha_approximant(spec, cs[static_cast<std::size_t>(order - 1)]);
}

PeriodicPotential periodic_approximant_q(const PotentialSpec& spec, std::int64_t q) {
  spec.validate();
  if (q < 1) throw DomainError("approximant period must be >= 1");
  if (spec.kind == PotentialKind::Constant || spec.kind == PotentialKind::ExplicitPeriodic)
    return periodic_approximant(spec, 1);
  if (spec.kind == PotentialKind::Substitution) {
    const char seed = spec.seed_letter();
    std::string w(1, seed);
    for (int k = 0; k < 64; ++k) {
      if (static_cast<std::int64_t>(w.size()) == q) return substitution_approximant(spec, k);
      if (static_cast<std::int64_t>(w.size()) > q) break;
      w = spec.rule->apply(w);
    }
    throw DomainError("no substitution iterate has length " + std::to_string(q));
  }
  for (const auto& c : convergents(spec.alpha, q)) {
    if (c.q == q) return alpha_approximant(spec, c);
  }
  throw DomainError(std::to_string(q) + " is not a convergent denominator of alpha");
}

}  // namespace qp
