#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qp/potentials.hpp"

using namespace qp;

namespace {

std::vector<double> fib_values(std::int64_t from, std::int64_t to) {
  return sample_potential(PotentialSpec::sturmian(Alpha::real(kGoldenMean), 1.0), from, to);
}

}  // namespace

TEST_CASE("fixed point prefixes") {
  const auto fib = SubstitutionRule::fibonacci();
  CHECK(generate_substitution_word(fib, 'a', 5).substr(0, 5) == "abaab");
  CHECK(generate_substitution_word(fib, 'a', 8).substr(0, 8) == "abaababa");
  CHECK(generate_substitution_word(fib, 'a', 100).size() >= 100);
  CHECK_THROWS_AS(generate_substitution_word(fib, 'b', 3), DomainError);
}

TEST_CASE("rule parsing and matrix") {
  const auto r = SubstitutionRule::parse("a->ab; b->a");
  CHECK(r == SubstitutionRule::fibonacci());
  CHECK(SubstitutionRule::parse("a -> ab , b -> ba") == SubstitutionRule::thue_morse());
  const auto m = SubstitutionRule::period_doubling().matrix();
  // a->ab, b->aa
  CHECK(m[0][0] == 1);
  CHECK(m[1][0] == 1);
  CHECK(m[0][1] == 2);
  CHECK(m[1][1] == 0);
  CHECK(SubstitutionRule::thue_morse().is_primitive());
  CHECK_FALSE(SubstitutionRule::parse("a->aa, b->ab").is_primitive());
  CHECK(r.power(3).image('a') == "abaab");
}

TEST_CASE("two-sided words") {
  SUBCASE("thue-morse window is invariant under the chosen power") {
    const auto tm = SubstitutionRule::thue_morse();
    const TwoSidedChoice ch = two_sided_choice(tm);
    const auto eta = tm.power(ch.power);
    const IndexedWord w = generate_two_sided(tm, -40, 40);
    CHECK(w.first == -40);
    CHECK(w.last() == 40);
    CHECK(w.at(0) == ch.left);
    CHECK(w.at(1) == ch.right);
    // eta maps the letters at 1..m onto the prefix at 1..L*m and the letters
    // at -m+1..0 onto the suffix ending at 0
    const std::string right = eta.apply(w.letters.substr(41, 10));
    const IndexedWord wide = generate_two_sided(tm, -200, 200);
    for (std::size_t i = 0; i < right.size(); ++i)
      CHECK(wide.at(1 + static_cast<std::int64_t>(i)) == right[i]);
    const std::string left = eta.apply(w.letters.substr(31, 10));
    for (std::size_t i = 0; i < left.size(); ++i)
      CHECK(wide.at(-static_cast<std::int64_t>(left.size()) + 1 + static_cast<std::int64_t>(i)) ==
            left[i]);
  }
  SUBCASE("period doubling right half") {
    const IndexedWord w = generate_two_sided(SubstitutionRule::period_doubling(), 1, 8);
    CHECK(w.letters == "abaaabab");
  }
  SUBCASE("empty window") {
    CHECK(generate_two_sided(SubstitutionRule::fibonacci(), 5, 4).empty());
  }
}

TEST_CASE("sample potential examples") {
  CHECK(fib_values(1, 5) == std::vector<double>{1, 0, 1, 1, 0});
  const auto am = sample_potential(PotentialSpec::almost_mathieu(Alpha::rational(1, 2), 2.0), 1, 4);
  REQUIRE(am.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(am[i] == doctest::Approx(i % 2 == 0 ? -2.0 : 2.0));
  for (double v : sample_potential(PotentialSpec::constant(0.0), -7, 7)) CHECK(v == 0.0);
}

TEST_CASE("sturmian values lie in {0, lambda}") {
  const auto v = sample_potential(PotentialSpec::sturmian(Alpha::real(0.3819), 2.5, 0.37), -500, 500);
  for (double x : v) CHECK((x == 0.0 || x == 2.5));
  const auto c =
      sample_potential(PotentialSpec::sturmian(Alpha::real(0.3819), 1.0, 0.37, Rounding::Ceil), 1, 50);
  for (double x : c) CHECK((x == 0.0 || x == 1.0));
}

TEST_CASE("floor formula matches the fibonacci fixed point") {
  const std::size_t n = 10000;
  const std::string w = generate_substitution_word(SubstitutionRule::fibonacci(), 'a', n);
  const auto v = fib_values(1, static_cast<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) REQUIRE(v[i] == (w[i] == 'a' ? 1.0 : 0.0));
}

TEST_CASE("almost periods") {
  const auto v = fib_values(1, 2000);
  std::int64_t f_prev = 1, f = 2;  // F_1 = 1, F_2 = 2
  for (int n = 3; n <= 15; ++n) {
    const std::int64_t next = f + f_prev;
    f_prev = f;
    f = next;
    if (2 * f > 2000) break;
    for (std::int64_t l = 1; l <= f; ++l)
      REQUIRE(v[static_cast<std::size_t>(l + f - 1)] == v[static_cast<std::size_t>(l - 1)]);
  }
}

TEST_CASE("convergents") {
  const std::vector<Convergent> golden{{0, 1}, {1, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 8}};
  CHECK(convergents(kGoldenMean, 8) == golden);
  const auto third = convergents(Alpha::rational(1, 3), 10);
  CHECK(third.back() == Convergent{1, 3});
  CHECK(convergents(1.0 / 3.0, 10).back() == Convergent{1, 3});
  CHECK(convergents(0.5, 1) == std::vector<Convergent>{{0, 1}});
  for (const auto& c : convergents(std::sqrt(2.0) - 1.0, 100000)) CHECK(std::gcd(c.p, c.q) == 1);
}

TEST_CASE("periodic approximants") {
  const auto fib = PotentialSpec::sturmian(Alpha::real(kGoldenMean), 1.0);
  CHECK(periodic_approximant_q(fib, 5).values == std::vector<double>{1, 0, 1, 1, 0});
  const auto sub = PotentialSpec::substitution(SubstitutionRule::fibonacci(), {{'a', 1.0}, {'b', 0.0}});
  CHECK(periodic_approximant(sub, 3).values == std::vector<double>{1, 0, 1, 1, 0});
  CHECK(periodic_approximant(PotentialSpec::constant(0.25), 4).values == std::vector<double>{0.25});
  CHECK_THROWS_AS(periodic_approximant(PotentialSpec::sturmian(Alpha::rational(2, 5), 1.0), 10),
                  DomainError);
  CHECK_THROWS_AS(periodic_approximant_q(fib, 7), DomainError);
}

TEST_CASE("approximants converge on a fixed window") {
  const auto fib = PotentialSpec::sturmian(Alpha::real(kGoldenMean), 1.0);
  const auto target = fib_values(1, 30);
  for (std::int64_t q : {34, 55, 89, 144, 233}) {
    const auto p = periodic_approximant_q(fib, q).values;
    for (std::size_t i = 0; i < target.size(); ++i) CHECK(p[i] == target[i]);
  }
}

TEST_CASE("letter frequencies") {
  const auto f = letter_frequencies(SubstitutionRule::fibonacci());
  CHECK(f.at('a') == doctest::Approx(kGoldenMean).epsilon(1e-12));
  CHECK(f.at('b') == doctest::Approx(1.0 - kGoldenMean).epsilon(1e-12));
  const auto tm = letter_frequencies(SubstitutionRule::thue_morse());
  CHECK(tm.at('a') == doctest::Approx(0.5));
  const auto pd = letter_frequencies(SubstitutionRule::period_doubling());
  CHECK(pd.at('a') == doctest::Approx(2.0 / 3.0));
  CHECK(pd.at('b') == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(letter_frequencies(SubstitutionRule::parse("a->aa, b->ab")), DomainError);

  for (const auto& rule : {SubstitutionRule::fibonacci(), SubstitutionRule::thue_morse(),
                           SubstitutionRule::period_doubling(),
                           SubstitutionRule::parse("a->abc, b->ac, c->b")}) {
    const auto x = letter_frequencies(rule);
    const auto y = letter_frequencies(rule.power(2));
    double sum = 0.0;
    for (const auto& [letter, p] : x) {
      sum += p;
      CHECK(p > 0.0);
      CHECK(std::abs(p - y.at(letter)) <= 1e-10);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(PotentialSpec::almost_mathieu(Alpha::real(0.3), 0.0).validate(), DomainError);
  CHECK_THROWS_AS(PotentialSpec::explicit_periodic({}).validate(), DomainError);
  CHECK(sample_potential(PotentialSpec::constant(1.0), 3, 1).empty());
}
