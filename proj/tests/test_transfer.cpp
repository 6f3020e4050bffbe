#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qp/transfer.hpp"

using namespace qp;

namespace {

Mat2 plain(double a, double b, double c, double d) { return Mat2{a, b, c, d, 0.0}; }

// entries of the true matrix
std::array<double, 4> entries(const Mat2& m) {
  const double s = std::exp(m.log_scale);
  return {s * m.a, s * m.b, s * m.c, s * m.d};
}

const double kFreeGammaAt3 = std::log((3.0 + std::sqrt(5.0)) / 2.0);

}  // namespace

TEST_CASE("step matrix") {
  const auto z = entries(step_matrix(0.0, 0.0));
  CHECK(z == std::array<double, 4>{0.0, -1.0, 1.0, 0.0});
  const auto m = entries(step_matrix(3.0, 1.0));
  CHECK(m == std::array<double, 4>{2.0, -1.0, 1.0, 0.0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) CHECK(step_matrix(u(rng), u(rng)).det() == doctest::Approx(1.0));
}

TEST_CASE("propagate examples") {
  const Mat2 m = propagate(0.0, std::vector<double>{0.0, 0.0});
  const auto e = entries(m);
  CHECK(e[0] == doctest::Approx(-1.0));
  CHECK(std::abs(e[1]) < 1e-15);
  CHECK(std::abs(e[2]) < 1e-15);
  CHECK(e[3] == doctest::Approx(-1.0));
  CHECK(classify(m) == MatClass::MinusIdentity);

  const auto one = entries(propagate(1.7, std::vector<double>{0.4}));
  const auto ref = entries(step_matrix(1.7, 0.4));
  for (int i = 0; i < 4; ++i) CHECK(one[i] == doctest::Approx(ref[i]));

  const Mat2 big = propagate(3.0, std::vector<double>(500, 0.0));
  CHECK(std::abs(big.log_norm() / 500.0 - kFreeGammaAt3) < 1e-3);
}

TEST_CASE("classification") {
  CHECK(classify(step_matrix(0.0, 0.0)) == MatClass::Elliptic);
  CHECK(classify(step_matrix(2.0, 0.0)) == MatClass::Parabolic);
  CHECK(classify(step_matrix(5.0, 0.0)) == MatClass::Hyperbolic);
  CHECK(classify(step_matrix(-5.0, 0.0)) == MatClass::Hyperbolic);
  CHECK(classify(Mat2::identity()) == MatClass::PlusIdentity);
  CHECK(classify(plain(-1.0, 1e-12, 0.0, -1.0)) == MatClass::MinusIdentity);
  CHECK(classify(plain(1.0, 1e-6, 0.0, 1.0)) == MatClass::Parabolic);
  CHECK(to_string(MatClass::Hyperbolic) == "hyperbolic");
}

// |det - 1| of the true product.  ad - bc cancels to about eps ||M||^2,
// so long products are only measurable while the growth stays moderate.
double det_error(const Mat2& m) {
  const double nd = m.a * m.d - m.b * m.c;
  return std::abs(std::expm1(std::log(std::abs(nd)) + 2.0 * m.log_scale));
}

TEST_CASE("rescaling keeps products unimodular") {
  std::mt19937_64 rng(11);
  SUBCASE("weak disorder, 1e5 steps") {
    std::uniform_real_distribution<double> v(-0.01, 0.01);
    for (double E : {0.0, 0.9, -1.4}) {
      std::vector<double> values(100000);
      for (double& x : values) x = v(rng);
      CHECK(det_error(propagate(E, values)) <= 1e-9);
    }
  }
  SUBCASE("strong disorder, error at the cancellation floor") {
    std::uniform_real_distribution<double> v(-3.0, 3.0);
    for (int L : {10, 100, 1000, 100000}) {
      std::vector<double> values(static_cast<std::size_t>(L));
      for (double& x : values) x = v(rng);
      const Mat2 m = propagate(v(rng), values);
      if (m.log_trace_norm_sq() < 60.0) {
        const double floor =
            64.0 * std::numeric_limits<double>::epsilon() * std::exp(m.log_trace_norm_sq());
        CHECK(det_error(m) <= std::max(1e-9, floor));
      }
      const double mx = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
      CHECK(mx >= 0.5);
      CHECK(mx <= 2.0);
      CHECK(m.log_norm() >= -1e-12);
      CHECK(m.log_trace_norm_sq() >= std::log(2.0) - 1e-9);
    }
  }
}

TEST_CASE("wronskian is constant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-0.1, 0.1);
  const double E = 0.3;
  // psi^1: psi_0 = 0, psi_1 = 1; psi^2: psi_0 = 1, psi_1 = 0
  StateVec p1{1.0, 0.0, 0.0};
  StateVec p2{0.0, 1.0, 0.0};
  double worst = 0.0;
  for (int n = 1; n <= 10000; ++n) {
    const Mat2 t = step_matrix(E, v(rng));
    p1 = t * p1;
    p2 = t * p2;
    const double w = (p1.psi_next * p2.psi - p1.psi * p2.psi_next) *
                     std::exp(p1.log_scale + p2.log_scale);
    worst = std::max(worst, std::abs(w - 1.0));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("elliptic and hyperbolic powers") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    // [[a, b], [c, d]] with ad - bc = 1 and trace a + d
    const double a = u(rng);
    const double b = u(rng) + (u(rng) > 0 ? 2.5 : -2.5);
    const double d = u(rng);
    const Mat2 A = plain(a, b, (a * d - 1.0) / b, d);
    const bool bounded = std::abs(a + d) <= 2.0;
    Mat2 p = A;
    for (int k = 1; k <= 64; ++k) {
      if (bounded) {
        CHECK(std::abs(p.trace()) <= 2.0 + 1e-9);
      } else {
        CHECK(std::abs(p.trace()) > 2.0);
      }
      p = p * A;
    }
  }
}

TEST_CASE("norms") {
  const Mat2 m = plain(2.0, 1.0, 1.0, 1.0);
  // singular values of [[2,1],[1,1]]: (3 +- sqrt 5)/2
  CHECK(m.norm() == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0));
  CHECK(m.trace_norm_sq() == doctest::Approx(7.0));
  CHECK(step_matrix(0.0, 0.0).norm() == doctest::Approx(1.0));
  const Mat2 inv = m * m.inverse();
  CHECK(entries(inv)[0] == doctest::Approx(1.0));
  CHECK(std::abs(entries(inv)[1]) < 1e-15);
}

TEST_CASE("lyapunov estimates") {
  CHECK(std::abs(lyapunov_estimate(PotentialSpec::constant(0.0), 3.0, 10000) - kFreeGammaAt3) <= 1e-2);
  CHECK(lyapunov_estimate(PotentialSpec::constant(0.0), 0.0, 10000) <= 1e-3);
  CHECK(std::abs(lyapunov_estimate(PotentialSpec::constant(5.0), 8.0, 10000) - kFreeGammaAt3) <= 1e-2);
  const auto fib = PotentialSpec::sturmian(Alpha::real(kGoldenMean), 1.0);
  for (double E : {-2.0, 0.0, 0.5, 3.1}) CHECK(lyapunov_estimate(fib, E, 3000) >= 0.0);
}

TEST_CASE("trace polynomials") {
  const Polynomial p1 = trace_poly({{0.0}});
  REQUIRE(p1.coeffs.size() == 2);
  CHECK(p1.coeffs[0] == 0.0);
  CHECK(p1.coeffs[1] == 1.0);
  const Polynomial p2 = trace_poly({{0.0, 2.0}});
  CHECK(p2.coeffs == std::vector<double>{-2.0, -2.0, 1.0});
  CHECK_THROWS_AS(trace_poly({std::vector<double>(65, 0.0)}), DomainError);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  for (int L : {1, 3, 5, 8, 13, 21}) {
    PeriodicPotential p;
    for (int i = 0; i < L; ++i) p.values.push_back(v(rng));
    const Polynomial poly = trace_poly(p);
    CHECK(poly.degree() == static_cast<std::size_t>(L));
    CHECK(poly.coeffs.back() == 1.0);
    for (double E : {0.7, -1.3, 2.9}) {
      const double t = propagate(E, p.values).trace();
      CHECK(std::abs(poly(E) - t) <= 1e-8 * std::max(1.0, std::abs(t)));
    }
    for (int k = 0; k < 20; ++k) {
      const double E = 3.0 * v(rng);
      const double t = propagate(E, p.values).trace();
      CHECK(std::abs(poly(E) - t) <= 1e-8 * std::max(1.0, std::abs(t)));
    }
  }
}

TEST_CASE("gordon ratios") {
  CHECK(gordon_ratio(std::vector<double>(9, 0.0), 0.0, 3).three_block == doctest::Approx(1.0));
  CHECK(gordon_ratio(std::vector<double>(12, 0.0), 1.0, 4).three_block >= 0.5);
  std::vector<double> rep;
  for (int i = 0; i < 18; ++i) rep.push_back(i % 2 == 0 ? 1.0 : 0.0);
  const GordonRatio g = gordon_ratio(rep, 0.5, 6);
  CHECK(g.three_block >= 0.5);
  CHECK(g.two_block >= 0.5);
  std::vector<double> broken(9, 0.0);
  broken[0] = 1.0;
  CHECK_THROWS_AS(gordon_ratio(broken, 0.0, 3), DomainError);
  CHECK_THROWS_AS(gordon_ratio(std::vector<double>(8, 0.0), 0.0, 3), DomainError);
}
