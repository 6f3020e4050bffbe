#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "qp/ids.hpp"

using namespace qp;

namespace {

Eigen::MatrixXd tridiagonal(const std::vector<double>& diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = 1.0;
  }
  return h;
}

Eigen::MatrixXd ring(const std::vector<double>& diag, double phase) {
  Eigen::MatrixXd h = tridiagonal(diag);
  const auto n = static_cast<Eigen::Index>(diag.size());
  h(0, n - 1) += phase;
  h(n - 1, 0) += phase;
  return h;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

std::int64_t count_below(const Eigen::VectorXd& ev, double E) {
  std::int64_t n = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) n += ev(i) < E ? 1 : 0;
  return n;
}

// energies at least `margin` away from every eigenvalue
std::vector<double> safe_energies(const Eigen::VectorXd& ev, double lo, double hi, int n,
                                  double margin) {
  std::vector<double> out;
  for (double E : linspace(lo, hi, static_cast<std::size_t>(n))) {
    bool ok = true;
    for (Eigen::Index i = 0; i < ev.size(); ++i) ok = ok && std::abs(ev(i) - E) > margin;
    if (ok) out.push_back(E);
  }
  return out;
}

}  // namespace

TEST_CASE("eigen_count examples") {
  const std::vector<double> zero(5, 0.0);
  CHECK(eigen_count(zero, 0.0) == 2);
  CHECK(eigen_count(zero, 1e-9) == 3);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(40);
  for (double& x : v) x = u(rng);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  CHECK(eigen_count(v, -(2.0 + m) - 1.0) == 0);
  CHECK(eigen_count(v, (2.0 + m) + 1.0) == 40);
}

TEST_CASE("eigen_count against a dense solver") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> len(1, 50);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& x : v) x = u(rng);
    const auto ev = eigenvalues(tridiagonal(v));
    for (double E : safe_energies(ev, -4.5, 4.5, 60, 1e-9)) REQUIRE(eigen_count(v, E) == count_below(ev, E));
  }
}

TEST_CASE("ring count against a dense solver") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> len(1, 30);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& x : v) x = u(rng);
    for (double phase : {1.0, -1.0}) {
      const auto ev = eigenvalues(ring(v, phase));
      for (double E : safe_energies(ev, -4.5, 4.5, 60, 1e-8))
        REQUIRE(ring_eigen_count(v, phase, E) == count_below(ev, E));
    }
  }
}

TEST_CASE("ring count at degenerate spectra") {
  // constant rings have doubly degenerate eigenvalues v + 2 cos(2 pi k / L)
  for (std::size_t L : {2u, 3u, 6u, 8u, 9u, 12u, 20u}) {
    const std::vector<double> v(L, 0.73);
    for (double phase : {1.0, -1.0}) {
      const auto ev = eigenvalues(ring(v, phase));
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        CHECK(ring_eigen_count(v, phase, ev(i) - 1e-7) == count_below(ev, ev(i) - 1e-7));
        CHECK(ring_eigen_count(v, phase, ev(i) + 1e-7) == count_below(ev, ev(i) + 1e-7));
      }
    }
  }
}

TEST_CASE("ids curves") {
  const auto grid = linspace(-3.0, 3.0, 61);
  const IdsCurve free = ids_curve(PotentialSpec::constant(0.0), 0.0, 1000, grid);
  CHECK(free.size == 2001);
  CHECK(std::abs(free.at(0.0) - 0.5) <= 2e-3);
  CHECK(std::abs(free.at(1.0) - 2.0 / 3.0) <= 2e-3);
  CHECK(free.values.front() == 0.0);
  CHECK(free.values.back() == 1.0);
  const auto fib = PotentialSpec::sturmian(Alpha::real(kGoldenMean), 1.0);
  CHECK(ids_curve(fib, 0.0, 100, std::vector<double>{-3.5}).values[0] == 0.0);
}

TEST_CASE("ids is monotone and stable in L") {
  const auto grid = linspace(-3.5, 3.5, 351);
  for (const auto& spec :
       {PotentialSpec::constant(0.0), PotentialSpec::sturmian(Alpha::real(kGoldenMean), 1.0)}) {
    for (std::int64_t L : {50, 200, 800}) {
      const IdsCurve a = ids_curve(spec, 0.0, L, grid);
      const IdsCurve b = ids_curve(spec, 0.0, 2 * L, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) CHECK(a.values[i] >= a.values[i - 1]);
        CHECK(std::abs(a.values[i] - b.values[i]) <= 5.0 / static_cast<double>(L));
      }
    }
  }
}

TEST_CASE("boundary condition changes the ids by at most 2/L") {
  const auto grid = linspace(-4.0, 4.0, 801);
  const auto spec = PotentialSpec::sturmian(Alpha::real(kGoldenMean), 2.0);
  for (std::int64_t L : {30, 300}) {
    const IdsCurve d = ids_curve(spec, 0.0, L, grid);
    for (double phase : {1.0, -1.0}) {
      const IdsCurve r = ids_curve_ring(spec, 0.0, L, phase, grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(d.values[i] - r.values[i]) <= 2.0 / static_cast<double>(L));
    }
  }
}

TEST_CASE("free ids") {
  CHECK(free_ids(0.0) == 0.5);
  CHECK(free_ids(-2.0) == 0.0);
  CHECK(free_ids(2.0) == 1.0);
  CHECK(free_ids(-7.0) == 0.0);
  CHECK(free_ids(1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("thouless formula on the free ids") {
  const IdsCurve ids = free_ids_curve(linspace(-2.0, 2.0, 10001));
  CHECK(std::abs(thouless_gamma(ids, 3.0) - std::log((3.0 + std::sqrt(5.0)) / 2.0)) <= 0.01);
  CHECK(std::abs(thouless_gamma(ids, 0.0)) <= 0.02);
  CHECK(std::abs(thouless_gamma(ids, 10.0) - std::log(5.0 + std::sqrt(24.0))) <= 0.01);
  // E on a grid point takes the singular-cell rule
  CHECK(std::isfinite(thouless_gamma(ids, ids.energies[4000])));
}

TEST_CASE("characteristic polynomial") {
  CHECK(char_poly_value(std::vector<double>{0.4}, 1.5) == doctest::Approx(1.1));
  for (double E : {-1.0, 0.3, 2.0}) CHECK(char_poly_value(std::vector<double>{0.0, 0.0}, E) == doctest::Approx(E * E - 1.0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(8);
    for (double& x : v) x = u(rng);
    const double E = u(rng);
    const Eigen::MatrixXd m =
        E * Eigen::MatrixXd::Identity(8, 8) - tridiagonal(v);
    const double det = m.fullPivLu().determinant();
    CHECK(std::abs(char_poly_value(v, E) - det) <= 1e-8 * std::max(1.0, std::abs(det)));
  }
  const std::vector<double> big(3000, 0.0);
  CHECK(char_poly_log_abs(big, 5.0) == doctest::Approx(3000 * std::log((5.0 + std::sqrt(21.0)) / 2.0)).epsilon(1e-3));
}
