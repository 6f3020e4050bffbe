#include "qp/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "qp/ids.hpp"
#include "qp/transfer.hpp"

namespace qp {

namespace {

int g_threads = 0;

int team_size() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

double gamma_at(std::span<const double> values, double E) {
  return lyapunov_estimate(values, E);
}

struct Bracket {
  double lo;
  double hi;
};

// Encloses the spectrum of every operator with this diagonal.
Bracket spectral_bracket(std::span<const double> diag) {
  const auto [mn, mx] = std::minmax_element(diag.begin(), diag.end());
  const double pad = 1e-9 * (1.0 + std::max(std::abs(*mn), std::abs(*mx)));
  return {*mn - 2.0 - pad, *mx + 2.0 + pad};
}

// Smallest E in [lo, hi] where pred switches from false to true.
template <class Pred>
double threshold(double lo, double hi, Pred pred) {
  // counts are backward stable only to about eps * ||H||
  const double resolution =
      2.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 200 && hi - lo > resolution; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<bool> closed_flags(std::span<const double> values, std::span<const double> mu) {
  std::vector<bool> closed(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const MatClass c = classify(propagate(mu[i], values));
    closed[i] = c == MatClass::PlusIdentity || c == MatClass::MinusIdentity;
  }
  return closed;
}

double ring_edge(const EdgePair& band, std::int64_t j, std::int64_t L, double phase) {
  // the lower edge solves tr = -2 sigma_j, the upper one tr = 2 sigma_j
  const double sigma = (L - 1 - j) % 2 == 0 ? 1.0 : -1.0;
  const double c = phase >= 0.0 ? 1.0 : -1.0;
  return sigma == c ? band.hi : band.lo;
}

}  // namespace

void set_num_threads(int n) { g_threads = n > 0 ? n : 0; }
int num_threads() { return team_size(); }

double dirichlet_eigenvalue(std::span<const double> diag, std::int64_t k) {
  const Bracket b = spectral_bracket(diag);
  return threshold(b.lo, b.hi, [&](double E) { return eigen_count(diag, E) > k; });
}

EdgePair floquet_band(std::span<const double> values, std::span<const double> mu,
                      const std::vector<bool>& closed, std::int64_t j) {
  const auto L = static_cast<std::int64_t>(values.size());
  const Bracket outer = spectral_bracket(values);
  const double a = j == 0 ? outer.lo : mu[j - 1];
  const double b = j + 1 == L ? outer.hi : mu[j];
  // sigma tr runs from -2 to 2 across band j
  const double sigma = (L - 1 - j) % 2 == 0 ? 1.0 : -1.0;
  const auto g = [&](double E) { return sigma * floquet_discriminant(values, E); };

  EdgePair out;
  out.lo = (j > 0 && closed[j - 1]) ? a : threshold(a, b, [&](double E) { return g(E) >= -2.0; });
  out.hi = (j + 1 < L && closed[j]) ? b : threshold(a, b, [&](double E) { return g(E) > 2.0; });
  return out;
}

namespace serial {

std::vector<std::int64_t> dirichlet_counts(std::span<const double> diag,
                                           std::span<const double> energies) {
  std::vector<std::int64_t> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) out[i] = eigen_count(diag, energies[i]);
  return out;
}

std::vector<std::int64_t> ring_counts(std::span<const double> diag, double phase,
                                      std::span<const double> energies) {
  std::vector<std::int64_t> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i)
    out[i] = ring_eigen_count(diag, phase, energies[i]);
  return out;
}

std::vector<double> lyapunov_grid(std::span<const double> values,
                                  std::span<const double> energies) {
  std::vector<double> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) out[i] = gamma_at(values, energies[i]);
  return out;
}

std::vector<double> dirichlet_eigenvalues(std::span<const double> diag) {
  std::vector<double> out(diag.size());
  for (std::size_t k = 0; k < diag.size(); ++k)
    out[k] = dirichlet_eigenvalue(diag, static_cast<std::int64_t>(k));
  return out;
}

std::vector<EdgePair> floquet_bands(std::span<const double> values) {
  if (values.empty()) return {};
  const auto mu = dirichlet_eigenvalues(values.first(values.size() - 1));
  const auto closed = closed_flags(values, mu);
  std::vector<EdgePair> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j)
    out[j] = floquet_band(values, mu, closed, static_cast<std::int64_t>(j));
  return out;
}

std::vector<double> ring_eigenvalues(std::span<const double> diag, double phase) {
  const auto bands = floquet_bands(diag);
  const auto L = static_cast<std::int64_t>(bands.size());
  std::vector<double> out(bands.size());
  for (std::int64_t j = 0; j < L; ++j) out[j] = ring_edge(bands[j], j, L, phase);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace serial

namespace omp {

std::vector<std::int64_t> dirichlet_counts(std::span<const double> diag,
                                           std::span<const double> energies) {
  std::vector<std::int64_t> out(energies.size());
  const auto n = static_cast<std::int64_t>(energies.size());
#pragma omp parallel for schedule(static) num_threads(team_size())
  for (std::int64_t i = 0; i < n; ++i) out[i] = eigen_count(diag, energies[i]);
  return out;
}

std::vector<std::int64_t> ring_counts(std::span<const double> diag, double phase,
                                      std::span<const double> energies) {
  std::vector<std::int64_t> out(energies.size());
  const auto n = static_cast<std::int64_t>(energies.size());
#pragma omp parallel for schedule(static) num_threads(team_size())
  for (std::int64_t i = 0; i < n; ++i) out[i] = ring_eigen_count(diag, phase, energies[i]);
  return out;
}

std::vector<double> lyapunov_grid(std::span<const double> values,
                                  std::span<const double> energies) {
  std::vector<double> out(energies.size());
  const auto n = static_cast<std::int64_t>(energies.size());
#pragma omp parallel for schedule(static) num_threads(team_size())
  for (std::int64_t i = 0; i < n; ++i) out[i] = gamma_at(values, energies[i]);
  return out;
}

std::vector<double> dirichlet_eigenvalues(std::span<const double> diag) {
  std::vector<double> out(diag.size());
  const auto n = static_cast<std::int64_t>(diag.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(team_size())
  for (std::int64_t k = 0; k < n; ++k) out[k] = dirichlet_eigenvalue(diag, k);
  return out;
}

std::vector<EdgePair> floquet_bands(std::span<const double> values) {
  if (values.empty()) return {};
  const auto mu = dirichlet_eigenvalues(values.first(values.size() - 1));
  const auto closed = closed_flags(values, mu);
  std::vector<EdgePair> out(values.size());
  const auto L = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(team_size())
  for (std::int64_t j = 0; j < L; ++j) out[j] = floquet_band(values, mu, closed, j);
  return out;
}

std::vector<double> ring_eigenvalues(std::span<const double> diag, double phase) {
  const auto bands = floquet_bands(diag);
  const auto L = static_cast<std::int64_t>(bands.size());
  std::vector<double> out(bands.size());
  for (std::int64_t j = 0; j < L; ++j) out[j] = ring_edge(bands[j], j, L, phase);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace omp

}  // namespace qp
