#include "qp/ids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qp/kernels.hpp"
#include "qp/transfer.hpp"

namespace qp {

double IdsCurve::at(double E) const {
  if (energies.empty()) return 0.0;
  if (E <= energies.front()) return values.front();
  if (E >= energies.back()) return values.back();
  const auto it = std::upper_bound(energies.begin(), energies.end(), E);
  const auto hi = static_cast<std::size_t>(it - energies.begin());
  const std::size_t lo = hi - 1;
  const double t = (E - energies[lo]) / (energies[hi] - energies[lo]);
  return values[lo] + t * (values[hi] - values[lo]);
}

std::int64_t eigen_count(std::span<const double> diag, double E) {
  std::int64_t neg = 0;
  double d = 1.0;
  bool first = true;
  for (double v : diag) {
    d = first ? (v - E) : (v - E) - 1.0 / d;
    first = false;
    if (d == 0.0) d = kZeroPivot;
    if (d < 0.0) ++neg;
  }
  return neg;
}

double floquet_discriminant(std::span<const double> values, double E) {
  const Mat2 m = propagate(E, values);
  const double t = m.a + m.d;
  // 0 * inf would give NaN once the scale overflows
  return t == 0.0 ? 0.0 : t * std::exp(m.log_scale);
}

std::int64_t ring_eigen_count(std::span<const double> diag, double phase, double E) {
  if (diag.empty()) return 0;
  const double c = phase >= 0.0 ? 1.0 : -1.0;
  const auto L = static_cast<std::int64_t>(diag.size());
  const std::int64_t below = eigen_count(diag.first(diag.size() - 1), E);
  // the band holding E runs upward in the discriminant iff L - 1 - below is even
  const double sigma = (L - 1 - below) % 2 == 0 ? 1.0 : -1.0;
  const double g = sigma * floquet_discriminant(diag, E);
  return below + (g > 2.0 * sigma * c ? 1 : 0);
}

namespace {

IdsCurve counts_to_curve(const std::vector<std::int64_t>& counts, std::span<const double> grid,
                         std::int64_t sites) {
  IdsCurve out;
  out.energies.assign(grid.begin(), grid.end());
  out.size = sites;
  out.values.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.values[i] = static_cast<double>(counts[i]) / static_cast<double>(sites);
  return out;
}

std::vector<double> window_values(const PotentialSpec& spec, double omega, std::int64_t L) {
  if (L < 1) throw DomainError("ids window half-width must be >= 1");
  PotentialSpec s = spec;
  s.omega = omega;
  return sample_potential(s, -L, L);
}

std::vector<double> shifted(std::span<const double> grid) {
  std::vector<double> g(grid.begin(), grid.end());
  for (double& e : g) e += kIdsShift;
  return g;
}

}  // namespace

IdsCurve ids_curve(const PotentialSpec& spec, double omega, std::int64_t L,
                   std::span<const double> grid) {
  const auto diag = window_values(spec, omega, L);
  const auto counts = omp::dirichlet_counts(diag, shifted(grid));
  return counts_to_curve(counts, grid, 2 * L + 1);
}

IdsCurve ids_curve_ring(const PotentialSpec& spec, double omega, std::int64_t L, double phase,
                        std::span<const double> grid) {
  const auto diag = window_values(spec, omega, L);
  const auto counts = omp::ring_counts(diag, phase, shifted(grid));
  return counts_to_curve(counts, grid, 2 * L + 1);
}

double free_ids(double E) {
  if (E <= -2.0) return 0.0;
  if (E >= 2.0) return 1.0;
  return 0.5 + std::asin(E / 2.0) / std::numbers::pi;
}

IdsCurve free_ids_curve(std::span<const double> grid) {
  IdsCurve out;
  out.energies.assign(grid.begin(), grid.end());
  out.values.reserve(grid.size());
  for (double e : grid) out.values.push_back(free_ids(e));
  return out;
}

double thouless_gamma(const IdsCurve& ids, double E) {
  constexpr double kTouch = 1e-12;
  double gamma = 0.0;
  for (std::size_t i = 0; i + 1 < ids.energies.size(); ++i) {
    const double dn = ids.values[i + 1] - ids.values[i];
    if (dn == 0.0) continue;
    const double lo = ids.energies[i];
    const double hi = ids.energies[i + 1];
    if (E >= lo - kTouch && E <= hi + kTouch) {
      gamma += std::log(0.5 * (hi - lo)) * dn;
    } else {
      gamma += std::log(std::abs(E - 0.5 * (lo + hi))) * dn;
    }
  }
  return gamma;
}

double char_poly_value(std::span<const double> values, double E) {
  double prev = 0.0, cur = 1.0;
  for (double v : values) {
    const double next = (E - v) * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double char_poly_log_abs(std::span<const double> values, double E) {
  double prev = 0.0, cur = 1.0, log_scale = 0.0;
  for (double v : values) {
    const double next = (E - v) * cur - prev;
    prev = cur;
    cur = next;
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m > 1e100 || (m < 1e-100 && m > 0.0)) {
      int e = 0;
      std::frexp(m, &e);
      cur = std::ldexp(cur, -e);
      prev = std::ldexp(prev, -e);
      log_scale += e * std::numbers::ln2;
    }
  }
  return log_scale + std::log(std::abs(cur));
}

}  // namespace qp
