#include "qp/periodic.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qp/kernels.hpp"

namespace qp {

bool BandSet::contains(double E, double tol) const {
  return std::any_of(bands.begin(), bands.end(),
                     [&](const Band& b) { return E >= b.lo - tol && E <= b.hi + tol; });
}

std::vector<double> band_edges(const PeriodicPotential& p) {
  if (p.values.empty()) throw DomainError("band_edges needs a nonempty period");
  std::vector<double> edges;
  for (const EdgePair& b : omp::floquet_bands(p.values)) {
    edges.push_back(b.lo);
    edges.push_back(b.hi);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

BandSet band_spectrum(const PeriodicPotential& p, double tol) {
  if (p.values.empty()) throw DomainError("band_spectrum needs a nonempty period");
  BandSet out;
  for (const EdgePair& e : omp::floquet_bands(p.values)) {
    const Band b{e.lo, e.hi, 1};
    if (!out.bands.empty() && b.lo - out.bands.back().hi < tol) {
      out.bands.back().hi = std::max(out.bands.back().hi, b.hi);
      out.bands.back().states += 1;
    } else {
      out.bands.push_back(b);
    }
  }
  return out;
}

BandSet phase_union_spectrum(const PotentialSpec& spec, std::int64_t q, double tol) {
  if (spec.kind != PotentialKind::AlmostMathieu)
    throw DomainError("phase_union_spectrum needs an almost-Mathieu potential");
  PotentialSpec a = spec;
  PotentialSpec b = spec;
  a.omega = 0.0;
  b.omega = 0.5 / static_cast<double>(q);
  const auto ba = omp::floquet_bands(periodic_approximant_q(a, q).values);
  const auto bb = omp::floquet_bands(periodic_approximant_q(b, q).values);
  BandSet out;
  for (std::size_t k = 0; k < ba.size(); ++k) {
    const Band band{std::min(ba[k].lo, bb[k].lo), std::max(ba[k].hi, bb[k].hi), 1};
    if (!out.bands.empty() && band.lo - out.bands.back().hi < tol) {
      out.bands.back().hi = std::max(out.bands.back().hi, band.hi);
      out.bands.back().states += 1;
    } else {
      out.bands.push_back(band);
    }
  }
  return out;
}

BandSet gap_labels(BandSet bands, std::int64_t L) {
  if (L < 1) throw DomainError("gap_labels needs L >= 1");
  bands.gap_labels.clear();
  int below = 0;
  for (std::size_t i = 0; i + 1 < bands.bands.size(); ++i) {
    below += bands.bands[i].states;
    bands.gap_labels.push_back(static_cast<double>(below) / static_cast<double>(L));
  }
  return bands;
}

double total_bandwidth(const BandSet& bands) {
  double total = 0.0;
  for (const Band& b : bands.bands) total += b.width();
  return total;
}

namespace {

double distance_to(const BandSet& s, double E) {
  double best = std::numeric_limits<double>::infinity();
  for (const Band& b : s.bands) {
    if (E >= b.lo && E <= b.hi) return 0.0;
    best = std::min(best, E < b.lo ? b.lo - E : E - b.hi);
  }
  return best;
}

// sup over x of dist(., y).  dist(., y) is piecewise linear, so on each band
// of x its maximum sits at a band end or at the midpoint of a gap of y.
double directed_hausdorff(const BandSet& x, const BandSet& y) {
  double worst = 0.0;
  for (const Band& b : x.bands) {
    worst = std::max({worst, distance_to(y, b.lo), distance_to(y, b.hi)});
    for (std::size_t i = 0; i + 1 < y.bands.size(); ++i) {
      const double mid = 0.5 * (y.bands[i].hi + y.bands[i + 1].lo);
      if (mid > b.lo && mid < b.hi) worst = std::max(worst, distance_to(y, mid));
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const BandSet& x, const BandSet& y) {
  if (x.bands.empty() && y.bands.empty()) return 0.0;
  if (x.bands.empty() || y.bands.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(x, y), directed_hausdorff(y, x));
}

namespace {

// One period of lambda cos 2pi(n p/q + omega); p/q may be 0/1 or 1/1 here.
PeriodicPotential almost_mathieu_period(std::int64_t p, std::int64_t q, double lambda,
                                        double omega) {
  const Alpha alpha = Alpha::rational(p, q);
  PeriodicPotential pot;
  for (std::int64_t n = 1; n <= q; ++n) {
    double x = alpha.frac_multiple(n) + omega;
    x -= std::floor(x);
    pot.values.push_back(lambda * std::cos(2.0 * std::numbers::pi * x));
  }
  return pot;
}

}  // namespace

std::vector<ButterflyRow> butterfly(double lambda, std::int64_t q_max, double omega) {
  if (q_max < 1) throw DomainError("butterfly needs q_max >= 1");
  std::vector<ButterflyRow> rows;
  for (std::int64_t q = 1; q <= q_max; ++q)
    for (std::int64_t p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) rows.push_back({p, q, {}});

  const auto n = static_cast<std::int64_t>(rows.size());
  // rows are independent; each writes only its own slot
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.bands = band_spectrum(almost_mathieu_period(row.p, row.q, lambda, omega));
  }
  return rows;
}

std::vector<GapMatch> match_gap_labels(const BandSet& bands, const IdsCurve& ids,
                                       std::span<const double> labels, double tol) {
  std::vector<GapMatch> out;
  for (std::size_t i = 0; i + 1 < bands.bands.size(); ++i) {
    GapMatch m;
    m.gap_lo = bands.bands[i].hi;
    m.gap_hi = bands.bands[i + 1].lo;
    m.ids_value = ids.at(0.5 * (m.gap_lo + m.gap_hi));
    double best = std::numeric_limits<double>::infinity();
    for (double label : labels) {
      const double dev = std::abs(m.ids_value - label);
      if (dev < best) {
        best = dev;
        m.label = label;
      }
    }
    m.deviation = best;
    m.within_tol = best <= tol;
    out.push_back(m);
  }
  return out;
}

}  // namespace qp
