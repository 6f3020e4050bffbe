#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qp/ids.hpp"
#include "qp/potentials.hpp"

namespace qp {

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  // Floquet bands merged into this interval through closed gaps
  int states = 1;

  double width() const { return hi - lo; }
};

// Sorted, pairwise disjoint closed intervals.  gap_labels, when present,
// holds one IDS value per gap (between bands[i] and bands[i+1]).
struct BandSet {
  std::vector<Band> bands;
  std::vector<double> gap_labels;

  std::size_t gap_count() const { return bands.empty() ? 0 : bands.size() - 1; }
  bool contains(double E, double tol = 0.0) const;
};

inline constexpr double kClosedGapTol = 1e-9;

// Sorted roots of tr T_{1->L}(E) = +-2, i.e. the periodic and antiperiodic
// ring eigenvalues (2L values).
std::vector<double> band_edges(const PeriodicPotential& p);

// {E : |tr T_{1->L}(E)| <= 2}; gaps narrower than tol are reported closed
// and the neighbouring bands merged.
BandSet band_spectrum(const PeriodicPotential& p, double tol = kClosedGapTol);

// Union over omega of the spectra of the period-q almost-Mathieu
// approximant of `spec`.  The discriminant depends on omega only through
// cos(2 pi q omega), so band k of the union is the hull of band k at
// omega = 0 and omega = 1/(2q).
BandSet phase_union_spectrum(const PotentialSpec& spec, std::int64_t q,
                             double tol = kClosedGapTol);

// The gap above the k-th Floquet band carries label k/L.
BandSet gap_labels(BandSet bands, std::int64_t L);

double total_bandwidth(const BandSet& bands);

// Hausdorff distance between the unions of the two band lists; infinite when
// exactly one of them is empty.
double hausdorff_distance(const BandSet& x, const BandSet& y);

struct ButterflyRow {
  std::int64_t p = 0;
  std::int64_t q = 1;
  BandSet bands;
};

// Almost-Mathieu spectra at alpha = p/q for all reduced p/q in [0, 1] with
// q <= q_max, ordered by (q, p).
std::vector<ButterflyRow> butterfly(double lambda, std::int64_t q_max, double omega = 0.0);

struct GapMatch {
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  double ids_value = 0.0;  // N at the gap midpoint
  double label = 0.0;      // nearest admissible label
  double deviation = 0.0;  // |ids_value - label|
  bool within_tol = false;
};

std::vector<GapMatch> match_gap_labels(const BandSet& bands, const IdsCurve& ids,
                                       std::span<const double> labels, double tol);

}  // namespace qp
