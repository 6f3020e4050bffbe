#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qp/potentials.hpp"

namespace qp {

// Sorted reals in [0, 1), deduplicated within kLabelDedupTol.
struct LabelSet {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  // distance to the nearest element on the circle R/Z
  double distance(double x) const;
  double nearest(double x) const;
};

inline constexpr double kLabelDedupTol = 1e-12;

LabelSet make_label_set(std::vector<double> values);

// Cantor function: 0 below 0, 1 above 1.  Triadic digits are consumed until
// the first digit 1.  x within 4 ulps of m / 3^k, k <= 20, is read as that
// triadic rational; otherwise x with an exact dyadic denominator up to 2^125 is
// expanded in integer arithmetic, smaller x in floating point with at most
// kCantorDigitCap digits.
inline constexpr int kCantorDigitCap = 52;
double cantor_alpha(double x);

// e^{it/2} prod_{n=1}^{N} cos(t / 3^n), the Fourier transform of the Cantor measure.
std::complex<double> cantor_fourier(double t, int N);

// {frac(k alpha) : |k| <= k_max}
LabelSet sturmian_label_set(const Alpha& alpha, int k_max);

// (2k - 1) / 2^{n+1} for 0 <= n <= n_max, 1 <= k <= 2^n
LabelSet hierarchical_labels(int n_max);

// Closed intervals left after `level` rounds of removing open middle thirds from [0, 1].
std::vector<std::pair<double, double>> middle_thirds(int level);

}  // namespace qp
