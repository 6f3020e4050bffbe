#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qp/potentials.hpp"

namespace qp {

// Sampled integrated density of states N(E).
struct IdsCurve {
  std::vector<double> energies;  // strictly increasing
  std::vector<double> values;    // nondecreasing, within [0, 1]
  std::int64_t size = 0;         // lattice sites behind each value (2L+1)

  // linear interpolation, clamped to the end values outside the grid
  double at(double E) const;
};

// Replacement for an exactly vanishing Sturm pivot.  Positive, so an
// eigenvalue sitting exactly at E is not counted as below it.
inline constexpr double kZeroPivot = 1e-300;

// Number of eigenvalues strictly below E of the symmetric tridiagonal matrix
// with diagonal `diag` and unit off-diagonals (Dirichlet restriction).
std::int64_t eigen_count(std::span<const double> diag, double E);

// tr T_{1->L}(E) for one period; +-inf once it overflows.
double floquet_discriminant(std::span<const double> values, double E);

// Same count for the L-site ring whose wrap-around bond carries the sign
// `phase` (+1 periodic, -1 antiperiodic), i.e. boundary phase 0 or pi.
// By interlacing this is the count for the first L-1 sites plus 0 or 1,
// decided by tr T_{1->L}(E) against 2 * phase.
std::int64_t ring_eigen_count(std::span<const double> diag, double phase, double E);

// N_L(E) on the window [-L, L] of H(omega); omega overrides spec.omega.
// Counts eigenvalues <= E by shifting E up by kIdsShift.
inline constexpr double kIdsShift = 1e-12;
IdsCurve ids_curve(const PotentialSpec& spec, double omega, std::int64_t L,
                   std::span<const double> grid);
// Same as ids_curve with a boundary phase (+1 / -1) closing the window into a ring.
IdsCurve ids_curve_ring(const PotentialSpec& spec, double omega, std::int64_t L, double phase,
                        std::span<const double> grid);

// 1/2 + arcsin(E/2)/pi on [-2, 2], 0 below and 1 above.
double free_ids(double E);
IdsCurve free_ids_curve(std::span<const double> grid);

// gamma(E) = integral of ln|E - E'| dN(E') as a Stieltjes sum over grid
// cells.  A cell whose closed span contains E (or lies within 1e-12 of it)
// contributes ln(width/2) * dN instead of the log at the cell midpoint.
double thouless_gamma(const IdsCurve& ids, double E);

// psi_{L+1} for psi_0 = 0, psi_1 = 1, which equals det(E - H_D) on [1, L].
double char_poly_value(std::span<const double> values, double E);
// log |psi_{L+1}|, stable when the value overflows
double char_poly_log_abs(std::span<const double> values, double E);

}  // namespace qp
