#pragma once

// Data-parallel inner loops.  Every kernel exists twice: a plain serial
// reference in qp::serial and an OpenMP version in qp::omp.  The parallel
// versions evaluate each grid point with the same code as the serial ones and
// write into preallocated slots, so results are bitwise identical and do not
// depend on the thread count.

#include <cstdint>
#include <span>
#include <vector>

namespace qp {

// Sets the OpenMP team size used by qp::omp kernels; n <= 0 restores the default.
void set_num_threads(int n);
int num_threads();

struct EdgePair {
  double lo = 0.0;
  double hi = 0.0;
};

namespace serial {

std::vector<std::int64_t> dirichlet_counts(std::span<const double> diag,
                                           std::span<const double> energies);
std::vector<std::int64_t> ring_counts(std::span<const double> diag, double phase,
                                      std::span<const double> energies);
std::vector<double> lyapunov_grid(std::span<const double> values, std::span<const double> energies);
// Eigenvalues of the tridiagonal matrix with unit off-diagonals, ascending.
std::vector<double> dirichlet_eigenvalues(std::span<const double> diag);
// The L Floquet bands of one period, bottom to top.  Band j lies between the
// j-th and (j+1)-th eigenvalue of the first L-1 sites; a gap is closed exactly
// when the monodromy there is +-I, and its two edges are then equal.
std::vector<EdgePair> floquet_bands(std::span<const double> values);
// All L eigenvalues of the ring matrix (phase +1 or -1), ascending; each band
// contributes one of its edges.
std::vector<double> ring_eigenvalues(std::span<const double> diag, double phase);

}  // namespace serial

namespace omp {

std::vector<std::int64_t> dirichlet_counts(std::span<const double> diag,
                                           std::span<const double> energies);
std::vector<std::int64_t> ring_counts(std::span<const double> diag, double phase,
                                      std::span<const double> energies);
std::vector<double> lyapunov_grid(std::span<const double> values, std::span<const double> energies);
std::vector<double> dirichlet_eigenvalues(std::span<const double> diag);
std::vector<EdgePair> floquet_bands(std::span<const double> values);
std::vector<double> ring_eigenvalues(std::span<const double> diag, double phase);

}  // namespace omp

// Building blocks shared by both variants.
double dirichlet_eigenvalue(std::span<const double> diag, std::int64_t k);
EdgePair floquet_band(std::span<const double> values, std::span<const double> mu,
                      const std::vector<bool>& closed, std::int64_t j);

}  // namespace qp
