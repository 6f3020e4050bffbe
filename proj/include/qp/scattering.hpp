#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qp/potentials.hpp"
#include "qp/transfer.hpp"

namespace qp {

// Sample V_1..V_L between constant leads omega1 (n <= 0) and omega2 (n > L).
struct ScatterResult {
  std::complex<double> t;
  std::complex<double> r;
  double resistance = 0.0;           // |r|^2 / |t|^2
  double resistance_landauer = 0.0;  // |a e^{ik1} + b - c e^{i(k1+k2)} - d e^{ik2}|^2 / (4 sin^2 k1)
  double log10_resistance = 0.0;     // finite even when the resistance overflows
  double k1 = 0.0;
  double k2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

// 2 cos k = E - omega with 0 < k < pi; DomainError unless |E - omega| < 2.
double wave_number(double E, double omega);

ScatterResult scatter(std::span<const double> values, double E, double omega1 = 0.0,
                      double omega2 = 0.0);
ScatterResult scatter(const Mat2& transfer, std::int64_t L, double E, double omega1,
                      double omega2);

// R at k1 = k2 = pi/2 (leads at omega = E): (||T||_2^2 - 2) / 4.
double landauer_trace_norm(std::span<const double> values, double E);
double landauer_trace_norm(const Mat2& transfer);

// min over k2 of R(pi/2, k2) = (sqrt(a^2 + b^2) - sqrt(c^2 + d^2))^2 / 4.
double min_resistance(std::span<const double> values, double E);

struct Leads {
  enum class Mode { PiHalf, Fixed } mode = Mode::PiHalf;
  double omega1 = 0.0;
  double omega2 = 0.0;

  static Leads pi_half() { return {}; }
  static Leads fixed(double w1, double w2) { return {Mode::Fixed, w1, w2}; }
};

struct ResistancePoint {
  std::int64_t length = 0;
  double log10_resistance = 0.0;
};

// log10 R_L for V_1..V_L of `spec` at each length (strictly increasing, >= 1).
// One pass of transfer-matrix propagation serves all lengths.  log10 of zero
// resistance is reported as -inf.
std::vector<ResistancePoint> resistance_profile(const PotentialSpec& spec, double E,
                                                std::span<const std::int64_t> lengths,
                                                Leads leads = Leads::pi_half());

}  // namespace qp
