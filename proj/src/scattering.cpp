#include "qp/scattering.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qp {

namespace {

using cplx = std::complex<double>;

double log10_from_natural(double x) { return x / std::numbers::ln10; }

}  // namespace

double wave_number(double E, double omega) {
  const double x = 0.5 * (E - omega);
  if (!(std::abs(x) < 1.0))
    throw DomainError("evanescent lead: |E - omega| must be below 2");
  return std::acos(x);
}

ScatterResult scatter(const Mat2& m, std::int64_t L, double E, double omega1, double omega2) {
  ScatterResult out;
  out.omega1 = omega1;
  out.omega2 = omega2;
  out.k1 = wave_number(E, omega1);
  out.k2 = wave_number(E, omega2);
  const double s1 = std::sin(out.k1);
  const cplx e1 = std::polar(1.0, out.k1);
  const cplx e2 = std::polar(1.0, out.k2);

  // normalized entries; the true matrix is e^{log_scale} times these
  const cplx num = m.a * e1 + m.b - e2 * (m.c * e1 + m.d);
  const cplx den = m.a * std::conj(e1) + m.b - e2 * (m.c * std::conj(e1) + m.d);
  out.r = -num / den;
  const cplx phase = std::polar(1.0, -out.k2 * static_cast<double>(L));
  out.t = cplx(0.0, -2.0 * s1) * phase / den * std::exp(-m.log_scale);

  const double log_r = 2.0 * m.log_scale + std::log(std::norm(num)) - std::log(4.0 * s1 * s1);
  out.resistance_landauer = std::exp(log_r);
  out.log10_resistance = log10_from_natural(log_r);
  const double t2 = std::norm(out.t);
  out.resistance = t2 > 0.0 ? std::norm(out.r) / t2 : std::numeric_limits<double>::infinity();
  return out;
}

ScatterResult scatter(std::span<const double> values, double E, double omega1, double omega2) {
  if (values.empty()) throw DomainError("scatter needs a nonempty sample");
  return scatter(propagate(E, values), static_cast<std::int64_t>(values.size()), E, omega1,
                 omega2);
}

double landauer_trace_norm(const Mat2& m) {
  return 0.25 * (std::exp(m.log_trace_norm_sq()) - 2.0);
}

double landauer_trace_norm(std::span<const double> values, double E) {
  return landauer_trace_norm(propagate(E, values));
}

double min_resistance(std::span<const double> values, double E) {
  const Mat2 m = propagate(E, values);
  const double diff = std::hypot(m.a, m.b) - std::hypot(m.c, m.d);
  return 0.25 * diff * diff * std::exp(2.0 * m.log_scale);
}

std::vector<ResistancePoint> resistance_profile(const PotentialSpec& spec, double E,
                                                std::span<const std::int64_t> lengths,
                                                Leads leads) {
  std::vector<ResistancePoint> out;
  if (lengths.empty()) return out;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1 || (i > 0 && lengths[i] <= lengths[i - 1]))
      throw DomainError("resistance_profile needs strictly increasing lengths >= 1");
  }
  const auto values = sample_potential(spec, 1, lengths.back());
  const bool pi_half = leads.mode == Leads::Mode::PiHalf;
  if (!pi_half) {
    wave_number(E, leads.omega1);
    wave_number(E, leads.omega2);
  }

  Mat2 m = Mat2::identity();
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= lengths.back(); ++n) {
    m = step_matrix(E, values[static_cast<std::size_t>(n - 1)]) * m;
    if (n != lengths[next]) continue;
    double log10_r = 0.0;
    if (pi_half) {
      // R = |ia + b + c - id|^2 / 4 at k1 = k2 = pi/2
      const double re = m.b + m.c;
      const double im = m.a - m.d;
      const double q = re * re + im * im;
      log10_r = q > 0.0 ? log10_from_natural(2.0 * m.log_scale + std::log(0.25 * q))
                        : -std::numeric_limits<double>::infinity();
    } else {
      log10_r = scatter(m, n, E, leads.omega1, leads.omega2).log10_resistance;
    }
    out.push_back({n, log10_r});
    ++next;
  }
  return out;
}

}  // namespace qp
