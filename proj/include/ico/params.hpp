#pragma once

#include <cmath>
#include <numbers>

#include "ico/errors.hpp"

namespace ico {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace detail {

inline double wrap_two_pi(double x) {
  double y = std::fmod(x, two_pi);
  if (y < 0.0) y += two_pi;
  if (y >= two_pi) y = 0.0;
  return y;
}

// Fold an arbitrary (polar, azimuth) pair onto the canonical chart
// polar in [0, pi], azimuth in [0, 2*pi).
inline void normalize_direction(double& polar, double& azimuth) {
  if (!std::isfinite(polar) || !std::isfinite(azimuth))
    throw InvalidParameter("Bloch angles must be finite");
  polar = wrap_two_pi(polar);
  if (polar > pi) {
    polar = two_pi - polar;
    azimuth += pi;
  }
  azimuth = wrap_two_pi(azimuth);
}

}  // namespace detail

// Bloch parametrization (r, theta, phi) of the control-qubit preparation.
struct ControlSpec {
  double r;
  double theta;
  double phi;

  ControlSpec(double r_, double theta_, double phi_) : r(r_), theta(theta_), phi(phi_) {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0)
      throw InvalidParameter("Bloch radius r must lie in [0, 1]");
    detail::normalize_direction(theta, phi);
  }
};

// Bloch direction (Theta, Phi) of the postselected control measurement outcome.
struct MeasureSpec {
  double Theta;
  double Phi;

  MeasureSpec(double Theta_, double Phi_) : Theta(Theta_), Phi(Phi_) {
    detail::normalize_direction(Theta, Phi);
  }
};

// The complementary measurement outcome, along (pi - Theta, Phi + pi).
inline MeasureSpec antipodal(const MeasureSpec& m) { return {pi - m.Theta, m.Phi + pi}; }

// Dimensionless inverse temperatures beta*Delta of the two baths and of the
// initial system state. Every quantity in this library carries the gap Delta
// absorbed; nothing downstream ever sees Delta itself.
struct BathConfig {
  double beta_t1;
  double beta_t2;
  double beta_i;

  BathConfig(double beta_t1_, double beta_t2_, double beta_i_)
      : beta_t1(beta_t1_), beta_t2(beta_t2_), beta_i(beta_i_) {
    for (double b : {beta_t1, beta_t2, beta_i})
      if (!std::isfinite(b) || b < 0.0)
        throw InvalidParameter("inverse temperatures must be finite and nonnegative");
  }

  bool identical() const { return beta_t1 == beta_t2; }

  // Asymmetry ratio n = beta_t2 / beta_t1.
  double asymmetry() const {
    if (beta_t1 <= 0.0) throw InvalidParameter("asymmetry ratio needs beta_t1 > 0");
    return beta_t2 / beta_t1;
  }
};

}  // namespace ico
