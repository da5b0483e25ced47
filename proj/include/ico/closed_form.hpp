#pragma once

#include <cmath>

#include "ico/errors.hpp"
#include "ico/params.hpp"

namespace ico {

// Coefficients entering the asymmetric-bath expression for beta_f:
//   a1 = 2 e^{-(b1+b2)} + e^{-b1} + e^{-b2}
//   a2 = e^{-b1} - e^{-b2}
//   a3 = e^{-(bi+b1+b2)}
//   a4 = 2 + e^{-b1} + e^{-b2}
// (all exponents in units of the gap).
struct AlphaCoeffs {
  double a1;
  double a2;
  double a3;
  double a4;
};

inline AlphaCoeffs alpha_coeffs(const BathConfig& b) {
  const double e1 = std::exp(-b.beta_t1);
  const double e2 = std::exp(-b.beta_t2);
  const double ei = std::exp(-b.beta_i);
  return {2.0 * e1 * e2 + e1 + e2, e1 - e2, ei * e1 * e2, 2.0 + e1 + e2};
}

namespace detail {

// ln(num/den), split into ln(num) - ln(den) once the operands are far enough
// apart that forming the quotient first would lose precision.
inline double log_ratio(double num, double den) {
  const double hi = std::max(num, den);
  const double lo = std::min(num, den);
  if (lo > 0.0 && hi / lo > 1e8) return std::log(num) - std::log(den);
  return std::log(num / den);
}

inline double diag_weight(const ControlSpec& c, const MeasureSpec& m) {
  return 1.0 + c.r * std::cos(m.Theta) * std::cos(c.theta);
}

inline double coherence_weight(const ControlSpec& c, const MeasureSpec& m) {
  return c.r * std::sin(m.Theta) * std::sin(c.theta) * std::cos(m.Phi - c.phi);
}

}  // namespace detail

inline constexpr double denominator_floor = 1e-12;

// Identical baths:
//   beta_f = beta_t - ln(N/D),
//   N = (1+e^{-bi})(1+e^{-bt}) w + v e^{-(bi+bt)},
//   D = (1+e^{-bi})(1+e^{-bt}) w + v,
// with w = 1 + r cos(Theta) cos(theta) and
// v = r sin(Theta) sin(theta) cos(Phi - phi).
inline double beta_f_identical(double beta_t, double beta_i, const ControlSpec& c,
                               const MeasureSpec& m) {
  const double zi = 1.0 + std::exp(-beta_i);
  const double zt = 1.0 + std::exp(-beta_t);
  const double w = detail::diag_weight(c, m);
  const double v = detail::coherence_weight(c, m);
  const double num = zi * zt * w + v * std::exp(-(beta_i + beta_t));
  const double den = zi * zt * w + v;
  if (den < denominator_floor) throw DegenerateDenominator(den);
  return beta_t - detail::log_ratio(num, den);
}

// Different baths; the canonical evaluator, reducing smoothly to
// beta_f_identical when beta_t1 == beta_t2:
//   beta_f = -ln( { (1+e^{-bi})[a1 w - a2 y] + 2 a3 v }
//               / { (1+e^{-bi})[a4 w + a2 y] + 2 v } ),
// with y = cos(Theta) + r cos(theta).
inline double beta_f_general(const BathConfig& b, const ControlSpec& c, const MeasureSpec& m) {
  const AlphaCoeffs a = alpha_coeffs(b);
  const double zi = 1.0 + std::exp(-b.beta_i);
  const double w = detail::diag_weight(c, m);
  const double y = std::cos(m.Theta) + c.r * std::cos(c.theta);
  const double v = detail::coherence_weight(c, m);
  const double num = zi * (a.a1 * w - a.a2 * y) + 2.0 * a.a3 * v;
  const double den = zi * (a.a4 * w + a.a2 * y) + 2.0 * v;
  if (den < denominator_floor) throw DegenerateDenominator(den);
  return -detail::log_ratio(num, den);
}

// gamma = (1 + e^{-(bi+2bt)}) / [ (1+e^{-bi}) (1+e^{-bt})^2 ],  0 < gamma < 1.
inline double gamma_coeff(double beta_t, double beta_i) {
  const double zt = 1.0 + std::exp(-beta_t);
  const double zi = 1.0 + std::exp(-beta_i);
  return (1.0 + std::exp(-(beta_i + 2.0 * beta_t))) / (zi * zt * zt);
}

// Identical baths: p = [1 + r cos(theta) cos(Theta)
//                         + r gamma sin(theta) sin(Theta) cos(Phi-phi)] / 2.
inline double success_prob(double beta_t, double beta_i, const ControlSpec& c,
                           const MeasureSpec& m) {
  const double w = c.r * std::cos(c.theta) * std::cos(m.Theta);
  const double coh = gamma_coeff(beta_t, beta_i) * detail::coherence_weight(c, m);
  return 0.5 * (1.0 + w + coh);
}

// Trace of the unnormalized conditional state for arbitrary baths; equals
// success_prob when the baths coincide.
inline double success_prob_general(const BathConfig& b, const ControlSpec& c,
                                   const MeasureSpec& m) {
  const AlphaCoeffs a = alpha_coeffs(b);
  const double z = (1.0 + std::exp(-b.beta_t1)) * (1.0 + std::exp(-b.beta_t2)) *
                   (1.0 + std::exp(-b.beta_i));
  const double w = c.r * std::cos(c.theta) * std::cos(m.Theta);
  return 0.5 * (1.0 + w + detail::coherence_weight(c, m) * (1.0 + a.a3) / z);
}

// Literal p_opt^(+-) = sin^2(theta) (1 +- gamma) / 2 for a pure control,
// evaluated at the stationary measurement angles.
struct OptProbPair {
  double p_plus;
  double p_minus;
};

inline OptProbPair success_prob_opt(double beta_t, double beta_i, double theta) {
  const double g = gamma_coeff(beta_t, beta_i);
  const double s2 = std::sin(theta) * std::sin(theta);
  return {0.5 * s2 * (1.0 + g), 0.5 * s2 * (1.0 - g)};
}

// Stationary measurement directions for identical baths:
// Theta = acos(r cos(pi - theta)) with Phi = phi (maximum of beta_f)
// or Phi = phi + pi (minimum).
struct OptimaIdentical {
  MeasureSpec max;
  MeasureSpec min;
};

inline OptimaIdentical analytic_optima_identical(const ControlSpec& c) {
  const double Theta = std::acos(c.r * std::cos(pi - c.theta));
  return {MeasureSpec{Theta, c.phi}, MeasureSpec{Theta, c.phi + pi}};
}

}  // namespace ico
