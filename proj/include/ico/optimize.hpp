#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ico/closed_form.hpp"
#include "ico/errors.hpp"
#include "ico/params.hpp"
#include "ico/sweep_table.hpp"
#include "ico/switch_sim.hpp"

namespace ico {

struct ExtremaResult {
  double beta_f_max;
  MeasureSpec angles_max;
  double prob_max;
  double beta_f_min;
  MeasureSpec angles_min;
  double prob_min;
};

struct ExtremaOptions {
  std::size_t theta_points = 181;  // coarse grid on Theta in [0, pi]
  std::size_t phi_points = 73;     // coarse grid on Phi in [0, 2pi)
  double angle_tol = 1e-9;
  double p_min = default_p_min;
  // When false, cells are kept whenever the closed form is evaluable even if
  // their success probability falls at or below p_min (unconstrained extrema).
  bool feasible_only = true;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidParameter("grid needs at least one point");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t k = 0; k < n; ++k) g[k] = lo + static_cast<double>(k) * (hi - lo) / (n - 1);
  return g;
}

// n interior points of (lo, hi) at cell midpoints; avoids the poles where the
// extremizer direction is gauge-degenerate.
inline std::vector<double> midpoint_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidParameter("grid needs at least one point");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = lo + (static_cast<double>(k) + 0.5) * (hi - lo) / static_cast<double>(n);
  return g;
}

// n equally spaced points on [0, 2pi).
inline std::vector<double> uniform_circle(std::size_t n) {
  if (n == 0) throw InvalidParameter("grid needs at least one point");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = static_cast<double>(k) * two_pi / static_cast<double>(n);
  return g;
}

namespace detail {

struct CellValue {
  double beta;
  double prob;
  bool feasible;
};

// Fixed-bath, fixed-control evaluator with the angle-independent factors
// precomputed; the per-Theta row is reusable across a Phi scan.
class SwitchObjective {
 public:
  SwitchObjective(const BathConfig& b, const ControlSpec& c, double p_min, bool feasible_only)
      : p_min_(p_min), feasible_only_(feasible_only), phi_(c.phi) {
    const AlphaCoeffs a = alpha_coeffs(b);
    a1_ = a.a1;
    a2_ = a.a2;
    a3_ = a.a3;
    a4_ = a.a4;
    zi_ = 1.0 + std::exp(-b.beta_i);
    zp4_ = 4.0 * (1.0 + std::exp(-b.beta_t1)) * (1.0 + std::exp(-b.beta_t2)) * zi_;
    r_cos_ = c.r * std::cos(c.theta);
    r_sin_ = c.r * std::sin(c.theta);
  }

  struct Row {
    double num0, num1, den0, den1;
  };

  Row row(double Theta) const {
    const double ct = std::cos(Theta);
    const double st = std::sin(Theta);
    const double w = 1.0 + r_cos_ * ct;
    const double y = ct + r_cos_;
    const double s = r_sin_ * st;
    return {zi_ * (a1_ * w - a2_ * y), 2.0 * a3_ * s, zi_ * (a4_ * w + a2_ * y), 2.0 * s};
  }

  CellValue at(const Row& r, double cos_dphi) const {
    const double num = r.num0 + r.num1 * cos_dphi;
    const double den = r.den0 + r.den1 * cos_dphi;
    const double prob = (num + den) / zp4_;
    const bool evaluable = den >= denominator_floor && num >= 1e-300;
    if (!evaluable || (feasible_only_ && !(prob > p_min_)))
      return {std::numeric_limits<double>::quiet_NaN(), prob, false};
    return {-std::log(num / den), prob, true};
  }

  CellValue at(double Theta, double Phi) const { return at(row(Theta), std::cos(Phi - phi_)); }

  double phi() const { return phi_; }

 private:
  double p_min_;
  bool feasible_only_;
  double phi_;
  double a1_, a2_, a3_, a4_, zi_, zp4_, r_cos_, r_sin_;
};

struct Candidate {
  double beta = 0.0;
  double prob = 0.0;
  double Theta = 0.0;
  double Phi = 0.0;
  bool valid = false;
};

// Tie-breaking among near-equal extrema: larger success probability first,
// then smaller Theta, then smaller Phi. `maximize` selects the beta sense.
inline bool improves(const Candidate& next, const Candidate& cur, bool maximize) {
  if (!cur.valid) return true;
  const double delta = maximize ? next.beta - cur.beta : cur.beta - next.beta;
  if (delta > 1e-12) return true;
  if (delta < -1e-12) return false;
  if (next.prob > cur.prob + 1e-12) return true;
  if (next.prob < cur.prob - 1e-12) return false;
  if (next.Theta != cur.Theta) return next.Theta < cur.Theta;
  return next.Phi < cur.Phi;
}

template <class F>
double golden_section_min(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int guard = 256;
  while (b - a > tol && guard-- > 0) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// One parabolic-interpolation step through (x-h, x, x+h); sharpens the
// argmin well below the golden-section noise floor on smooth objectives.
template <class F>
double parabolic_polish(F&& f, double x, double lo, double hi) {
  const double h = 1e-4;
  const double xm = std::max(lo, x - h);
  const double xp = std::min(hi, x + h);
  if (!(xm < x && x < xp)) return x;
  const double fm = f(xm);
  const double f0 = f(x);
  const double fp = f(xp);
  if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) return x;
  const double du = x - xm;
  const double dw = x - xp;
  const double num = du * du * (f0 - fp) - dw * dw * (f0 - fm);
  const double den = du * (f0 - fp) - dw * (f0 - fm);
  if (std::abs(den) < 1e-300) return x;
  const double cand = std::clamp(x - 0.5 * num / den, xm, xp);
  return f(cand) <= f0 ? cand : x;
}

// Local refinement of a coarse-grid winner: alternating golden-section on
// each coordinate inside a shrinking bracket, then a parabolic polish. Never
// returns a point worse (in the chosen sense) than the starting candidate.
inline Candidate refine(const SwitchObjective& obj, Candidate start, bool maximize,
                        double bracket_theta, double bracket_phi, const ExtremaOptions& opts,
                        bool optimize_phi) {
  const double inf = std::numeric_limits<double>::infinity();
  auto g = [&](double Theta, double Phi) {
    if (Theta < 0.0 || Theta > pi) return inf;
    const CellValue cell = obj.at(Theta, Phi);
    if (!cell.feasible) return inf;
    return maximize ? -cell.beta : cell.beta;
  };

  double T = start.Theta;
  double P = start.Phi;
  double val = g(T, P);
  double hT = bracket_theta;
  double hP = bracket_phi;
  for (int pass = 0; pass < 60; ++pass) {
    const double prev_T = T;
    const double prev_P = P;

    double cand = golden_section_min([&](double x) { return g(x, P); }, std::max(0.0, T - hT),
                                     std::min(pi, T + hT), 0.25 * opts.angle_tol);
    double cand_val = g(cand, P);
    if (cand_val <= val + 1e-13) {
      T = cand;
      val = cand_val;
    }
    if (optimize_phi) {
      cand = golden_section_min([&](double x) { return g(T, x); }, P - hP, P + hP,
                                0.25 * opts.angle_tol);
      cand_val = g(T, cand);
      if (cand_val <= val + 1e-13) {
        P = cand;
        val = cand_val;
      }
    }

    const double move_T = std::abs(T - prev_T);
    const double move_P = std::abs(P - prev_P);
    hT = std::min(bracket_theta, std::max(2.5 * move_T, 1e-5));
    hP = std::min(bracket_phi, std::max(2.5 * move_P, 1e-5));
    if (move_T < opts.angle_tol && move_P < opts.angle_tol) break;
  }

  for (int round = 0; round < 2; ++round) {
    T = parabolic_polish([&](double x) { return g(x, P); }, T, 0.0, pi);
    if (optimize_phi)
      P = parabolic_polish([&](double x) { return g(T, x); }, P,
                           -std::numeric_limits<double>::max(),
                           std::numeric_limits<double>::max());
  }

  const CellValue cell = obj.at(T, P);
  if (!cell.feasible) return start;
  Candidate out{cell.beta, cell.prob, T, P, true};
  const double keep = maximize ? out.beta - start.beta : start.beta - out.beta;
  return keep >= 0.0 ? out : start;
}

// Report through the public formula path; falls back to the objective's own
// value on the (measure-zero) denominator boundary where the normalized
// angles land a rounding step below the evaluability floor.
inline double public_beta(const BathConfig& b, const ControlSpec& c, const MeasureSpec& m,
                          const Candidate& cand) {
  try {
    return beta_f_general(b, c, m);
  } catch (const DegenerateDenominator&) {
    return cand.beta;
  }
}

}  // namespace detail

// Global extrema of beta_f over (Theta, Phi) on explicit grids followed by
// local refinement. Probability-excluded points never participate.
inline ExtremaResult find_extrema(const BathConfig& b, const ControlSpec& c,
                                  std::span<const double> theta_grid,
                                  std::span<const double> phi_grid,
                                  const ExtremaOptions& opts = {}) {
  const detail::SwitchObjective obj(b, c, opts.p_min, opts.feasible_only);

  std::vector<double> cosd(phi_grid.size());
  for (std::size_t j = 0; j < phi_grid.size(); ++j) cosd[j] = std::cos(phi_grid[j] - c.phi);

  detail::Candidate best_max, best_min;
  for (const double Theta : theta_grid) {
    const detail::SwitchObjective::Row row = obj.row(Theta);
    for (std::size_t j = 0; j < phi_grid.size(); ++j) {
      const detail::CellValue cell = obj.at(row, cosd[j]);
      if (!cell.feasible) continue;
      const detail::Candidate cand{cell.beta, cell.prob, Theta, phi_grid[j], true};
      if (detail::improves(cand, best_max, true)) best_max = cand;
      if (detail::improves(cand, best_min, false)) best_min = cand;
    }
  }
  if (!best_max.valid) throw NoFeasiblePoint();

  const double hT = theta_grid.size() > 1 ? pi / static_cast<double>(theta_grid.size() - 1) : pi;
  const double hP = two_pi / static_cast<double>(phi_grid.size());
  const detail::Candidate rmax = detail::refine(obj, best_max, true, hT, hP, opts, true);
  const detail::Candidate rmin = detail::refine(obj, best_min, false, hT, hP, opts, true);

  const MeasureSpec m_max{rmax.Theta, rmax.Phi};
  const MeasureSpec m_min{rmin.Theta, rmin.Phi};
  return {detail::public_beta(b, c, m_max, rmax), m_max, success_prob_general(b, c, m_max),
          detail::public_beta(b, c, m_min, rmin), m_min, success_prob_general(b, c, m_min)};
}

inline ExtremaResult find_extrema(const BathConfig& b, const ControlSpec& c,
                                  const ExtremaOptions& opts = {}) {
  const std::vector<double> tg = linspace(0.0, pi, opts.theta_points);
  const std::vector<double> pg = uniform_circle(opts.phi_points);
  return find_extrema(b, c, tg, pg, opts);
}

// Verification mode: exhaustive scan of a dense (Theta, Phi) grid with no
// refinement and no use of the Phi structure.
inline ExtremaResult brute_extrema(const BathConfig& b, const ControlSpec& c,
                                   std::size_t theta_points = 3601, std::size_t phi_points = 1441,
                                   double p_min = default_p_min) {
  const detail::SwitchObjective obj(b, c, p_min, true);
  const std::vector<double> tg = linspace(0.0, pi, theta_points);
  const std::vector<double> pg = uniform_circle(phi_points);
  std::vector<double> cosd(pg.size());
  for (std::size_t j = 0; j < pg.size(); ++j) cosd[j] = std::cos(pg[j] - c.phi);

  detail::Candidate best_max, best_min;
  for (const double Theta : tg) {
    const detail::SwitchObjective::Row row = obj.row(Theta);
    for (std::size_t j = 0; j < pg.size(); ++j) {
      const detail::CellValue cell = obj.at(row, cosd[j]);
      if (!cell.feasible) continue;
      const detail::Candidate cand{cell.beta, cell.prob, Theta, pg[j], true};
      if (detail::improves(cand, best_max, true)) best_max = cand;
      if (detail::improves(cand, best_min, false)) best_min = cand;
    }
  }
  if (!best_max.valid) throw NoFeasiblePoint();
  const MeasureSpec m_max{best_max.Theta, best_max.Phi};
  const MeasureSpec m_min{best_min.Theta, best_min.Phi};
  return {detail::public_beta(b, c, m_max, best_max), m_max, success_prob_general(b, c, m_max),
          detail::public_beta(b, c, m_min, best_min), m_min, success_prob_general(b, c, m_min)};
}

namespace detail {

inline void append_bath_metadata(std::vector<std::pair<std::string, std::string>>& meta,
                                 const BathConfig& b) {
  meta.emplace_back("beta_t1", format_double(b.beta_t1));
  meta.emplace_back("beta_t2", format_double(b.beta_t2));
  meta.emplace_back("beta_i", format_double(b.beta_i));
  if (b.beta_t1 > 0.0) meta.emplace_back("n", format_double(b.asymmetry()));
}

}  // namespace detail

// Theta of the beta_f maximum per control angle theta, with the measurement
// phase pinned to Phi = phi (= 0 in sweeps). Rows whose optimization finds no
// feasible point carry NaN and excluded = 1.
inline SweepTable optimal_theta_curve(const BathConfig& b, double r,
                                      std::span<const double> theta_grid,
                                      const ExtremaOptions& opts = {}) {
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("kind", "theta-curve");
  meta.emplace_back("tool_version", tool_version);
  detail::append_bath_metadata(meta, b);
  meta.emplace_back("r", format_double(r));
  meta.emplace_back("phi", format_double(0.0));
  meta.emplace_back("Phi", format_double(0.0));
  meta.emplace_back("Theta_points", std::to_string(opts.theta_points));

  SweepTable table({{"theta", {theta_grid.begin(), theta_grid.end()}}},
                   {"Theta_opt", "beta_f", "excluded"}, std::move(meta));
  const std::vector<double> tg = linspace(0.0, pi, opts.theta_points);

  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const ControlSpec c{r, theta_grid[i], 0.0};
    const detail::SwitchObjective obj(b, c, opts.p_min, opts.feasible_only);
    detail::Candidate best;
    for (const double Theta : tg) {
      const detail::CellValue cell = obj.at(Theta, 0.0);
      if (!cell.feasible) continue;
      const detail::Candidate cand{cell.beta, cell.prob, Theta, 0.0, true};
      if (detail::improves(cand, best, true)) best = cand;
    }
    if (!best.valid) {
      table.value(i, 2) = 1.0;
      continue;
    }
    const double hT = tg.size() > 1 ? pi / static_cast<double>(tg.size() - 1) : pi;
    const detail::Candidate refined = detail::refine(obj, best, true, hT, 0.0, opts, false);
    const MeasureSpec m{refined.Theta, 0.0};
    table.value(i, 0) = m.Theta;
    table.value(i, 1) = detail::public_beta(b, c, m, refined);
    table.value(i, 2) = 0.0;
  }
  return table;
}

// Temperature shift delta_beta = beta_f - beta_t1 over (theta, Theta) at a
// fixed phase offset Phi - phi of 0 (aligned) or pi (anti-aligned).
inline SweepTable heatmap(const BathConfig& b, double r, double delta_phi,
                          std::span<const double> theta_grid, std::span<const double> Theta_grid,
                          double p_min = default_p_min) {
  if (std::abs(delta_phi) > 1e-12 && std::abs(delta_phi - pi) > 1e-12)
    throw InvalidParameter("delta_phi must be 0 or pi");

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("kind", "heatmap");
  meta.emplace_back("tool_version", tool_version);
  detail::append_bath_metadata(meta, b);
  meta.emplace_back("r", format_double(r));
  meta.emplace_back("phi", format_double(0.0));
  meta.emplace_back("delta_phi", format_double(delta_phi));

  SweepTable table({{"theta", {theta_grid.begin(), theta_grid.end()}},
                    {"Theta", {Theta_grid.begin(), Theta_grid.end()}}},
                   {"delta_beta", "excluded"}, std::move(meta));

  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const ControlSpec c{r, theta_grid[i], 0.0};
    for (std::size_t j = 0; j < Theta_grid.size(); ++j) {
      const std::size_t row = table.row_index(i, j);
      const MeasureSpec m{Theta_grid[j], delta_phi};
      if (!(success_prob_general(b, c, m) > p_min)) {
        table.value(row, 1) = 1.0;
        continue;
      }
      try {
        table.value(row, 0) = beta_f_general(b, c, m) - b.beta_t1;
        table.value(row, 1) = 0.0;
      } catch (const DegenerateDenominator&) {
        table.value(row, 1) = 1.0;
      }
    }
  }
  return table;
}

// Globally optimized beta_f extrema, normalized to beta_t1, per bath-asymmetry
// ratio n and control purity r. The optimization runs over the measurement
// angles for every control angle theta on an inner grid, then extremizes over
// theta.
inline SweepTable extrema_vs_n(double beta_t1, double beta_i, std::vector<double> n_grid,
                               std::vector<double> r_list, std::size_t control_theta_points = 181,
                               const ExtremaOptions& opts = {}) {
  if (!(beta_t1 > 0.0)) throw InvalidParameter("extrema_vs_n needs beta_t1 > 0");
  std::sort(r_list.begin(), r_list.end());
  r_list.erase(std::unique(r_list.begin(), r_list.end()), r_list.end());

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("kind", "extrema-vs-n");
  meta.emplace_back("tool_version", tool_version);
  meta.emplace_back("beta_t1", format_double(beta_t1));
  meta.emplace_back("beta_i", format_double(beta_i));
  meta.emplace_back("control_theta_points", std::to_string(control_theta_points));
  meta.emplace_back("Theta_points", std::to_string(opts.theta_points));
  meta.emplace_back("Phi_points", std::to_string(opts.phi_points));

  SweepTable table({{"n", std::move(n_grid)}, {"r", r_list}},
                   {"beta_f_max_norm", "beta_f_min_norm"}, std::move(meta));

  const std::vector<double> control_thetas = linspace(0.0, pi, control_theta_points);
  for (std::size_t i = 0; i < table.axes()[0].grid.size(); ++i) {
    const BathConfig b{beta_t1, table.axes()[0].grid[i] * beta_t1, beta_i};
    for (std::size_t j = 0; j < r_list.size(); ++j) {
      double best_max = -std::numeric_limits<double>::infinity();
      double best_min = std::numeric_limits<double>::infinity();
      for (const double theta : control_thetas) {
        try {
          const ExtremaResult er = find_extrema(b, ControlSpec{r_list[j], theta, 0.0}, opts);
          best_max = std::max(best_max, er.beta_f_max);
          best_min = std::min(best_min, er.beta_f_min);
        } catch (const NoFeasiblePoint&) {
        }
      }
      const std::size_t row = table.row_index(i, j);
      if (std::isfinite(best_max)) {
        table.value(row, 0) = best_max / beta_t1;
        table.value(row, 1) = best_min / beta_t1;
      }
    }
  }
  return table;
}

}  // namespace ico
