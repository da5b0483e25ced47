#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "ico/params.hpp"
#include "ico/qmat.hpp"
#include "ico/thermal.hpp"

namespace ico {

// rho_c = (I + n.sigma)/2 with Bloch vector
// n = (r sin(theta) cos(phi), r sin(theta) sin(phi), r cos(theta)).
inline DensityMatrix2 control_state(const ControlSpec& c) {
  const double nx = c.r * std::sin(c.theta) * std::cos(c.phi);
  const double ny = c.r * std::sin(c.theta) * std::sin(c.phi);
  const double nz = c.r * std::cos(c.theta);
  CMat2 m = diag2(0.5 * (1.0 + nz), 0.5 * (1.0 - nz));
  m(0, 1) = 0.5 * cplx{nx, -ny};
  m(1, 0) = 0.5 * cplx{nx, ny};
  return validate_density(m);
}

// The 16 SWITCH Kraus operators
//   M_ij = |0><0|_c (x) K_i^(2) K_j^(1)  +  |1><1|_c (x) K_j^(1) K_i^(2),
// where i indexes the Kraus set of e2 and j the set of e1. Control |0>
// routes the system through e1 first, then e2. The output enumerates i as
// the outer index.
inline std::array<CMat4, 16> switch_kraus(const KrausChannel& e1, const KrausChannel& e2) {
  const CMat2 proj0 = diag2(1.0, 0.0);
  const CMat2 proj1 = diag2(0.0, 1.0);
  std::array<CMat4, 16> ms;
  std::size_t k = 0;
  for (const CMat2& ki2 : e2.ops())
    for (const CMat2& kj1 : e1.ops())
      ms[k++] = kron(proj0, ki2 * kj1) + kron(proj1, kj1 * ki2);
  return ms;
}

// A 4x4 control (x) system density matrix. The PSD floor is looser than for
// 2x2 states because the 16-operator Kraus sum accumulates more rounding.
class JointState4 {
 public:
  explicit JointState4(const CMat4& m, double herm_tol = 1e-12, double trace_tol = 1e-12,
                       double psd_floor = 1e-10)
      : m_(m) {
    double herm = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        herm = std::max(herm, std::abs(m(i, j) - std::conj(m(j, i))));
    if (herm > herm_tol) throw NotHermitian(herm);
    const double tr_dev = std::abs(trace(m) - cplx{1.0});
    if (tr_dev > trace_tol) throw TraceNotOne(tr_dev);
    const double lo = detail::jacobi_eigenvalues(m)[0];
    if (lo < -psd_floor) throw NotPSD(-lo);
  }

  const CMat4& matrix() const { return m_; }

 private:
  CMat4 m_;
};

// Joint evolution S(rho_c (x) rho) = sum_ij M_ij (rho_c (x) rho) M_ij^dag.
inline JointState4 apply_switch(const ControlSpec& c, const DensityMatrix2& rho,
                                const KrausChannel& e1, const KrausChannel& e2) {
  const CMat4 in = kron(control_state(c).matrix(), rho.matrix());
  CMat4 out;
  for (const CMat4& m : switch_kraus(e1, e2)) out += m * in * adjoint(m);
  return JointState4(out);
}

struct PostselectResult {
  DensityMatrix2 rho_f;  // normalized conditional system state
  double prob;           // postselection success probability
  double beta_f;         // effective beta_f*Delta of rho_f
  double max_offdiag;    // largest off-diagonal magnitude of the unnormalized block
};

// Probability floor below which a postselected state is numerically
// meaningless (the conditional state becomes 0/0).
inline constexpr double default_p_min = 1e-12;

// Project the control qubit of `joint` onto
// |psi_c^m> = cos(Theta/2)|0> + e^{i Phi} sin(Theta/2)|1>,
// normalize the surviving system block and extract its effective temperature.
inline PostselectResult postselect(const JointState4& joint, const MeasureSpec& m,
                                   double p_min = default_p_min) {
  const std::array<cplx, 2> psi = {std::cos(0.5 * m.Theta),
                                   std::polar(std::sin(0.5 * m.Theta), m.Phi)};
  CMat2 block;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const cplx weight = std::conj(psi[a]) * psi[b];
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 2; ++t)
          block(s, t) += weight * joint.matrix()(2 * a + s, 2 * b + t);
    }
  const double prob = trace(block).real();
  if (prob < p_min) throw ZeroProbabilityPostselection(prob);
  DensityMatrix2 rho_f = validate_density(block * cplx{1.0 / prob});
  const double beta_f = beta_from_state(rho_f);
  return {rho_f, prob, beta_f, max_offdiag(block)};
}

// Ground-truth oracle: thermal channels at (beta_t1, beta_t2), system prepared
// thermally at beta_i, SWITCH applied, control postselected along m.
inline PostselectResult oracle_beta_f(const BathConfig& baths, const ControlSpec& c,
                                      const MeasureSpec& m, double p_min = default_p_min) {
  const KrausChannel e1 = thermal_kraus(ThermalParams{baths.beta_t1});
  const KrausChannel e2 = thermal_kraus(ThermalParams{baths.beta_t2});
  const DensityMatrix2 rho_i = thermal_state(ThermalParams{baths.beta_i});
  return postselect(apply_switch(c, rho_i, e1, e2), m, p_min);
}

}  // namespace ico
