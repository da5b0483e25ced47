#pragma once

#include <array>
#include <cmath>
#include <span>

#include "ico/errors.hpp"
#include "ico/qmat.hpp"

namespace ico {

// Dimensionless product beta*Delta characterizing a thermal state of the
// two-level system with Hamiltonian H = Delta |1><1|. Zero is accepted as the
// maximally mixed boundary case.
struct ThermalParams {
  double beta_delta;

  explicit ThermalParams(double beta_delta_) : beta_delta(beta_delta_) {
    if (!std::isfinite(beta_delta) || beta_delta < 0.0)
      throw InvalidParameter("beta*Delta must be finite and nonnegative");
  }
};

// Gibbs state diag(1, e^{-beta Delta}) / (1 + e^{-beta Delta}).
inline DensityMatrix2 thermal_state(const ThermalParams& p) {
  const double boltz = std::exp(-p.beta_delta);
  const double z = 1.0 + boltz;
  return validate_density(diag2(1.0 / z, boltz / z));
}

// Effective beta_f*Delta of a diagonal state: -ln(rho_11 / rho_00).
inline double beta_from_state(const DensityMatrix2& rho, double diag_tol = 1e-10) {
  const double off = max_offdiag(rho.matrix());
  if (off > diag_tol) throw NonDiagonalState(off);
  const double p0 = rho(0, 0).real();
  const double p1 = rho(1, 1).real();
  if (p0 <= 1e-300 || p1 <= 1e-300) throw DegeneratePopulation(std::min(p0, p1));
  return -std::log(p1 / p0);
}

// An ordered set of exactly four Kraus operators. The CPTP completeness sum
// is not enforced at construction so that check_cptp can quantify violations;
// thermal_kraus always produces a complete set.
class KrausChannel {
 public:
  explicit KrausChannel(const std::array<CMat2, 4>& ops) : ops_(ops) {}

  // Single-operator channel, padded with zero operators.
  static KrausChannel single(const CMat2& k) { return KrausChannel({k, CMat2{}, CMat2{}, CMat2{}}); }

  std::span<const CMat2, 4> ops() const { return ops_; }

 private:
  std::array<CMat2, 4> ops_;
};

// Max-norm of sum_i K_i^dag K_i - I.
inline double check_cptp(const KrausChannel& ch) {
  CMat2 sum;
  for (const CMat2& k : ch.ops()) sum += adjoint(k) * k;
  return max_abs(sum - CMat2::identity());
}

// Thermalizing channel toward thermal_state(p):
// K_1 = A/sqrt2, K_2 = A sx/sqrt2, K_3 = A sy/sqrt2, K_4 = A sz/sqrt2,
// with A = sqrt(rho_thermal). The (I, sx, sy, sz) order is fixed so the
// SWITCH operator enumeration stays deterministic.
inline KrausChannel thermal_kraus(const ThermalParams& p) {
  const CMat2 a = diag_sqrt(thermal_state(p).matrix());
  const cplx inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return KrausChannel({a * inv_sqrt2, (a * pauli_x()) * inv_sqrt2, (a * pauli_y()) * inv_sqrt2,
                       (a * pauli_z()) * inv_sqrt2});
}

// E(rho) = sum_i K_i rho K_i^dag.
inline DensityMatrix2 apply_channel(const KrausChannel& ch, const DensityMatrix2& rho) {
  CMat2 out;
  for (const CMat2& k : ch.ops()) out += k * rho.matrix() * adjoint(k);
  return validate_density(out);
}

}  // namespace ico
