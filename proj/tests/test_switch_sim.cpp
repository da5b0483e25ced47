#include <catch2/catch_amalgamated.hpp>

#include "ico/closed_form.hpp"
#include "ico/switch_sim.hpp"
#include "test_support.hpp"

using namespace ico;
using ico_test::Rng;

namespace {

// Eq-style reference for the identical-bath joint state: diagonal control
// blocks carry rho_T, coherence blocks carry rho_T rho_i rho_T with the
// control-state weights.
CMat4 expected_joint_identical(double beta_t, double beta_i, const ControlSpec& c) {
  const CMat2 rho_t = thermal_state(ThermalParams{beta_t}).matrix();
  const CMat2 rho_i = thermal_state(ThermalParams{beta_i}).matrix();
  const CMat2 coh = rho_t * rho_i * rho_t;
  CMat2 diag_block = diag2(0.5 * (1.0 + c.r * std::cos(c.theta)), 0.5 * (1.0 - c.r * std::cos(c.theta)));
  CMat4 expected = kron(diag_block, rho_t);
  CMat2 offdiag;
  offdiag(0, 1) = 0.5 * c.r * std::sin(c.theta) * std::polar(1.0, -c.phi);
  offdiag(1, 0) = 0.5 * c.r * std::sin(c.theta) * std::polar(1.0, c.phi);
  return expected + kron(offdiag, coh);
}

// Reference for the unnormalized postselected state with distinct baths.
CMat2 expected_conditional_general(const BathConfig& b, const ControlSpec& c,
                                   const MeasureSpec& m) {
  const CMat2 t1 = thermal_state(ThermalParams{b.beta_t1}).matrix();
  const CMat2 t2 = thermal_state(ThermalParams{b.beta_t2}).matrix();
  const CMat2 ti = thermal_state(ThermalParams{b.beta_i}).matrix();
  const double ct = std::cos(c.theta), cT = std::cos(m.Theta);
  const double coh = 2.0 * c.r * std::sin(m.Theta) * std::sin(c.theta) * std::cos(m.Phi - c.phi);
  CMat2 out = t1 * cplx{0.25 * (1.0 - c.r * ct) * (1.0 - cT)};
  out += t2 * cplx{0.25 * (1.0 + c.r * ct) * (1.0 + cT)};
  out += (t1 * ti * t2) * cplx{0.25 * coh};
  return out;
}

}  // namespace

TEST_CASE("control_state") {
  Rng rng(301);
  const DensityMatrix2 mixed = control_state({0.0, ico_test::uniform(rng, 0, pi), 1.0});
  CHECK(ico_test::max_diff(mixed.matrix(), diag2(0.5, 0.5)) < 1e-15);

  CHECK(ico_test::max_diff(control_state({1.0, 0.0, 0.0}).matrix(), diag2(1.0, 0.0)) < 1e-15);

  CMat2 plus;
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  CHECK(ico_test::max_diff(control_state({1.0, pi / 2, 0.0}).matrix(), plus) < 1e-15);

  CHECK_THROWS_AS(ControlSpec(1.5, 0.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(ControlSpec(-0.1, 0.0, 0.0), InvalidParameter);
}

TEST_CASE("angle normalization folds onto the canonical chart") {
  const ControlSpec folded{0.5, -0.3, 0.2};
  CHECK(folded.theta == Catch::Approx(0.3).margin(1e-15));
  CHECK(folded.phi == Catch::Approx(0.2 + pi).margin(1e-15));

  const MeasureSpec wrapped{pi / 2, two_pi + 0.1};
  CHECK(wrapped.Phi == Catch::Approx(0.1).margin(1e-15));

  const MeasureSpec anti = antipodal(MeasureSpec{0.4, 0.9});
  CHECK(anti.Theta == Catch::Approx(pi - 0.4).margin(1e-15));
  CHECK(anti.Phi == Catch::Approx(0.9 + pi).margin(1e-15));
}

TEST_CASE("switch_kraus with trivial channels") {
  const KrausChannel ident = KrausChannel::single(CMat2::identity());
  const auto ms = switch_kraus(ident, ident);
  CHECK(ico_test::max_diff(ms[0], CMat4::identity()) == 0.0);
  for (std::size_t k = 1; k < 16; ++k) CHECK(max_abs(ms[k]) == 0.0);
}

TEST_CASE("switch_kraus index convention: i is the channel-2 index") {
  const CMat2 a = pauli_x();        // channel 1
  const CMat2 b = diag2(1.0, 0.0);  // channel 2
  const auto ms = switch_kraus(KrausChannel::single(a), KrausChannel::single(b));
  const CMat2 ba = b * a;  // |0><0| block: K_i^(2) K_j^(1)
  const CMat2 ab = a * b;  // |1><1| block: K_j^(1) K_i^(2)
  const CMat4 expected = kron(diag2(1, 0), ba) + kron(diag2(0, 1), ab);
  CHECK(ico_test::max_diff(ms[0], expected) == 0.0);
  CHECK(ba(0, 1) == cplx{1.0});  // the two products differ, so the order is visible
  CHECK(ab(1, 0) == cplx{1.0});
}

TEST_CASE("switch completeness for thermal channels") {
  Rng rng(302);
  for (int k = 0; k < 10; ++k) {
    const KrausChannel e1 = thermal_kraus(ThermalParams{ico_test::uniform(rng, 0.0, 8.0)});
    const KrausChannel e2 = thermal_kraus(ThermalParams{ico_test::uniform(rng, 0.0, 8.0)});
    CMat4 sum;
    for (const CMat4& m : switch_kraus(e1, e2)) sum += adjoint(m) * m;
    CHECK(ico_test::max_diff(sum, CMat4::identity()) < 1e-12);
  }
}

TEST_CASE("apply_switch reproduces the identical-bath joint structure") {
  Rng rng(303);
  for (int k = 0; k < 40; ++k) {
    const double beta_t = ico_test::uniform(rng, 0.05, 8.0);
    const double beta_i = ico_test::uniform(rng, 0.05, 8.0);
    const ControlSpec c = ico_test::random_control(rng);
    const KrausChannel ch = thermal_kraus(ThermalParams{beta_t});
    const JointState4 joint =
        apply_switch(c, thermal_state(ThermalParams{beta_i}), ch, ch);
    CHECK(std::abs(trace(joint.matrix()) - cplx{1.0}) < 1e-12);
    CHECK(ico_test::max_diff(joint.matrix(), expected_joint_identical(beta_t, beta_i, c)) < 1e-12);
  }
}

TEST_CASE("apply_switch limiting cases") {
  const KrausChannel ch1 = thermal_kraus(ThermalParams{1.0});
  const KrausChannel ch2 = thermal_kraus(ThermalParams{2.0});
  const DensityMatrix2 rho_i = thermal_state(ThermalParams{1.0});

  // r = 0: no coherence block survives
  const JointState4 mixed = apply_switch({0.0, 1.1, 0.4}, rho_i, ch1, ch1);
  const CMat4 expect_mixed = kron(diag2(0.5, 0.5), thermal_state(ThermalParams{1.0}).matrix());
  CHECK(ico_test::max_diff(mixed.matrix(), expect_mixed) < 1e-12);

  // theta = 0, pure control: definite order E1 -> E2, fully thermalized at bath 2
  const JointState4 definite = apply_switch({1.0, 0.0, 0.0}, rho_i, ch1, ch2);
  const CMat4 expect_definite = kron(diag2(1.0, 0.0), thermal_state(ThermalParams{2.0}).matrix());
  CHECK(ico_test::max_diff(definite.matrix(), expect_definite) < 1e-12);
}

TEST_CASE("postselect in the computational basis recovers ordinary thermalization") {
  Rng rng(304);
  for (int k = 0; k < 20; ++k) {
    const double beta_t = ico_test::uniform(rng, 0.05, 6.0);
    const ControlSpec c = ico_test::random_control(rng);
    if (0.5 * (1.0 + c.r * std::cos(c.theta)) < 1e-6) continue;
    const KrausChannel ch = thermal_kraus(ThermalParams{beta_t});
    const JointState4 joint = apply_switch(c, thermal_state(ThermalParams{1.3}), ch, ch);
    const PostselectResult res = postselect(joint, MeasureSpec{0.0, 0.0});
    CHECK(ico_test::max_diff(res.rho_f.matrix(), thermal_state(ThermalParams{beta_t}).matrix()) <
          1e-12);
    CHECK(res.prob == Catch::Approx(0.5 * (1.0 + c.r * std::cos(c.theta))).margin(1e-12));
  }
}

TEST_CASE("postselect on an orthogonal outcome fails") {
  const KrausChannel ch = thermal_kraus(ThermalParams{1.0});
  const JointState4 joint =
      apply_switch({1.0, 0.0, 0.0}, thermal_state(ThermalParams{1.0}), ch, ch);
  CHECK_THROWS_AS(postselect(joint, MeasureSpec{pi, 0.0}), ZeroProbabilityPostselection);
}

TEST_CASE("worked numbers, identical baths") {
  const BathConfig b{1.0, 1.0, 1.0};
  const PostselectResult res =
      oracle_beta_f(b, ControlSpec{1.0, pi / 2, 0.0}, MeasureSpec{pi / 2, 0.0});
  CHECK(res.beta_f == Catch::Approx(1.3583364506903217).margin(1e-12));
  CHECK(res.prob == Catch::Approx(0.7050821001377772).margin(1e-12));
}

TEST_CASE("worked numbers, asymmetric baths") {
  const BathConfig b{1.0, 2.0, 1.0};
  const PostselectResult res =
      oracle_beta_f(b, ControlSpec{1.0, pi / 2, 0.0}, MeasureSpec{pi / 2, 0.0});
  CHECK(res.beta_f == Catch::Approx(1.8403102153460786).margin(1e-12));
  CHECK(res.prob == Catch::Approx(0.7396804649632875).margin(1e-12));
}

TEST_CASE("oracle limiting cases") {
  CHECK(oracle_beta_f({1.0, 1.0, 0.8}, {0.0, 0.7, 0.3}, {1.1, 2.2}).beta_f ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(oracle_beta_f({1.0, 2.0, 1.0}, {1.0, 0.0, 0.0}, {pi / 2, 0.0}).beta_f ==
        Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("outcome completeness and conditional diagonality") {
  Rng rng(305);
  for (int k = 0; k < 60; ++k) {
    const BathConfig b{ico_test::uniform(rng, 0.05, 8.0), ico_test::uniform(rng, 0.05, 8.0),
                       ico_test::uniform(rng, 0.05, 8.0)};
    const ControlSpec c = ico_test::random_control(rng);
    const MeasureSpec m = ico_test::random_measure(rng);
    PostselectResult res{validate_density(diag2(1, 0)), 0, 0, 0};
    try {
      res = oracle_beta_f(b, c, m);
    } catch (const ZeroProbabilityPostselection&) {
      continue;
    }
    CHECK(res.max_offdiag < 1e-12);
    try {
      const PostselectResult anti = oracle_beta_f(b, c, antipodal(m));
      CHECK(res.prob + anti.prob == Catch::Approx(1.0).margin(1e-12));
    } catch (const ZeroProbabilityPostselection& e) {
      CHECK(res.prob == Catch::Approx(1.0).margin(1e-11));
    }
  }
}

TEST_CASE("unnormalized conditional state matches the asymmetric-bath structure") {
  Rng rng(306);
  for (int k = 0; k < 60; ++k) {
    const BathConfig b{ico_test::uniform(rng, 0.05, 8.0), ico_test::uniform(rng, 0.05, 8.0),
                       ico_test::uniform(rng, 0.05, 8.0)};
    const ControlSpec c = ico_test::random_control(rng);
    const MeasureSpec m = ico_test::random_measure(rng);
    try {
      const PostselectResult res = oracle_beta_f(b, c, m);
      const CMat2 unnormalized = res.rho_f.matrix() * cplx{res.prob};
      CHECK(ico_test::max_diff(unnormalized, expected_conditional_general(b, c, m)) < 1e-12);
    } catch (const ZeroProbabilityPostselection&) {
    }
  }
}
