#include <catch2/catch_amalgamated.hpp>

#include "ico/qmat.hpp"
#include "test_support.hpp"

using namespace ico;
using ico_test::Rng;

namespace {
const cplx im{0.0, 1.0};
}

TEST_CASE("pauli algebra") {
  const CMat2 id = CMat2::identity();
  CHECK(max_abs(id * id - id) == 0.0);
  CHECK(max_abs(pauli_x() * pauli_x() - id) == 0.0);
  CHECK(max_abs(pauli_y() * pauli_y() - id) == 0.0);
  CHECK(max_abs(pauli_z() * pauli_z() - id) == 0.0);
  CHECK(max_abs(pauli_x() * pauli_y() - im * pauli_z()) == 0.0);
}

TEST_CASE("adjoint") {
  CHECK(max_abs(adjoint(CMat2::identity()) - CMat2::identity()) == 0.0);
  CHECK(max_abs(adjoint(pauli_y()) - pauli_y()) == 0.0);

  CMat2 raise;
  raise(0, 1) = 1.0;
  CMat2 lower;
  lower(1, 0) = 1.0;
  CHECK(max_abs(adjoint(raise) - lower) == 0.0);
}

TEST_CASE("kron fixed cases") {
  CHECK(max_abs(kron(CMat2::identity(), CMat2::identity()) - CMat4::identity()) == 0.0);

  const CMat4 upper_block = kron(diag2(1, 0), pauli_x());
  CHECK(upper_block(0, 1) == cplx{1.0});
  CHECK(upper_block(1, 0) == cplx{1.0});
  for (std::size_t i = 2; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(upper_block(i, j) == cplx{});

  const CMat4 lower_ident = kron(diag2(0, 1), CMat2::identity());
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(lower_ident(i, i) == (i < 2 ? cplx{} : cplx{1.0}));
}

TEST_CASE("trace") {
  CHECK(trace(CMat2::identity()) == cplx{2.0});
  CHECK(trace(pauli_z()) == cplx{});
  CHECK(trace(CMat4::identity()) == cplx{4.0});
}

TEST_CASE("kron is bilinear and multiplicative on traces") {
  Rng rng(101);
  for (int k = 0; k < 50; ++k) {
    const CMat2 a = ico_test::random_matrix<2>(rng);
    const CMat2 b = ico_test::random_matrix<2>(rng);
    const CMat2 c = ico_test::random_matrix<2>(rng);
    CHECK(max_abs(kron(a + b, c) - (kron(a, c) + kron(b, c))) < 1e-13);
    CHECK(max_abs(kron(c, a + b) - (kron(c, a) + kron(c, b))) < 1e-13);
    CHECK(std::abs(trace(kron(a, b)) - trace(a) * trace(b)) < 1e-13);
  }
}

TEST_CASE("diag_sqrt") {
  CHECK(max_abs(diag_sqrt(diag2(1, 0)) - diag2(1, 0)) == 0.0);
  const CMat2 s = diag_sqrt(diag2(0.25, 0.75));
  CHECK(s(0, 0).real() == Catch::Approx(0.5).margin(1e-15));
  CHECK(s(1, 1).real() == Catch::Approx(0.8660254037844386).margin(1e-15));
  CHECK(max_abs(diag_sqrt(diag2(1, 4)) - diag2(1, 2)) == 0.0);

  CMat2 offdiag = diag2(1, 0);
  offdiag(0, 1) = 1e-10;
  CHECK_THROWS_AS(diag_sqrt(offdiag), NonDiagonalInput);
  CHECK_THROWS_AS(diag_sqrt(diag2(cplx{1.0, 1e-10}, 0)), NonDiagonalInput);
  CHECK_THROWS_AS(diag_sqrt(diag2(1, -0.5)), NegativeDiagonal);

  Rng rng(102);
  for (int k = 0; k < 50; ++k) {
    const CMat2 d = diag2(ico_test::uniform(rng, 0, 4), ico_test::uniform(rng, 0, 4));
    const CMat2 root = diag_sqrt(d);
    CHECK(max_abs(root * root - d) < 1e-14);
  }
}

TEST_CASE("validate_density") {
  CHECK_NOTHROW(validate_density(diag2(0.5, 0.5)));
  CHECK_NOTHROW(validate_density(diag2(0.7, 0.3)));
  CHECK_THROWS_AS(validate_density(diag2(1.5, -0.5)), NotPSD);
  CHECK_THROWS_AS(validate_density(diag2(0.6, 0.6)), TraceNotOne);

  CMat2 skew = diag2(0.5, 0.5);
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(validate_density(skew), NotHermitian);

  try {
    validate_density(diag2(1.5, -0.5));
    FAIL("expected NotPSD");
  } catch (const NotPSD& e) {
    CHECK(e.violation == Catch::Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("hermitian eigenvalues, closed form and jacobi") {
  Rng rng(103);
  for (int k = 0; k < 50; ++k) {
    const CMat2 g = ico_test::random_matrix<2>(rng);
    const CMat2 h = g + adjoint(g);
    const auto ev2 = hermitian_eigenvalues(h);
    const auto ej2 = detail::jacobi_eigenvalues(h);
    CHECK(ev2[0] == Catch::Approx(ej2[0]).margin(1e-12));
    CHECK(ev2[1] == Catch::Approx(ej2[1]).margin(1e-12));

    // 4x4: spectrum of a kron product is the product set of the factor spectra
    const CMat2 g2 = ico_test::random_matrix<2>(rng);
    const CMat2 h2 = g2 + adjoint(g2);
    const auto ea = hermitian_eigenvalues(h);
    const auto eb = hermitian_eigenvalues(h2);
    std::array<double, 4> expected{ea[0] * eb[0], ea[0] * eb[1], ea[1] * eb[0], ea[1] * eb[1]};
    std::sort(expected.begin(), expected.end());
    const auto got = detail::jacobi_eigenvalues(kron(h, h2));
    for (int i = 0; i < 4; ++i) CHECK(got[i] == Catch::Approx(expected[i]).margin(1e-11));
  }
}
