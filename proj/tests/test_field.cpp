#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/field.hpp"

using namespace mdlab;
using namespace mdlab::field;

namespace {

PolarField constant_field(const Grid& g, double R, double chi, const spinor::Dyad& d) {
  return PolarField::from_polar(g, std::vector<double>(g.size(), R),
                                std::vector<double>(g.size(), chi),
                                std::vector<spinor::Dyad>(g.size(), d));
}

spinor::Dyad canonical() {
  return spinor::dyad_normalize(spinor::Spinor2::lower(1, 0), spinor::Spinor2::lower(0, 1));
}

double max_interior_diff(const Grid& g, const std::vector<double>& a,
                         const std::function<double(std::size_t)>& b) {
  double err = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto ijk = g.ijk(q);
    if (!g.interior(ijk[0], ijk[1], ijk[2])) continue;
    err = std::max(err, std::abs(a[q] - b(q)));
  }
  return err;
}

}  // namespace

TEST_CASE("polar decomposition reproduces the components") {
  const Grid g = Grid::cube(10, 0.1, {0.2, -0.1, 0.3});
  const fixtures::SmoothRandom sr(5);
  const PolarField p = PolarField::from_components(sr.components(g));
  CHECK(p.reconstruction_error() < 1e-12);
  for (std::size_t q = 0; q < g.size(); ++q) {
    REQUIRE(p.R()[q] > 0.0);
    const auto& d = p.dyads()[q];
    REQUIRE(std::abs(spinor::contract(d.iota, d.o) - 1.0) < 1e-12);
    REQUIRE(d.o.c0.real() >= 0.0);
  }
}

TEST_CASE("a zero of R is a degeneracy error") {
  const Grid g = Grid::cube(6, 0.1, {0, 0, 0});
  const fixtures::SmoothRandom sr(6);
  SpinorComponents c = sr.components(g);
  const std::size_t q = g.index(3, 2, 1);
  c.U0[q] = c.U1[q] = 0.0;
  try {
    (void)PolarField::from_components(c);
    FAIL("expected DegeneracyError");
  } catch (const DegeneracyError& e) {
    CHECK(std::string(e.what()).find("(3,2,1)") != std::string::npos);
  }
}

TEST_CASE("Dirac residual on constant fields matches hand evaluation") {
  // U = sqrt(eps)(1,0), V = sqrt(eps)(0,1), A = 0: only the mass terms
  // survive; cartesian_1 and cartesian_4 equal i sqrt(eps)(m - E), 2 and 3 vanish.
  const double eps = 1e-6, m = 1.0, E = 0.5;
  const Grid g = Grid::cube(8, 0.2, {0, 0, 0});
  const PolarField p = constant_field(g, eps, 0.0, canonical());
  const PotentialField A(g, E, m, 1.0);
  const ResidualReport r = dirac_residual(p, A);
  const double expect = std::sqrt(eps) * (m - E);
  CHECK(r.at("cartesian_1").max_norm == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.at("cartesian_4").max_norm == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.at("cartesian_2").max_norm < 1e-18);
  CHECK(r.at("cartesian_3").max_norm < 1e-18);
  // L2 over the 4^3 interior points
  CHECK(r.at("cartesian_1").l2_norm == doctest::Approx(expect * std::sqrt(64 * 0.008)).epsilon(1e-12));
  CHECK(r.points == 64);
}

TEST_CASE("both Dirac assemblies agree on random smooth fields") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Grid g = Grid::cube(9, 0.15, {0.1 * seed, 0, -0.2});
    const fixtures::SmoothRandom sr(seed);
    const PolarField p = PolarField::from_components(sr.components(g));
    const PotentialField A = sr.potential(g, 0.4, 1.1, 0.8);
    const ResidualReport r = dirac_residual(p, A);
    CHECK(r.at("assembly_mismatch").max_norm < 1e-10);
    CHECK(r.max_norm("cartesian_") > 1e-3);  // random fields are not solutions
  }
}

TEST_CASE("mismatched grids are a usage error") {
  const Grid a = Grid::cube(6, 0.1, {0, 0, 0});
  const Grid b = Grid::cube(6, 0.2, {0, 0, 0});
  const fixtures::SmoothRandom sr(2);
  const PolarField p = PolarField::from_components(sr.components(a));
  CHECK_THROWS_AS(dirac_residual(p, PotentialField(b)), UsageError);
  CHECK_THROWS_AS(klein_gordon_residual(p, PotentialField(b)), UsageError);
  CHECK_THROWS_AS(maxwell_residual(PotentialField(b), p), UsageError);
}

TEST_CASE("gauged plane wave solves the Dirac system to stencil accuracy") {
  const fixtures::GaugedPlaneWave pw;
  double prev = 0.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const Grid g = Grid::cube(9, h, {0.3, 0.2, -0.1});
    const PolarField p = PolarField::from_components(pw.components(g));
    const ResidualReport r = dirac_residual(p, pw.potential(g));
    CHECK(r.at("assembly_mismatch").max_norm < 1e-12);
    if (prev > 0.0) CHECK(r.max_norm("cartesian_") < prev / 12.0);
    prev = r.max_norm("cartesian_");
  }
  CHECK(prev < 1e-7);
}

TEST_CASE("potential_from_dirac recovers the analytic potential") {
  const fixtures::GaugedPlaneWave pw;
  double prev = 0.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const Grid g = Grid::cube(9, h, {0.3, 0.2, -0.1});
    const PolarField p = PolarField::from_components(pw.components(g));
    const DiracPotential D = potential_from_dirac(p, pw.E, pw.m, pw.e);
    double err = 0.0;
    for (int a = 0; a < 4; ++a)
      err = std::max(err, max_interior_diff(g, D.A.A[a],
                                            [&](std::size_t q) { return pw.A_exact(g.point(q))[a]; }));
    // finite-difference error at least second order
    CHECK(err < 10.0 * h * h * 1e-2);
    if (prev > 0.0) CHECK(err < prev / 4.0);
    prev = err;
    CHECK(D.reality_violation < 1e-5);
  }
}

TEST_CASE("potential_from_dirac on a free constant configuration agrees with the closed-form A0") {
  // static non-canonical dyad, chi = 0, R const, E = m
  const double m = 1.0, e = 0.5;
  const spinor::Dyad d = spinor::dyad_normalize(spinor::Spinor2::lower(2, 0), spinor::Spinor2::lower(0, 1));
  const Grid g = Grid::cube(7, 0.1, {0, 0, 0});
  const PolarField p = constant_field(g, 0.7, 0.0, d);
  const auto b3 = a0_formula(p, m, m, e);
  const DiracPotential D = potential_from_dirac(p, m, m, e);
  // sum of moduli^2 = 2 + 1/2, so A^0 = (m/2e)(2.5 - 2)
  const double hand = m / (2 * e) * 0.5;
  const std::size_t q = g.index(3, 3, 3);
  CHECK(b3[q].real() == doctest::Approx(hand).epsilon(1e-13));
  CHECK(std::abs(b3[q].imag()) < 1e-14);
  CHECK(D.A.A[0][q] == doctest::Approx(hand).epsilon(1e-13));

  // canonical dyad: bracket vanishes, no derivatives, A^0 = 0
  const PolarField c = constant_field(g, 0.7, 0.0, canonical());
  CHECK(std::abs(a0_formula(c, m, m, e)[q]) < 1e-14);
}

TEST_CASE("a0_formula agrees with potential_from_dirac on random fields") {
  for (std::uint64_t seed = 11; seed <= 20; ++seed) {
    const Grid g = Grid::cube(8, 0.12, {0, 0.1, 0.2});
    const fixtures::SmoothRandom sr(seed);
    const PolarField p = PolarField::from_components(sr.components(g));
    const double E = 0.3, m = 1.2, e = 0.9;
    const auto b3 = a0_formula(p, E, m, e);
    const DiracPotential D = potential_from_dirac(p, E, m, e);
    double err = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto ijk = g.ijk(q);
      if (!g.interior(ijk[0], ijk[1], ijk[2])) continue;
      err = std::max(err, std::abs(b3[q] - cplx(D.A.A[0][q], D.imag[q][0])));
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("reality conditions") {
  const Grid g = Grid::cube(9, 0.1, {0, 0, 0});
  SUBCASE("random fields violate them") {
    const fixtures::SmoothRandom sr(3);
    const PolarField p = PolarField::from_components(sr.components(g));
    const ResidualReport r = reality_residual(p, 1.0);
    CHECK(r.at("reality_uu").max_norm > 1e-3);
    CHECK(r.at("reality_vv").max_norm > 1e-3);
    CHECK(r.at("reality_uv").max_norm > 1e-3);
  }
  SUBCASE("swapping u and v exchanges the two divergence conditions") {
    const fixtures::SmoothRandom sr(4);
    SpinorComponents c = sr.components(g);
    const PolarField p = PolarField::from_components(c);
    std::swap(c.U0, c.V0);
    std::swap(c.U1, c.V1);
    const PolarField s = PolarField::from_components(c);
    const RealityFields a = reality_fields(p, 1.3), b = reality_fields(s, 1.3);
    const std::size_t q = g.index(4, 4, 4);
    CHECK(std::abs(a.uu[q] - b.vv[q]) < 1e-14);
    CHECK(std::abs(a.vv[q] - b.uu[q]) < 1e-14);
    CHECK(std::abs(a.uu[q]) > 1e-4);
  }
  SUBCASE("an exact solution satisfies them") {
    const fixtures::GaugedPlaneWave pw;
    const Grid gg = Grid::cube(9, 0.025, {0.3, 0.2, -0.1});
    const PolarField p = PolarField::from_components(pw.components(gg));
    CHECK(reality_residual(p, pw.m).max_norm() < 1e-7);
  }
}

TEST_CASE("Maxwell residual") {
  SUBCASE("exterior Coulomb potential is harmonic") {
    const Grid g = Grid::cube(24, 0.02, {2.0, 2.0, 2.0});
    PotentialField A(g, 0.5, 1.0, 1.0);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto x = g.point(q);
      A.A[0][q] = 3.0 / std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    const SpinorComponents vacuum(g);
    const ResidualReport r = maxwell_residual(A, vacuum);
    CHECK(r.at("maxwell_0").max_norm < 1e-8);
    CHECK(r.at("lorenz").max_norm == 0.0);
  }
  SUBCASE("A^1 = x has unit Lorenz residual") {
    const Grid g = Grid::cube(8, 0.1, {0, 0, 0});
    PotentialField A(g);
    for (std::size_t q = 0; q < g.size(); ++q) A.A[1][q] = g.point(q)[0];
    const ResidualReport r = maxwell_residual(A, SpinorComponents(g));
    CHECK(r.at("lorenz").max_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.at("maxwell_1").max_norm < 1e-10);
  }
  SUBCASE("constant canonical field sources a quadratic potential") {
    // j^0 = 2R, so A^0 = (4 pi e 2R / 6) |x|^2 solves the Poisson form
    const double R = 0.3, e = 0.7;
    const Grid g = Grid::cube(8, 0.1, {0, 0, 0});
    const PolarField p = constant_field(g, R, 0.0, canonical());
    PotentialField A(g, 0.0, 1.0, e);
    const double c = 4.0 * M_PI * e * 2.0 * R / 6.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto x = g.point(q);
      A.A[0][q] = c * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    CHECK(maxwell_residual(A, p).max_norm() < 1e-10);
    CHECK(maxwell_residual(A, p, 2.0).at("maxwell_0").max_norm ==
          doctest::Approx(4.0 * M_PI * e * 2.0 * R).epsilon(1e-10));
  }
}

TEST_CASE("Klein-Gordon residual") {
  SUBCASE("free plane wave with E^2 = m^2 + k^2") {
    const double m = 1.0, k = 1.0;
    const double E = std::sqrt(m * m + k * k);
    const Grid g = Grid::cube(12, 0.02, {0, 0, 0.4});
    SpinorComponents c(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const cplx f = std::exp(cplx(0, k * g.point(q)[2]));
      c.U0[q] = cplx(0.6, 0.2) * f;
      c.U1[q] = cplx(-0.1, 0.5) * f;
      c.V0[q] = 0.3;
      c.V1[q] = 1.0;
    }
    const PolarField p = PolarField::from_components(c);
    CHECK(klein_gordon_residual(p, PotentialField(g, E, m, 1.0)).max_norm() < 1e-8);
  }
  SUBCASE("exact Dirac solutions satisfy the second-order equations; residual shrinks under halving h") {
    const fixtures::GaugedPlaneWave pw;
    std::vector<double> res;
    for (double h : {0.1, 0.05, 0.025}) {
      const Grid g = Grid::cube(9, h, {0.3, 0.2, -0.1});
      const PolarField p = PolarField::from_components(pw.components(g));
      res.push_back(klein_gordon_residual(p, pw.potential(g)).max_norm());
    }
    CHECK(res[1] < res[0] / 4.0);
    CHECK(res[2] < res[1] / 4.0);
    CHECK(res[2] < 1e-6);
  }
  SUBCASE("random fields violate the second-order equations") {
    const Grid g = Grid::cube(9, 0.1, {0, 0, 0});
    const fixtures::SmoothRandom sr(8);
    const PolarField p = PolarField::from_components(sr.components(g));
    CHECK(klein_gordon_residual(p, sr.potential(g, 0.3, 1.0, 1.0)).max_norm() > 1e-3);
  }
}

TEST_CASE("current") {
  const Grid g = Grid::cube(5, 0.1, {0, 0, 0});
  SUBCASE("canonical dyad, R = 1") {
    const CurrentField j = current(constant_field(g, 1.0, 0.0, canonical()));
    CHECK(j.j[0][0] == doctest::Approx(2.0).epsilon(1e-15));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(j.j[k][0]) < 1e-15);
    CHECK(j.lambda_sq[0] == 0.0);
  }
  SUBCASE("j.j = 4 R^2 and both routes agree on random fields") {
    const fixtures::SmoothRandom sr(9);
    const PolarField p = PolarField::from_components(sr.components(g));
    const CurrentField j = current(p);
    const auto jc = current_from_components(p.components());
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double jj = j.j[0][q] * j.j[0][q] - j.j[1][q] * j.j[1][q] - j.j[2][q] * j.j[2][q] -
                        j.j[3][q] * j.j[3][q];
      const double R = p.R()[q];
      // sqrt2 R (l + n) squared with l.n = 1 gives 4 R^2
      REQUIRE(jj == doctest::Approx(4.0 * R * R).epsilon(1e-12));
      for (int a = 0; a < 4; ++a) REQUIRE(std::abs(j.j[a][q] - jc[a][q]) < 1e-12);
      REQUIRE(j.time_sum[q] / std::sqrt(2.0) ==
              doctest::Approx(std::sqrt(1.0 + 0.5 * j.lambda_sq[q])).epsilon(1e-12));
    }
  }
  SUBCASE("charge integral by both routes") {
    const fixtures::SmoothRandom sr(10);
    const PolarField p = PolarField::from_components(sr.components(g));
    const ChargeIntegrals c = charge_integrals(p);
    CHECK(c.from_current == doctest::Approx(c.from_dyad).epsilon(1e-12));
    CHECK(c.from_current > 0.0);
  }
}
