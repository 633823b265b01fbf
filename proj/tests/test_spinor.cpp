#include <cmath>
#include <random>

#include "doctest.h"
#include "mdlab/errors.hpp"
#include "mdlab/spinor.hpp"

using namespace mdlab;
using namespace mdlab::spinor;

namespace {

const double s2 = std::sqrt(2.0);

bool close(cplx a, cplx b, double tol = 1e-14) { return std::abs(a - b) <= tol; }

Dyad canonical() { return dyad_normalize(Spinor2::lower(1, 0), Spinor2::lower(0, 1)); }

}  // namespace

TEST_CASE("raise applies eps^{AB}") {
  const Spinor2 a = raise(Spinor2::lower(1, 0));
  CHECK(a.pos == Index::upper);
  CHECK(close(a.c0, 0.0));
  CHECK(close(a.c1, -1.0));
  const Spinor2 b = raise(Spinor2::lower(0, 1));
  CHECK(close(b.c0, 1.0));
  CHECK(close(b.c1, 0.0));
}

TEST_CASE("raise and lower reject the wrong index position") {
  CHECK_THROWS_AS(raise(Spinor2::upper(1, 0)), UsageError);
  CHECK_THROWS_AS(lower(Spinor2::lower(1, 0)), UsageError);
}

TEST_CASE("lower undoes raise on 1000 random spinors") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const Spinor2 x = random_spinor(rng);
    const Spinor2 y = lower(raise(x));
    REQUIRE(y.c0 == x.c0);
    REQUIRE(y.c1 == x.c1);
  }
}

TEST_CASE("contraction of the canonical pair") {
  const Spinor2 o = Spinor2::lower(1, 0), io = Spinor2::lower(0, 1);
  CHECK(close(contract(io, o), 1.0));
  CHECK(close(contract(o, io), -1.0));
}

TEST_CASE("dyad_normalize") {
  SUBCASE("canonical dyad is left unchanged") {
    const Dyad d = canonical();
    CHECK(close(d.o.c0, 1.0));
    CHECK(close(d.o.c1, 0.0));
    CHECK(close(d.iota.c0, 0.0));
    CHECK(close(d.iota.c1, 1.0));
  }
  SUBCASE("o=(2,0), iota=(0,1) is split symmetrically") {
    // iota^A o_A = 2, each member scaled by 1/sqrt(2)
    const Dyad d = dyad_normalize(Spinor2::lower(2, 0), Spinor2::lower(0, 1));
    CHECK(close(d.o.c0, s2));
    CHECK(close(d.iota.c1, 1.0 / s2));
    CHECK(close(contract(d.iota, d.o), 1.0));
  }
  SUBCASE("parallel spinors are degenerate") {
    CHECK_THROWS_AS(dyad_normalize(Spinor2::lower(1, 0), Spinor2::lower(1, 0)), DegeneracyError);
  }
  SUBCASE("sign branch has Re o_0 >= 0") {
    const Dyad d = dyad_normalize(Spinor2::lower(-1, 0), Spinor2::lower(0, -1));
    CHECK(close(d.o.c0, 1.0));
    CHECK(close(d.iota.c1, 1.0));
    const Dyad e = dyad_normalize(Spinor2::lower(cplx(0, -1), 0), Spinor2::lower(0, cplx(0, 1)));
    CHECK(e.o.c0.imag() >= 0.0);
  }
}

TEST_CASE("canonical tetrad by direct contraction") {
  // o^A = (0,-1), iota^A = (1,0): l picks sigma_{11}, n picks sigma_{00}.
  const NullTetrad t = tetrad_from_dyad(canonical());
  CHECK(close(t.l[0], 1 / s2));
  CHECK(close(t.l[3], -1 / s2));
  CHECK(close(t.n[0], 1 / s2));
  CHECK(close(t.n[3], 1 / s2));
  CHECK(close(t.l[1], 0.0));
  CHECK(close(t.n[2], 0.0));
  CHECK(close(dot(t.l, t.n), 1.0));
  // m = -(0, 1, i, 0)/sqrt2
  CHECK(close(t.m[1], -1 / s2));
  CHECK(close(t.m[2], cplx(0, -1 / s2)));
  const StaticityVector sv = staticity(t);
  CHECK(sv.time_sum == doctest::Approx(s2).epsilon(1e-15));
  CHECK(sv.lambda_sq == doctest::Approx(0.0));
}

TEST_CASE("tetrad built from the Pauli matrices directly") {
  // Independent route: l^a = (1/sqrt2) conj(o^T) P_a o with o the upper
  // index column, P = (I, sx, sy, sz).
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    const Dyad d = random_dyad(rng);
    const Spinor2 ou = raise(d.o);
    const cplx x0 = ou.c0, x1 = ou.c1;
    const cplx l0 = (std::norm(x0) + std::norm(x1)) / s2;
    const cplx l1 = (x0 * std::conj(x1) + x1 * std::conj(x0)) / s2;
    const cplx l2 = cplx(0, -1) * (x0 * std::conj(x1) - x1 * std::conj(x0)) / s2;
    const cplx l3 = (std::norm(x0) - std::norm(x1)) / s2;
    const NullTetrad t = tetrad_from_dyad(d);
    CHECK(close(t.l[0], l0, 1e-13));
    CHECK(close(t.l[1], l1, 1e-13));
    CHECK(close(t.l[2], l2, 1e-13));
    CHECK(close(t.l[3], l3, 1e-13));
  }
}

TEST_CASE("decompose_vector") {
  const NullTetrad t = tetrad_from_dyad(canonical());
  SUBCASE("X = l") {
    const auto c = decompose_vector(t.l, t);
    CHECK(close(c.along_n, 0.0));
    CHECK(close(c.along_l, 1.0));
    CHECK(close(c.along_m, 0.0));
    CHECK(close(c.along_mbar, 0.0));
  }
  SUBCASE("X = m") {
    const auto c = decompose_vector(t.m, t);
    CHECK(close(c.along_n, 0.0));
    CHECK(close(c.along_l, 0.0));
    CHECK(close(c.along_m, 1.0));
    CHECK(close(c.along_mbar, 0.0));
  }
  SUBCASE("random X reconstructs") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int n = 0; n < 200; ++n) {
      const NullTetrad tt = tetrad_from_dyad(random_dyad(rng));
      MinkowskiVector X;
      for (int a = 0; a < 4; ++a) X[a] = cplx(nd(rng), nd(rng));
      const MinkowskiVector Y = reconstruct(decompose_vector(X, tt), tt);
      for (int a = 0; a < 4; ++a) REQUIRE(std::abs(Y[a] - X[a]) < 1e-10);
    }
  }
}

TEST_CASE("boosted dyad has lambda^2 > 0") {
  // o = (a,0), iota = (0,1/a): s = l + n along z with |s| = |a^-2 - a^2|/sqrt2
  const double a = 1.7;
  const Dyad d = dyad_normalize(Spinor2::lower(a, 0), Spinor2::lower(0, 1 / a));
  const StaticityVector sv = staticity(tetrad_from_dyad(d));
  const double expect = std::abs(1 / (a * a) - a * a) / s2;
  CHECK(std::sqrt(sv.lambda_sq) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(sv.lambda_sq > 0.0);
  CHECK(sv.time_sum / s2 == doctest::Approx(std::sqrt(1 + sv.lambda_sq / 2)).epsilon(1e-14));
}

TEST_CASE("sigma symbols") {
  // lowering both spinor indices of the upper symbol recovers the lower one
  for (int a = 0; a < 4; ++a) {
    const Mat2& up = sigma_upper(a);
    const Mat2& lo = sigma_lower(a);
    // x_A = x^B eps_{BA}: M_{A Adot} = eps_{BA} eps_{Bdot Adot} M^{B Bdot}
    const double e[2][2] = {{0, 1}, {-1, 0}};
    for (int A = 0; A < 2; ++A)
      for (int Ad = 0; Ad < 2; ++Ad) {
        cplx s{};
        for (int B = 0; B < 2; ++B)
          for (int Bd = 0; Bd < 2; ++Bd) s += e[B][A] * e[Bd][Ad] * up[B][Bd];
        CHECK(close(s, lo[A][Ad]));
      }
  }
  // frozen: sqrt2 sigma^{alpha A Adot} = (I, -sx, sy, -sz)
  CHECK(close(sigma_upper(1)[0][1], -1 / s2));
  CHECK(close(sigma_upper(2)[0][1], cplx(0, -1 / s2)));
  CHECK(close(sigma_upper(3)[0][0], -1 / s2));
}

TEST_CASE("identity suite on 1000 seeded dyads") {
  const IdentitySuite s = run_identity_suite(1000, 20240601);
  CHECK(s.checks.size() >= 15);
  for (const auto& c : s.checks) {
    INFO(c.name << " " << c.max_error);
    CHECK(c.max_error <= 1e-12);
  }
  CHECK(s.all_pass());
}
