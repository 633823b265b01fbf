#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mdlab {

using cplx = std::complex<double>;

namespace spinor {

enum class Index { lower, upper };

struct Spinor2 {
  cplx c0{}, c1{};
  Index pos = Index::lower;

  static Spinor2 lower(cplx a, cplx b) { return {a, b, Index::lower}; }
  static Spinor2 upper(cplx a, cplx b) { return {a, b, Index::upper}; }
  cplx operator[](int i) const { return i == 0 ? c0 : c1; }
};

// xi^A = eps^{AB} xi_B.  Throws UsageError on an upper-index input.
Spinor2 raise(const Spinor2& xi);
// xi_A = xi^B eps_{BA}.  Throws UsageError on a lower-index input.
Spinor2 lower(const Spinor2& xi);

// Full contraction a^A b_A.  Positions are converted as needed, so any
// combination of index positions is accepted.
cplx contract(const Spinor2& a, const Spinor2& b);

Spinor2 operator*(cplx s, const Spinor2& x);
Spinor2 operator+(const Spinor2& a, const Spinor2& b);

struct Dyad {
  Spinor2 o;     // lower index
  Spinor2 iota;  // lower index
};

// Rescale so iota^A o_A = 1, splitting sqrt of the contraction between the
// two members, then fix the overall sign: Re o_0 >= 0, ties broken by
// Im o_0 >= 0 (and by o_1 when o_0 vanishes).  DegeneracyError if the
// contraction vanishes.
Dyad dyad_normalize(const Spinor2& o, const Spinor2& iota);

// Same as dyad_normalize but reports whether the sign flip was applied.
Dyad dyad_normalize(const Spinor2& o, const Spinor2& iota, bool& flipped);

using Mat2 = std::array<std::array<cplx, 2>, 2>;

// sigma^alpha_{A Adot}: (1/sqrt2)(I, sx, sy, sz).
const Mat2& sigma_lower(int alpha);
// sigma^{alpha A Adot}: both spinor indices raised with eps.
const Mat2& sigma_upper(int alpha);
// Minkowski index lowered: sigma_{alpha A Adot}.
Mat2 sigma_covariant(int alpha);

inline constexpr std::array<double, 4> eta{1.0, -1.0, -1.0, -1.0};

struct MinkowskiVector {
  std::array<cplx, 4> x{};

  cplx& operator[](int i) { return x[i]; }
  cplx operator[](int i) const { return x[i]; }
};

MinkowskiVector operator+(const MinkowskiVector& a, const MinkowskiVector& b);
MinkowskiVector operator-(const MinkowskiVector& a, const MinkowskiVector& b);
MinkowskiVector operator*(cplx s, const MinkowskiVector& a);
MinkowskiVector conj(const MinkowskiVector& a);

// Bilinear (no conjugation) inner product with eta = diag(1,-1,-1,-1).
cplx dot(const MinkowskiVector& a, const MinkowskiVector& b);

// X^alpha = sigma^alpha_{A Adot} a^A conj(b)^Adot.
MinkowskiVector vector_from_spinors(const Spinor2& a, const Spinor2& b);

struct NullTetrad {
  MinkowskiVector l, n, m;
  MinkowskiVector mbar() const { return conj(m); }
};

NullTetrad tetrad_from_dyad(const Dyad& d);

// Expansion coefficients of X in the tetrad, ordered as the multipliers of
// (n, l, m, mbar):  X = along_n n + along_l l + along_m m + along_mbar mbar,
// so along_n = l.X, along_l = n.X, along_m = -mbar.X, along_mbar = -m.X.
struct TetradCoefficients {
  cplx along_n, along_l, along_m, along_mbar;
};

TetradCoefficients decompose_vector(const MinkowskiVector& X, const NullTetrad& t);
MinkowskiVector reconstruct(const TetradCoefficients& c, const NullTetrad& t);

// Current direction diagnostics of a dyad: s^k = l^k + n^k,
// lambda^2 = sum_k (s^k)^2 and l^0 + n^0.
struct StaticityVector {
  std::array<double, 3> s{};
  double lambda_sq = 0.0;
  double time_sum = 0.0;
};

StaticityVector staticity(const NullTetrad& t);

// Random non-degenerate dyad with normally distributed components.
Dyad random_dyad(std::mt19937_64& rng);
Spinor2 random_spinor(std::mt19937_64& rng);

struct IdentityCheck {
  std::string name;
  double max_error = 0.0;
};

// Every algebraic relation the tetrad construction promises, evaluated on
// `samples` seeded random dyads (and spinors for the round trip).  Each
// error is divided by the magnitude of the products in its relation (at
// least 1), e.g. |l.n - 1| / (|l| |n|) with Euclidean component norms.
struct IdentitySuite {
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
  std::vector<IdentityCheck> checks;

  bool all_pass() const;
  double worst() const;
};

IdentitySuite run_identity_suite(int samples, std::uint64_t seed, double tolerance = 1e-12);

}  // namespace spinor
}  // namespace mdlab
