#include "mdlab/spinor.hpp"

#include <algorithm>
#include <cmath>

#include "mdlab/errors.hpp"

namespace mdlab::spinor {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr cplx I{0.0, 1.0};

// eps^{AB} = eps_{AB} = [[0,1],[-1,0]]
constexpr double eps(int a, int b) { return a == b ? 0.0 : (a == 0 ? 1.0 : -1.0); }

Spinor2 as_upper(const Spinor2& x) { return x.pos == Index::upper ? x : raise(x); }
Spinor2 as_lower(const Spinor2& x) { return x.pos == Index::lower ? x : lower(x); }

std::array<Mat2, 4> make_sigma_lower() {
  const cplx z{0.0, 0.0}, one{1.0, 0.0};
  std::array<Mat2, 4> s{};
  s[0] = Mat2{{{one, z}, {z, one}}};
  s[1] = Mat2{{{z, one}, {one, z}}};
  s[2] = Mat2{{{z, -I}, {I, z}}};
  s[3] = Mat2{{{one, z}, {z, -one}}};
  for (auto& m : s)
    for (auto& row : m)
      for (auto& v : row) v *= kInvSqrt2;
  return s;
}

std::array<Mat2, 4> make_sigma_upper(const std::array<Mat2, 4>& low) {
  std::array<Mat2, 4> up{};
  for (int al = 0; al < 4; ++al)
    for (int a = 0; a < 2; ++a)
      for (int ad = 0; ad < 2; ++ad) {
        cplx acc{};
        for (int b = 0; b < 2; ++b)
          for (int bd = 0; bd < 2; ++bd) acc += eps(a, b) * eps(ad, bd) * low[al][b][bd];
        up[al][a][ad] = acc;
      }
  return up;
}

const std::array<Mat2, 4> kSigmaLower = make_sigma_lower();
const std::array<Mat2, 4> kSigmaUpper = make_sigma_upper(kSigmaLower);

// Sign rule for the dyad branch.
bool needs_flip(const Spinor2& o) {
  for (cplx c : {o.c0, o.c1}) {
    if (c.real() > 0.0) return false;
    if (c.real() < 0.0) return true;
    if (c.imag() > 0.0) return false;
    if (c.imag() < 0.0) return true;
  }
  return false;
}

}  // namespace

Spinor2 raise(const Spinor2& xi) {
  if (xi.pos != Index::lower) throw UsageError("raise: spinor already carries an upper index");
  return Spinor2::upper(xi.c1, -xi.c0);
}

Spinor2 lower(const Spinor2& xi) {
  if (xi.pos != Index::upper) throw UsageError("lower: spinor already carries a lower index");
  return Spinor2::lower(-xi.c1, xi.c0);
}

cplx contract(const Spinor2& a, const Spinor2& b) {
  const Spinor2 au = as_upper(a);
  const Spinor2 bl = as_lower(b);
  return au.c0 * bl.c0 + au.c1 * bl.c1;
}

Spinor2 operator*(cplx s, const Spinor2& x) { return {s * x.c0, s * x.c1, x.pos}; }

Spinor2 operator+(const Spinor2& a, const Spinor2& b) {
  if (a.pos != b.pos) throw UsageError("spinor sum with mismatched index positions");
  return {a.c0 + b.c0, a.c1 + b.c1, a.pos};
}

Dyad dyad_normalize(const Spinor2& o, const Spinor2& iota, bool& flipped) {
  const Spinor2 ol = as_lower(o), il = as_lower(iota);
  const cplx s = contract(il, ol);
  const double scale = std::max(std::abs(ol.c0) + std::abs(ol.c1), 1.0) *
                       std::max(std::abs(il.c0) + std::abs(il.c1), 1.0);
  if (std::abs(s) <= 1e-14 * scale || !std::isfinite(std::abs(s)))
    throw DegeneracyError("dyad_normalize: iota^A o_A vanishes (parallel spinors)");
  const cplx k = 1.0 / std::sqrt(s);
  Dyad d{k * ol, k * il};
  flipped = needs_flip(d.o);
  if (flipped) {
    d.o = -1.0 * d.o;
    d.iota = -1.0 * d.iota;
  }
  return d;
}

Dyad dyad_normalize(const Spinor2& o, const Spinor2& iota) {
  bool flipped = false;
  return dyad_normalize(o, iota, flipped);
}

const Mat2& sigma_lower(int alpha) { return kSigmaLower.at(alpha); }
const Mat2& sigma_upper(int alpha) { return kSigmaUpper.at(alpha); }

Mat2 sigma_covariant(int alpha) {
  Mat2 m = kSigmaLower.at(alpha);
  for (auto& row : m)
    for (auto& v : row) v *= eta[alpha];
  return m;
}

MinkowskiVector operator+(const MinkowskiVector& a, const MinkowskiVector& b) {
  MinkowskiVector r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] + b[i];
  return r;
}

MinkowskiVector operator-(const MinkowskiVector& a, const MinkowskiVector& b) {
  MinkowskiVector r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] - b[i];
  return r;
}

MinkowskiVector operator*(cplx s, const MinkowskiVector& a) {
  MinkowskiVector r;
  for (int i = 0; i < 4; ++i) r[i] = s * a[i];
  return r;
}

MinkowskiVector conj(const MinkowskiVector& a) {
  MinkowskiVector r;
  for (int i = 0; i < 4; ++i) r[i] = std::conj(a[i]);
  return r;
}

cplx dot(const MinkowskiVector& a, const MinkowskiVector& b) {
  cplx acc{};
  for (int i = 0; i < 4; ++i) acc += eta[i] * a[i] * b[i];
  return acc;
}

MinkowskiVector vector_from_spinors(const Spinor2& a, const Spinor2& b) {
  const Spinor2 au = as_upper(a), bu = as_upper(b);
  const std::array<cplx, 2> x{au.c0, au.c1};
  const std::array<cplx, 2> y{std::conj(bu.c0), std::conj(bu.c1)};
  MinkowskiVector v;
  for (int al = 0; al < 4; ++al) {
    cplx acc{};
    for (int A = 0; A < 2; ++A)
      for (int Ad = 0; Ad < 2; ++Ad) acc += kSigmaLower[al][A][Ad] * x[A] * y[Ad];
    v[al] = acc;
  }
  return v;
}

NullTetrad tetrad_from_dyad(const Dyad& d) {
  NullTetrad t;
  t.l = vector_from_spinors(d.o, d.o);
  t.n = vector_from_spinors(d.iota, d.iota);
  t.m = vector_from_spinors(d.o, d.iota);
  // l and n are real up to round-off; drop the residue so they are exactly real.
  for (int i = 0; i < 4; ++i) {
    t.l[i] = t.l[i].real();
    t.n[i] = t.n[i].real();
  }
  return t;
}

TetradCoefficients decompose_vector(const MinkowskiVector& X, const NullTetrad& t) {
  return {dot(t.l, X), dot(t.n, X), -dot(t.mbar(), X), -dot(t.m, X)};
}

MinkowskiVector reconstruct(const TetradCoefficients& c, const NullTetrad& t) {
  return c.along_n * t.n + c.along_l * t.l + c.along_m * t.m + c.along_mbar * t.mbar();
}

StaticityVector staticity(const NullTetrad& t) {
  StaticityVector sv;
  for (int k = 0; k < 3; ++k) {
    sv.s[k] = t.l[k + 1].real() + t.n[k + 1].real();
    sv.lambda_sq += sv.s[k] * sv.s[k];
  }
  sv.time_sum = t.l[0].real() + t.n[0].real();
  return sv;
}

Spinor2 random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double a = nd(rng), b = nd(rng), c = nd(rng), d = nd(rng);
  return Spinor2::lower({a, b}, {c, d});
}

Dyad random_dyad(std::mt19937_64& rng) {
  for (;;) {
    const Spinor2 o = random_spinor(rng);
    const Spinor2 io = random_spinor(rng);
    // Reject near-parallel pairs; they are legal but make the normalized
    // components large and the identities test round-off, not algebra.
    if (std::abs(contract(io, o)) < 1e-2) continue;
    return dyad_normalize(o, io);
  }
}

bool IdentitySuite::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [&](const IdentityCheck& c) { return c.max_error <= tolerance; });
}

double IdentitySuite::worst() const {
  double w = 0.0;
  for (const auto& c : checks) w = std::max(w, c.max_error);
  return w;
}

namespace {
double euclid(const MinkowskiVector& v) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a) s += std::norm(v[a]);
  return std::sqrt(s);
}
}  // namespace

IdentitySuite run_identity_suite(int samples, std::uint64_t seed, double tolerance) {
  IdentitySuite suite;
  suite.samples = samples;
  suite.seed = seed;
  suite.tolerance = tolerance;
  std::vector<std::pair<std::string, double>> err;
  auto bump = [&](const std::string& name, double v) {
    for (auto& e : err)
      if (e.first == name) {
        e.second = std::max(e.second, v);
        return;
      }
    err.emplace_back(name, v);
  };

  // sigma identities do not depend on the sample
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx s{};
      const Mat2 sb = sigma_covariant(b);
      for (int A = 0; A < 2; ++A)
        for (int Ad = 0; Ad < 2; ++Ad) s += eta[a] * kSigmaUpper[a][A][Ad] * sb[A][Ad];
      bump("sigma_metric", std::abs(s - (a == b ? eta[a] : 0.0)));
    }
  for (int A = 0; A < 2; ++A)
    for (int Ad = 0; Ad < 2; ++Ad)
      for (int B = 0; B < 2; ++B)
        for (int Bd = 0; Bd < 2; ++Bd) {
          cplx s{};
          for (int a = 0; a < 4; ++a) s += sigma_covariant(a)[A][Ad] * kSigmaLower[a][B][Bd];
          bump("sigma_epsilon", std::abs(s - eps(A, B) * eps(Ad, Bd)));
        }

  std::mt19937_64 rng(seed);
  for (int n = 0; n < samples; ++n) {
    const Dyad d = random_dyad(rng);
    const NullTetrad t = tetrad_from_dyad(d);
    const MinkowskiVector mb = t.mbar();
    // Each relation is measured against the size of the products it
    // combines, so that a badly conditioned draw does not read as an error.
    const double so = std::hypot(std::abs(d.o.c0), std::abs(d.o.c1));
    const double si = std::hypot(std::abs(d.iota.c0), std::abs(d.iota.c1));
    const double sl = euclid(t.l), sn = euclid(t.n), sm = euclid(t.m);
    auto rel = [](double err, double scale) { return err / std::max(scale, 1.0); };
    bump("dyad_contraction", rel(std::abs(contract(d.iota, d.o) - 1.0), so * si));
    for (int A = 0; A < 2; ++A)
      for (int B = 0; B < 2; ++B)
        bump("dyad_epsilon", rel(std::abs(d.o[A] * d.iota[B] - d.o[B] * d.iota[A] - eps(A, B)), so * si));
    bump("l.l", rel(std::abs(dot(t.l, t.l)), sl * sl));
    bump("n.n", rel(std::abs(dot(t.n, t.n)), sn * sn));
    bump("m.m", rel(std::abs(dot(t.m, t.m)), sm * sm));
    bump("l.n", rel(std::abs(dot(t.l, t.n) - 1.0), sl * sn));
    bump("m.mbar", rel(std::abs(dot(t.m, mb) + 1.0), sm * sm));
    bump("l.m", rel(std::abs(dot(t.l, t.m)), sl * sm));
    bump("l.mbar", rel(std::abs(dot(t.l, mb)), sl * sm));
    bump("n.m", rel(std::abs(dot(t.n, t.m)), sn * sm));
    bump("n.mbar", rel(std::abs(dot(t.n, mb)), sn * sm));
    const StaticityVector sv = staticity(t);
    const double sln = euclid(t.l + t.n);
    bump("current_norm", rel(std::abs(sv.time_sum * sv.time_sum - sv.lambda_sq - 2.0), sln * sln));
    bump("lambda_relation",
         rel(std::abs(sv.time_sum / std::sqrt(2.0) - std::sqrt(1.0 + 0.5 * sv.lambda_sq)), sln));

    MinkowskiVector X;
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int a = 0; a < 4; ++a) X[a] = cplx(nd(rng), nd(rng));
    const TetradCoefficients c = decompose_vector(X, t);
    const MinkowskiVector Y = reconstruct(c, t);
    // relative to the size of the terms summed in the reconstruction
    double r = 0.0;
    for (int a = 0; a < 4; ++a) {
      const double scale = std::abs(c.along_n * t.n[a]) + std::abs(c.along_l * t.l[a]) +
                           std::abs(c.along_m * t.m[a]) + std::abs(c.along_mbar * mb[a]);
      r = std::max(r, std::abs(Y[a] - X[a]) / std::max(scale, 1.0));
    }
    bump("decompose_reconstruct", r);

    const Spinor2 xi = random_spinor(rng);
    const Spinor2 back = lower(raise(xi));
    bump("raise_lower_roundtrip", std::max(std::abs(back.c0 - xi.c0), std::abs(back.c1 - xi.c1)));
  }
  for (auto& e : err) suite.checks.push_back({e.first, e.second});
  return suite;
}

}  // namespace mdlab::spinor
