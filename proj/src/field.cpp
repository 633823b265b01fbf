#include "mdlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdlab/errors.hpp"

namespace mdlab::field {

using spinor::Dyad;
using spinor::Spinor2;
using spinor::sigma_lower;
using spinor::sigma_upper;

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kPi = 3.14159265358979323846;
constexpr cplx I{0.0, 1.0};
constexpr double kRmin = 1e-300;

void require_same_grid(const Grid& a, const Grid& b, const char* who) {
  if (!(a == b)) throw UsageError(std::string(who) + ": fields live on different grids");
}

// Accumulates max and grid-weighted L2 norms for a list of equations.
class NormAccumulator {
 public:
  NormAccumulator(const Grid& g, std::vector<std::string> names)
      : h3_(g.h * g.h * g.h), h_(g.h), names_(std::move(names)),
        max_(names_.size(), 0.0), sum_(names_.size(), 0.0) {}

  void add(std::size_t eq, double magnitude) {
    max_[eq] = std::max(max_[eq], magnitude);
    sum_[eq] += magnitude * magnitude * h3_;
  }
  void count_point() { ++points_; }

  ResidualReport report() const {
    ResidualReport r;
    r.grid_h = h_;
    r.points = points_;
    for (std::size_t i = 0; i < names_.size(); ++i)
      r.equations.push_back({names_[i], max_[i], std::sqrt(sum_[i])});
    return r;
  }

 private:
  double h3_, h_;
  std::vector<std::string> names_;
  std::vector<double> max_, sum_;
  std::size_t points_ = 0;
};

template <class Fn>
void for_interior(const Grid& g, const ResidualOptions& opt, Fn&& fn) {
  for (int k = 2; k < g.nz - 2; ++k)
    for (int j = 2; j < g.ny - 2; ++j)
      for (int i = 2; i < g.nx - 2; ++i) {
        if (opt.include && !opt.include(g.point(i, j, k))) continue;
        fn(i, j, k, g.index(i, j, k));
      }
}

// Jets of the four lower-index component fields at one point.
struct SpinorJets {
  Jet<cplx> U[2], V[2];
};

SpinorJets spinor_jets(const SpinorComponents& c, int i, int j, int k) {
  return {{jet(c.grid, c.U0, i, j, k), jet(c.grid, c.U1, i, j, k)},
          {jet(c.grid, c.V0, i, j, k), jet(c.grid, c.V1, i, j, k)}};
}

// Stationary 4-gradient of a field with time dependence e^{-i omega t}.
cplx d_alpha(const Jet<cplx>& f, int alpha, double omega) {
  return alpha == 0 ? -I * omega * f.f : f.d1[alpha - 1];
}

// Upper-index components from lower ones: x^0 = x_1, x^1 = -x_0.
std::array<cplx, 2> up(cplx x0, cplx x1) { return {x1, -x0}; }

// A^{A Adot} = sigma^{alpha A Adot} A_alpha at one point.
spinor::Mat2 potential_spinor(const std::array<double, 4>& Aup) {
  spinor::Mat2 out{};
  for (int a = 0; a < 4; ++a) {
    const double Alow = spinor::eta[a] * Aup[a];
    const auto& s = sigma_upper(a);
    for (int A = 0; A < 2; ++A)
      for (int Ad = 0; Ad < 2; ++Ad) out[A][Ad] += s[A][Ad] * Alow;
  }
  return out;
}

// sum_B d^{B Adot} f_B for a spinor field with frequency omega.
std::array<cplx, 2> spinor_divergence(const Jet<cplx> f[2], double omega) {
  std::array<cplx, 2> out{};
  for (int Ad = 0; Ad < 2; ++Ad)
    for (int B = 0; B < 2; ++B)
      for (int a = 0; a < 4; ++a) out[Ad] += sigma_upper(a)[B][Ad] * d_alpha(f[B], a, omega);
  return out;
}

std::array<double, 4> potential_at(const PotentialField& A, std::size_t idx) {
  return {A.A[0][idx], A.A[1][idx], A.A[2][idx], A.A[3][idx]};
}

std::string describe_points(const Grid& g, const std::vector<std::size_t>& bad) {
  std::ostringstream os;
  os << bad.size() << " degenerate point(s) with R < 1e-300:";
  for (std::size_t n = 0; n < std::min<std::size_t>(bad.size(), 8); ++n) {
    const auto ijk = g.ijk(bad[n]);
    os << " (" << ijk[0] << "," << ijk[1] << "," << ijk[2] << ")";
  }
  if (bad.size() > 8) os << " ...";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- PolarField

PolarField PolarField::from_components(SpinorComponents c) {
  const std::size_t n = c.grid.size();
  if (c.U0.size() != n || c.U1.size() != n || c.V0.size() != n || c.V1.size() != n)
    throw UsageError("PolarField: component arrays do not match grid size");
  PolarField p;
  p.R_.resize(n);
  p.chi_.resize(n);
  p.dyads_.resize(n);
  std::vector<std::size_t> bad;
  for (std::size_t q = 0; q < n; ++q) {
    const cplx W = c.U0[q] * c.V1[q] - c.U1[q] * c.V0[q];  // U_C V^C
    const double R = std::abs(W);
    if (!(R >= kRmin)) {
      bad.push_back(q);
      continue;
    }
    double chi = std::arg(W);
    const cplx s = std::sqrt(R) * std::exp(0.5 * I * chi);
    Spinor2 o = Spinor2::lower(c.U0[q] / s, c.U1[q] / s);
    Spinor2 io = Spinor2::lower(c.V0[q] / s, c.V1[q] / s);
    bool flipped = false;
    p.dyads_[q] = spinor::dyad_normalize(o, io, flipped);
    if (flipped) chi += 2.0 * kPi;
    p.R_[q] = R;
    p.chi_[q] = chi;
  }
  if (!bad.empty()) throw DegeneracyError("PolarField: " + describe_points(c.grid, bad));
  p.comp_ = std::move(c);
  return p;
}

PolarField PolarField::from_polar(const Grid& g, std::vector<double> R, std::vector<double> chi,
                                  std::vector<Dyad> dyads) {
  const std::size_t n = g.size();
  if (R.size() != n || chi.size() != n || dyads.size() != n)
    throw UsageError("PolarField: polar arrays do not match grid size");
  std::vector<std::size_t> bad;
  for (std::size_t q = 0; q < n; ++q)
    if (!(R[q] >= kRmin)) bad.push_back(q);
  if (!bad.empty()) throw DegeneracyError("PolarField: " + describe_points(g, bad));
  PolarField p;
  p.comp_ = SpinorComponents(g);
  for (std::size_t q = 0; q < n; ++q) {
    const cplx s = std::sqrt(R[q]) * std::exp(0.5 * I * chi[q]);
    const Spinor2& o = dyads[q].o;
    const Spinor2& io = dyads[q].iota;
    p.comp_.U0[q] = s * o.c0;
    p.comp_.U1[q] = s * o.c1;
    p.comp_.V0[q] = s * io.c0;
    p.comp_.V1[q] = s * io.c1;
  }
  p.R_ = std::move(R);
  p.chi_ = std::move(chi);
  p.dyads_ = std::move(dyads);
  return p;
}

double PolarField::reconstruction_error() const {
  double err = 0.0;
  for (std::size_t q = 0; q < R_.size(); ++q) {
    const cplx s = std::sqrt(R_[q]) * std::exp(0.5 * I * chi_[q]);
    const Dyad& d = dyads_[q];
    err = std::max({err, std::abs(comp_.U0[q] - s * d.o.c0), std::abs(comp_.U1[q] - s * d.o.c1),
                    std::abs(comp_.V0[q] - s * d.iota.c0), std::abs(comp_.V1[q] - s * d.iota.c1)});
  }
  return err;
}

// ------------------------------------------------------------ ResidualReport

const EquationNorm& ResidualReport::at(const std::string& name) const {
  for (const auto& e : equations)
    if (e.equation == name) return e;
  throw UsageError("ResidualReport: no equation named " + name);
}

double ResidualReport::max_norm() const {
  double v = 0.0;
  for (const auto& e : equations) v = std::max(v, e.max_norm);
  return v;
}

double ResidualReport::max_norm(const std::string& prefix) const {
  double v = 0.0;
  for (const auto& e : equations)
    if (e.equation.rfind(prefix, 0) == 0) v = std::max(v, e.max_norm);
  return v;
}

// ------------------------------------------------------ potential_from_dirac

DiracPotential potential_from_dirac(const PolarField& psi, double E, double m, double e) {
  const Grid& g = psi.grid();
  const SpinorComponents& c = psi.components();
  DiracPotential out{PotentialField(g, E, m, e), {}, 0.0};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& a : out.A.A) a.assign(g.size(), nan);
  out.imag.assign(g.size(), {nan, nan, nan, nan});

  for_interior(g, {}, [&](int i, int j, int k, std::size_t q) {
    const SpinorJets J = spinor_jets(c, i, j, k);
    const auto u_up = up(J.U[0].f, J.U[1].f);
    const auto v_up = up(J.V[0].f, J.V[1].f);
    const cplx uCvC = u_up[0] * J.V[0].f + u_up[1] * J.V[1].f;
    const auto du = spinor_divergence(J.U, E);
    const auto dv = spinor_divergence(J.V, -E);
    const cplx pref = I / (e * uCvC);
    spinor::Mat2 Asp{};
    for (int A = 0; A < 2; ++A)
      for (int Ad = 0; Ad < 2; ++Ad)
        Asp[A][Ad] = pref * (v_up[A] * du[Ad] + u_up[A] * dv[Ad] +
                             I * m / kSqrt2 *
                                 (u_up[A] * std::conj(u_up[Ad]) + v_up[A] * std::conj(v_up[Ad])));
    for (int a = 0; a < 4; ++a) {
      cplx acc{};
      const auto& s = sigma_lower(a);
      for (int A = 0; A < 2; ++A)
        for (int Ad = 0; Ad < 2; ++Ad) acc += s[A][Ad] * Asp[A][Ad];
      out.A.A[a][q] = acc.real();
      out.imag[q][a] = acc.imag();
      out.reality_violation = std::max(out.reality_violation, std::abs(acc.imag()));
    }
  });
  return out;
}

// ------------------------------------------------------------------- Dirac

ResidualReport dirac_residual(const PolarField& psi, const PotentialField& Af,
                              const ResidualOptions& opt) {
  require_same_grid(psi.grid(), Af.grid, "dirac_residual");
  const Grid& g = psi.grid();
  const SpinorComponents& c = psi.components();
  const double E = Af.E, m = Af.m, e = Af.e;
  NormAccumulator acc(g, {"cartesian_1", "cartesian_2", "cartesian_3", "cartesian_4", "spinor_u0", "spinor_u1", "spinor_v0",
                          "spinor_v1", "assembly_mismatch"});

  for_interior(g, opt, [&](int i, int j, int k, std::size_t q) {
    const SpinorJets J = spinor_jets(c, i, j, k);
    const auto Aup = potential_at(Af, q);

    // 2-spinor form.
    const auto Asp = potential_spinor(Aup);
    const auto du = spinor_divergence(J.U, E);
    const auto dv = spinor_divergence(J.V, -E);
    const auto u_up = up(J.U[0].f, J.U[1].f);
    const auto v_up = up(J.V[0].f, J.V[1].f);
    std::array<cplx, 2> D1{}, D2{};
    for (int Ad = 0; Ad < 2; ++Ad) {
      cplx Au{}, Av{};
      for (int A = 0; A < 2; ++A) {
        Au += Asp[A][Ad] * J.U[A].f;
        Av += Asp[A][Ad] * J.V[A].f;
      }
      D1[Ad] = du[Ad] - I * e * Au + I * m / kSqrt2 * std::conj(v_up[Ad]);
      D2[Ad] = dv[Ad] + I * e * Av + I * m / kSqrt2 * std::conj(u_up[Ad]);
    }

    // Explicit Cartesian form.  W_i = conj(V^i).
    const cplx U0 = J.U[0].f, U1 = J.U[1].f;
    const cplx W0 = std::conj(v_up[0]), W1 = std::conj(v_up[1]);
    auto dU = [&](int a, int d) { return J.U[a].d1[d]; };
    // d(V^0) = d V_1, d(V^1) = -d V_0
    auto dW = [&](int a, int d) {
      return a == 0 ? std::conj(J.V[1].d1[d]) : std::conj(-J.V[0].d1[d]);
    };
    auto del = [&](auto&& f, int a) { return f(a, 0) + I * f(a, 1); };
    auto delbar = [&](auto&& f, int a) { return f(a, 0) - I * f(a, 1); };
    const double A0 = Aup[0], A3 = Aup[3];
    const cplx Ac{Aup[1], Aup[2]}, Ab{Aup[1], -Aup[2]};

    const cplx b1 = I * m * (W0 - E / m * U0) - delbar(dU, 1) - dU(0, 2) -
                    I * e * ((A0 + A3) * U0 + Ab * U1);
    const cplx b2 = I * m * (W1 - E / m * U1) - del(dU, 0) + dU(1, 2) -
                    I * e * (Ac * U0 + (A0 - A3) * U1);
    const cplx b3 = I * m * (U1 - E / m * W1) + del(dW, 0) - dW(1, 2) +
                    I * e * (-(A0 + A3) * W1 + Ac * W0);
    const cplx b4 = I * m * (U0 - E / m * W0) + delbar(dW, 1) + dW(0, 2) +
                    I * e * (Ab * W1 - (A0 - A3) * W0);

    const double mismatch =
        std::max({std::abs(b1 - kSqrt2 * D1[0]), std::abs(b2 - kSqrt2 * D1[1]),
                  std::abs(b3 + std::conj(kSqrt2 * D2[0])), std::abs(b4 - std::conj(kSqrt2 * D2[1]))});

    acc.count_point();
    acc.add(0, std::abs(b1));
    acc.add(1, std::abs(b2));
    acc.add(2, std::abs(b3));
    acc.add(3, std::abs(b4));
    acc.add(4, std::abs(D1[0]));
    acc.add(5, std::abs(D1[1]));
    acc.add(6, std::abs(D2[0]));
    acc.add(7, std::abs(D2[1]));
    acc.add(8, mismatch);
  });
  return acc.report();
}

// ----------------------------------------------------------------- reality

namespace {

struct RealityPoint {
  cplx uu, vv, uv;
};

RealityPoint reality_at(const SpinorJets& J, double m) {
  // d^{A Adot}(f_A conj(g_Adot)) with only spatial derivatives surviving.
  auto div_prod = [&](const Jet<cplx> f[2], const Jet<cplx> gj[2]) {
    cplx s{};
    for (int a = 1; a < 4; ++a)
      for (int A = 0; A < 2; ++A)
        for (int Ad = 0; Ad < 2; ++Ad)
          s += sigma_upper(a)[A][Ad] *
               (f[A].d1[a - 1] * std::conj(gj[Ad].f) + f[A].f * std::conj(gj[Ad].d1[a - 1]));
    return s;
  };
  const auto u_up = up(J.U[0].f, J.U[1].f);
  const cplx uCvC = u_up[0] * J.V[0].f + u_up[1] * J.V[1].f;
  const cplx alg = I * m / kSqrt2 * (uCvC - std::conj(uCvC));
  const cplx c1 = div_prod(J.U, J.U) + alg;
  const cplx c2 = div_prod(J.V, J.V) - alg;

  // u_A d^{A Adot} vbar_Adot - vbar_Adot d^{A Adot} u_A; time parts cancel.
  cplx c3{};
  for (int a = 1; a < 4; ++a)
    for (int A = 0; A < 2; ++A)
      for (int Ad = 0; Ad < 2; ++Ad)
        c3 += sigma_upper(a)[A][Ad] * (J.U[A].f * std::conj(J.V[Ad].d1[a - 1]) -
                                       std::conj(J.V[Ad].f) * J.U[A].d1[a - 1]);
  return {c1, c2, c3};
}

}  // namespace

RealityFields reality_fields(const PolarField& psi, double m) {
  const Grid& g = psi.grid();
  const SpinorComponents& c = psi.components();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RealityFields out;
  out.uu.assign(g.size(), cplx(nan, nan));
  out.vv.assign(g.size(), cplx(nan, nan));
  out.uv.assign(g.size(), cplx(nan, nan));
  for_interior(g, {}, [&](int i, int j, int k, std::size_t q) {
    const RealityPoint p = reality_at(spinor_jets(c, i, j, k), m);
    out.uu[q] = p.uu;
    out.vv[q] = p.vv;
    out.uv[q] = p.uv;
  });
  return out;
}

ResidualReport reality_residual(const PolarField& psi, double m, const ResidualOptions& opt) {
  const Grid& g = psi.grid();
  const SpinorComponents& c = psi.components();
  NormAccumulator acc(g, {"reality_uu", "reality_vv", "reality_uv"});
  for_interior(g, opt, [&](int i, int j, int k, std::size_t) {
    const RealityPoint p = reality_at(spinor_jets(c, i, j, k), m);
    acc.count_point();
    acc.add(0, std::abs(p.uu));
    acc.add(1, std::abs(p.vv));
    acc.add(2, std::abs(p.uv));
  });
  return acc.report();
}

// ----------------------------------------------------------------- current

std::array<std::vector<double>, 4> current_from_components(const SpinorComponents& c) {
  std::array<std::vector<double>, 4> j;
  for (auto& v : j) v.assign(c.grid.size(), 0.0);
  for (std::size_t q = 0; q < c.grid.size(); ++q) {
    const cplx U[2] = {c.U0[q], c.U1[q]}, V[2] = {c.V0[q], c.V1[q]};
    for (int a = 0; a < 4; ++a) {
      cplx s{};
      for (int A = 0; A < 2; ++A)
        for (int Ad = 0; Ad < 2; ++Ad)
          s += sigma_upper(a)[A][Ad] * (U[A] * std::conj(U[Ad]) + V[A] * std::conj(V[Ad]));
      j[a][q] = kSqrt2 * s.real();
    }
  }
  return j;
}

CurrentField current(const PolarField& psi) {
  const std::size_t n = psi.grid().size();
  CurrentField out;
  for (auto& v : out.j) v.resize(n);
  for (auto& v : out.s) v.resize(n);
  out.lambda_sq.resize(n);
  out.time_sum.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto t = spinor::tetrad_from_dyad(psi.dyads()[q]);
    const auto st = spinor::staticity(t);
    const double R = psi.R()[q];
    for (int a = 0; a < 4; ++a) out.j[a][q] = kSqrt2 * R * (t.l[a].real() + t.n[a].real());
    for (int k = 0; k < 3; ++k) out.s[k][q] = st.s[k];
    out.lambda_sq[q] = st.lambda_sq;
    out.time_sum[q] = st.time_sum;
  }
  return out;
}

ChargeIntegrals charge_integrals(const PolarField& psi) {
  const Grid& g = psi.grid();
  const double h3 = g.h * g.h * g.h;
  const CurrentField cur = current(psi);
  ChargeIntegrals out;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const Dyad& d = psi.dyads()[q];
    const double sum = std::norm(d.o.c0) + std::norm(d.o.c1) + std::norm(d.iota.c1) +
                       std::norm(d.iota.c0);  // |iota^0| = |iota_1|, |iota^1| = |iota_0|
    out.from_current += cur.j[0][q] * h3;
    out.from_dyad += psi.R()[q] * sum * h3;
  }
  return out;
}

// ----------------------------------------------------------------- Maxwell

ResidualReport maxwell_residual(const PotentialField& A, const SpinorComponents& psi,
                                double charge_scale, const ResidualOptions& opt) {
  require_same_grid(A.grid, psi.grid, "maxwell_residual");
  const Grid& g = A.grid;
  const auto j = current_from_components(psi);
  const double src = 4.0 * kPi * A.e * charge_scale;
  NormAccumulator acc(g, {"maxwell_0", "maxwell_1", "maxwell_2", "maxwell_3", "lorenz"});
  for_interior(g, opt, [&](int i, int jj, int k, std::size_t q) {
    acc.count_point();
    double div = 0.0;
    for (int a = 0; a < 4; ++a) {
      const Jet<double> J = jet(g, A.A[a], i, jj, k);
      acc.add(a, std::abs(J.laplacian() - src * j[a][q]));
      if (a > 0) div += J.d1[a - 1];
    }
    acc.add(4, std::abs(div));
  });
  return acc.report();
}

ResidualReport maxwell_residual(const PotentialField& A, const PolarField& psi,
                                double charge_scale, const ResidualOptions& opt) {
  return maxwell_residual(A, psi.components(), charge_scale, opt);
}

// ------------------------------------------------------------ Klein-Gordon

ResidualReport klein_gordon_residual(const PolarField& psi, const PotentialField& Af,
                                     const ResidualOptions& opt) {
  require_same_grid(psi.grid(), Af.grid, "klein_gordon_residual");
  const Grid& g = psi.grid();
  const SpinorComponents& c = psi.components();
  const double E = Af.E, m = Af.m, e = Af.e;
  NormAccumulator acc(g, {"kg_1", "kg_2"});
  for_interior(g, opt, [&](int i, int j, int k, std::size_t) {
    const Jet<cplx> U0 = jet(g, c.U0, i, j, k), U1 = jet(g, c.U1, i, j, k);
    Jet<double> Aj[4];
    for (int a = 0; a < 4; ++a) Aj[a] = jet(g, Af.A[a], i, j, k);
    const double A0 = Aj[0].f;
    const double AA = A0 * A0 - Aj[1].f * Aj[1].f - Aj[2].f * Aj[2].f - Aj[3].f * Aj[3].f;
    const double scalar = (E * E - m * m) + 2.0 * e * E * A0 + e * e * AA;
    // derivatives of A = A^1 + i A^2 and its conjugate
    auto dA = [&](int d) { return cplx(Aj[1].d1[d], Aj[2].d1[d]); };
    auto dAb = [&](int d) { return cplx(Aj[1].d1[d], -Aj[2].d1[d]); };
    auto dre = [&](int a, int d) { return cplx(Aj[a].d1[d], 0.0); };
    auto del = [](cplx x, cplx y) { return x + I * y; };
    auto delbar = [](cplx x, cplx y) { return x - I * y; };
    auto transport = [&](const Jet<cplx>& U) {
      cplx s{};
      for (int d = 0; d < 3; ++d) s += Aj[d + 1].f * U.d1[d];
      return 2.0 * I * e * s;
    };

    const cplx c00 = dre(0, 2) + dre(3, 2) + delbar(dA(0), dA(1));
    const cplx c01 = dAb(2) + delbar(dre(0, 0) - dre(3, 0), dre(0, 1) - dre(3, 1));
    const cplx r1 = U0.laplacian() + transport(U0) + (scalar + I * e * c00) * U0.f +
                    I * e * c01 * U1.f;

    const cplx c11 = -(dre(0, 2) - dre(3, 2)) + del(dAb(0), dAb(1));
    const cplx c10 = -dA(2) + del(dre(0, 0) + dre(3, 0), dre(0, 1) + dre(3, 1));
    const cplx r2 = U1.laplacian() + transport(U1) + (scalar + I * e * c11) * U1.f +
                    I * e * c10 * U0.f;
    acc.count_point();
    acc.add(0, std::abs(r1));
    acc.add(1, std::abs(r2));
  });
  return acc.report();
}

// ------------------------------------------------------------------ A0 form

std::vector<cplx> a0_formula(const PolarField& psi, double E, double m, double e) {
  const Grid& g = psi.grid();
  const SpinorComponents& c = psi.components();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> out(g.size(), cplx(nan, nan));
  for_interior(g, {}, [&](int i, int j, int k, std::size_t q) {
    const SpinorJets J = spinor_jets(c, i, j, k);
    const double R = psi.R()[q], chi = psi.chi()[q];
    const Dyad& d = psi.dyads()[q];
    const cplx Wp = R * std::exp(I * chi);  // U_C V^C from the polar data
    // iota^i o_j with iota^0 = iota_1, iota^1 = -iota_0
    const cplx iu[2] = {d.iota.c1, -d.iota.c0};
    const cplx o[2] = {d.o.c0, d.o.c1};
    auto P = [&](int a, int b) { return iu[a] * o[b]; };
    const double S = std::norm(o[0]) + std::norm(o[1]) + std::norm(iu[0]) + std::norm(iu[1]);

    // Derivatives of W = U_C V^C and of the products V^a U_b, by the
    // product rule on the component jets.
    const cplx Vu[2] = {J.V[1].f, -J.V[0].f};
    std::array<cplx, 3> dW{};
    std::array<std::array<std::array<cplx, 3>, 2>, 2> dVU{};
    for (int x = 0; x < 3; ++x) {
      const cplx dVu[2] = {J.V[1].d1[x], -J.V[0].d1[x]};
      dW[x] = J.U[0].d1[x] * Vu[0] + J.U[0].f * dVu[0] + J.U[1].d1[x] * Vu[1] +
              J.U[1].f * dVu[1];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) dVU[a][b][x] = dVu[a] * J.U[b].f + Vu[a] * J.U[b].d1[x];
    }
    // dR/R + i dchi = dW/W; d(iota^a o_b) = (d(V^a U_b) - P_ab dW)/W
    auto logd = [&](int x) { return dW[x] / Wp; };
    auto dP = [&](int a, int b, int x) { return (dVU[a][b][x] - P(a, b) * dW[x]) / Wp; };
    auto del = [&](auto&& f) { return f(0) + I * f(1); };
    auto delbar = [&](auto&& f) { return f(0) - I * f(1); };

    const cplx lead = m / (2.0 * e) * (std::exp(-I * chi) * S - 2.0 * E / m);
    const cplx t1 = delbar(logd) * P(0, 1) + delbar([&](int x) { return dP(0, 1, x); });
    const cplx t2 = del(logd) * P(1, 0) + del([&](int x) { return dP(1, 0, x); });
    const cplx t3 = logd(2) * P(0, 0) + dP(0, 0, 2) - logd(2) * P(1, 1) - dP(1, 1, 2);
    out[q] = lead + I / (2.0 * e) * (t1 + t2 + t3);
  });
  return out;
}

}  // namespace mdlab::field
