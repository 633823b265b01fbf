#include "mdlab/embed.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/quintic_hermite.hpp>

#include "mdlab/errors.hpp"

namespace mdlab::radial {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr cplx I{0.0, 1.0};

using Hermite = boost::math::interpolators::quintic_hermite<std::vector<double>>;

}  // namespace

std::array<cplx, 2> spin_angle(int kappa, const std::array<double, 3>& n) {
  if (kappa == 0) throw UsageError("kappa must be nonzero");
  const double theta = std::acos(std::clamp(n[2], -1.0, 1.0));
  const double phi = std::atan2(n[1], n[0]);
  const unsigned l = unsigned(kappa < 0 ? -kappa - 1 : kappa);
  const double L = double(l);
  const double Y0 = std::sph_legendre(l, 0, theta);
  const cplx Y1 = l >= 1 ? std::sph_legendre(l, 1, theta) * std::exp(I * phi) : cplx{};
  if (kappa < 0)
    return {std::sqrt((L + 1) / (2 * L + 1)) * Y0, std::sqrt(L / (2 * L + 1)) * Y1};
  return {-std::sqrt(L / (2 * L + 1)) * Y0, std::sqrt((L + 1) / (2 * L + 1)) * Y1};
}

Embedding embed(const RadialState& rs, const EmbedOptions& opt) {
  const std::size_t N = rs.r.size();
  if (N < 4 || rs.G.size() != N || rs.F.size() != N) throw UsageError("embed: malformed RadialState");
  const double coupling = rs.e * rs.q_psi;
  // a test particle carries no self-field
  const PoissonSolution ps = poisson_solve_radial(
      rs.r, coupling == 0.0 ? std::vector<double>(N, 0.0) : rs.h(), rs.q_interior, coupling);

  // G', F' from the radial equations and their r-derivatives.
  const Channel ch{rs.kappa, rs.m, rs.e};
  const double k = double(rs.kappa);
  std::vector<double> dG(N), dF(N), d2G(N), d2F(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = rs.r[i], G = rs.G[i], F = rs.F[i];
    const auto d = radial_rhs(r, G, F, rs.E, ps.A0[i], ch);
    dG[i] = d[0];
    dF[i] = d[1];
    const double w = rs.E + rs.e * ps.A0[i], dw = rs.e * ps.dA0[i];
    d2G[i] = k * G / (r * r) - k * d[0] / r + dw * F + (w + rs.m) * d[1];
    d2F[i] = -k * F / (r * r) + k * d[1] / r - dw * G - (w - rs.m) * d[0];
  }
  const Hermite Gi(std::vector<double>(rs.r), std::vector<double>(rs.G), std::move(dG), std::move(d2G));
  const Hermite Fi(std::vector<double>(rs.r), std::vector<double>(rs.F), std::move(dF), std::move(d2F));
  const Hermite Ai(std::vector<double>(rs.r), std::vector<double>(ps.A0), std::vector<double>(ps.dA0),
                   std::vector<double>(ps.d2A0));

  Embedding out;
  out.r_peak = rs.r[rs.peak_index()];
  out.charge_scale = rs.q_psi;
  auto dir = opt.direction;
  const double dn = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  if (!(dn > 0.0)) throw UsageError("embed: zero direction");
  for (auto& x : dir) x /= dn;
  const double c = opt.center_factor * out.r_peak;
  const double half = opt.half_width_factor * out.r_peak;
  if (!(half < c)) throw UsageError("embed: patch would contain the origin");
  const field::Grid g = field::Grid::cube(opt.n, 2.0 * half / double(opt.n - 1),
                                          {c * dir[0], c * dir[1], c * dir[2]});
  double r_lo = 0.0, r_hi = 0.0;
  for (double d : dir) {
    r_lo += std::pow(std::max(std::abs(c * d) - half, 0.0), 2);
    r_hi += std::pow(std::abs(c * d) + half, 2);
  }
  if (std::sqrt(r_lo) < rs.r.front() || std::sqrt(r_hi) > rs.r.back())
    throw UsageError("embed: patch extends beyond the radial grid");

  out.psi = field::SpinorComponents(g);
  out.A = field::PotentialField(g, rs.E, rs.m, rs.e);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto x = g.point(q);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const std::array<double, 3> n{x[0] / r, x[1] / r, x[2] / r};
    const auto Om = spin_angle(rs.kappa, n);
    // -(sigma.n) Omega
    const std::array<cplx, 2> Om2{-(n[2] * Om[0] + cplx(n[0], -n[1]) * Om[1]),
                                  -(cplx(n[0], n[1]) * Om[0] - n[2] * Om[1])};
    const double G = Gi(r) / r, F = Fi(r) / r;
    std::array<cplx, 2> a{G * Om[0], G * Om[1]}, b{I * F * Om2[0], I * F * Om2[1]};
    const cplx U0 = (a[0] - b[0]) / kSqrt2, U1 = (a[1] - b[1]) / kSqrt2;
    const cplx W0 = (a[0] + b[0]) / kSqrt2, W1 = (a[1] + b[1]) / kSqrt2;
    out.psi.U0[q] = U0;
    out.psi.U1[q] = U1;
    out.psi.V0[q] = -std::conj(W1);
    out.psi.V1[q] = std::conj(W0);
    out.A.A[0][q] = Ai(r);
  }
  return out;
}

double EmbedReport::max() const { return std::max({max_dirac, max_reality, max_maxwell}); }

EmbedReport embed_and_check(const RadialState& rs, const EmbedOptions& opt) {
  const Embedding em = embed(rs, opt);
  const field::PolarField psi = field::PolarField::from_components(em.psi);
  EmbedReport rep;
  rep.r_peak = em.r_peak;
  rep.dirac = field::dirac_residual(psi, em.A);
  rep.reality = field::reality_residual(psi, rs.m);
  rep.maxwell = field::maxwell_residual(em.A, psi, em.charge_scale);
  rep.max_dirac = std::max(rep.dirac.max_norm("cartesian_"), rep.dirac.max_norm("spinor_"));
  rep.max_reality = rep.reality.max_norm();
  rep.max_maxwell = rep.maxwell.max_norm();
  return rep;
}

}  // namespace mdlab::radial
