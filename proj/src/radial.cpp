#include "mdlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "mdlab/errors.hpp"

namespace mdlab::radial {

namespace {

constexpr double kPi = 3.14159265358979323846;

double log_step(const std::vector<double>& r) {
  if (r.size() < 4) throw UsageError("radial grid needs at least 4 points");
  if (!(r[0] > 0.0)) throw UsageError("radial grid must be positive");
  const double dt = std::log(r[1] / r[0]);
  if (!(dt > 0.0)) throw UsageError("radial grid must be strictly increasing");
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double d = std::log(r[i] / r[i - 1]);
    if (std::abs(d - dt) > 1e-8 * dt) throw UsageError("radial grid is not log-uniform");
  }
  return dt;
}

// int_0^{r0} g(s) ds for a sampled integrand that behaves like a power law
// below the first node.
double origin_piece(double r0, double r1, double g0, double g1) {
  if (g0 == 0.0) return 0.0;
  if (!(g0 > 0.0 && g1 > 0.0)) return 0.0;
  const double q = std::log(g1 / g0) / std::log(r1 / r0);
  if (q <= -1.0) throw UsageError("density is not integrable at the origin");
  return g0 * r0 / (q + 1.0);
}

ode::Options ode_options(double tol) {
  ode::Options o;
  o.tol = tol;
  return o;
}

}  // namespace

std::vector<double> log_grid(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 2) throw UsageError("log_grid needs 0 < r_min < r_max, n >= 2");
  std::vector<double> r(n);
  const double t0 = std::log(r_min), dt = std::log(r_max / r_min) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::exp(t0 + dt * double(i));
  r.front() = r_min;
  r.back() = r_max;
  return r;
}

std::vector<double> cumulative_integral(const std::vector<double>& r, const std::vector<double>& f) {
  if (f.size() != r.size()) throw UsageError("cumulative_integral: size mismatch");
  const double dt = log_step(r);
  const std::size_t n = r.size();
  std::vector<double> g(n), out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) g[i] = f[i] * r[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double s;
    if (i == 0)
      s = 9 * g[0] + 19 * g[1] - 5 * g[2] + g[3];
    else if (i == n - 2)
      s = 9 * g[n - 1] + 19 * g[n - 2] - 5 * g[n - 3] + g[n - 4];
    else
      s = -g[i - 1] + 13 * g[i] + 13 * g[i + 1] - g[i + 2];
    out[i + 1] = out[i] + dt * s / 24.0;
  }
  return out;
}

// ---------------------------------------------------------------- potential

RadialPotential RadialPotential::coulomb(double q_interior) {
  RadialPotential p;
  p.q_int_ = p.q_tot_ = q_interior;
  return p;
}

RadialPotential::RadialPotential(double q_interior, const std::vector<double>& r,
                                 const std::vector<double>& a, double q_total)
    : q_int_(q_interior), q_tot_(q_total) {
  if (a.size() != r.size()) throw UsageError("RadialPotential: size mismatch");
  const double dt = log_step(r);
  t_min_ = std::log(r.front());
  t_max_ = std::log(r.back());
  a_min_ = a.front();
  a_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(a.begin(), a.end(), t_min_, dt);
  has_spline_ = true;
}

double RadialPotential::smooth(double r) const {
  if (!has_spline_) return 0.0;
  const double t = std::log(r);
  if (t <= t_min_) return a_min_;
  if (t >= t_max_) return (q_tot_ - q_int_) / r;
  return a_(t);
}

double RadialPotential::operator()(double r) const { return q_int_ / r + smooth(r); }

std::vector<double> RadialPotential::sample(const std::vector<double>& r) const {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = (*this)(r[i]);
  return out;
}

// ---------------------------------------------------------------- ODE

std::array<double, 2> radial_rhs(double r, double G, double F, double E, double A0,
                                 const Channel& ch) {
  if (!(r > 0.0)) throw UsageError("radial_rhs: r must be positive");
  const double w = E + ch.e * A0;
  const double k = double(ch.kappa);
  return {-k * G / r + (w + ch.m) * F, k * F / r - (w - ch.m) * G};
}

std::array<double, 2> outward_seed(const RadialProblem& p, double E, double r) {
  const double Z = p.ch.e * p.A0.q_interior();
  const double k = double(p.ch.kappa), m = p.ch.m;
  if (p.ch.kappa == 0) throw UsageError("kappa must be nonzero");
  if (k * k <= Z * Z) throw UsageError("no regular solution: kappa^2 <= (e q_interior)^2");
  const double g = std::sqrt(k * k - Z * Z);
  const double w0 = E + p.ch.e * (p.A0(r) - p.A0.q_interior() / r);
  double a0, b0;
  if (k < 0) {
    a0 = 1.0;
    b0 = -Z / (g - k);
  } else {
    b0 = 1.0;
    a0 = Z / (g + k);
  }
  const double c1 = (w0 + m) * b0, c2 = -(w0 - m) * a0;
  const double det = 2 * g + 1;
  const double a1 = (c1 * (g + 1 - k) + Z * c2) / det;
  const double b1 = ((g + 1 + k) * c2 - Z * c1) / det;
  const double rg = std::pow(r, g);
  return {rg * (a0 + a1 * r), rg * (b0 + b1 * r)};
}

std::array<double, 2> inward_seed(const RadialProblem& p, double E, double r) {
  const double m = p.ch.m;
  if (std::abs(E) >= m) throw SpectralError("no decaying solution for |E| >= m");
  const double W = E + p.ch.e * p.A0(r);
  if (std::abs(W) >= m) throw SpectralError("local energy at r_max is outside the gap; increase r_max");
  // decaying eigenvector of the local coefficient matrix
  const double kr = double(p.ch.kappa) / r;
  const double mu = -std::sqrt(kr * kr + (m - W) * (m + W));
  return {1.0, (mu + kr) / (W + m)};
}

Trajectory integrate(const RadialProblem& p, double E, const std::vector<double>& nodes,
                     std::array<double, 2> y0, const ode::Options& opt) {
  Trajectory tr;
  if (nodes.empty()) return tr;
  for (double r : nodes)
    if (!(r > 0.0)) throw UsageError("integrate: nodes must be positive");
  tr.r.reserve(nodes.size());
  tr.G.reserve(nodes.size());
  tr.F.reserve(nodes.size());
  ode::State<2> y{y0[0], y0[1]};
  tr.r.push_back(nodes[0]);
  tr.G.push_back(y[0]);
  tr.F.push_back(y[1]);
  auto rhs = [&](double t, const ode::State<2>& s, ode::State<2>& d) {
    const double r = std::exp(t);
    const auto v = radial_rhs(r, s[0], s[1], E, p.A0(r), p.ch);
    d = {r * v[0], r * v[1]};
  };
  double h = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const ode::Stats st = ode::dopri5<2>(rhs, std::log(nodes[i - 1]), y, std::log(nodes[i]), opt, h);
    tr.steps += st.steps;
    if (st.diverged) {
      tr.diverged = true;
      break;
    }
    tr.r.push_back(nodes[i]);
    tr.G.push_back(y[0]);
    tr.F.push_back(y[1]);
  }
  return tr;
}

Trajectory integrate(const RadialProblem& p, double E, Direction dir,
                     const std::vector<double>& nodes, const ode::Options& opt) {
  if (nodes.empty()) return {};
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const bool ok = dir == Direction::outward ? nodes[i] > nodes[i - 1] : nodes[i] < nodes[i - 1];
    if (!ok) throw UsageError("integrate: nodes out of order for the direction");
  }
  const auto y0 = dir == Direction::outward ? outward_seed(p, E, nodes[0]) : inward_seed(p, E, nodes[0]);
  return integrate(p, E, nodes, y0, opt);
}

// ---------------------------------------------------------------- shooting

double auto_r_max(const Channel& ch, double E, const ShootingOptions& opt) {
  if (opt.r_max > 0.0) return opt.r_max;
  const double k2 = ch.m * ch.m - E * E;
  if (k2 <= 0.0) return opt.r_cap;
  return std::min(60.0 / std::sqrt(k2), opt.r_cap);
}

double turning_point(const RadialProblem& p, double E, double r_max, const ShootingOptions& opt) {
  const double m = p.ch.m;
  const double lo = 100.0 * opt.r_min, hi = 0.5 * r_max;
  double r_tp = -1.0;
  const auto rs = log_grid(opt.r_min, r_max, 2000);
  for (std::size_t i = rs.size(); i-- > 0;) {
    const double W = E + p.ch.e * p.A0(rs[i]);
    if (W * W >= m * m) {
      r_tp = rs[i];
      break;
    }
  }
  if (r_tp < 0.0) {
    const double k2 = m * m - E * E;
    r_tp = k2 > 0.0 ? 1.0 / std::sqrt(k2) : hi;
  }
  return std::clamp(r_tp, lo, hi);
}

double matching_defect(const RadialProblem& p, double E, double r_match, double r_max,
                       const ShootingOptions& opt) {
  if (!(r_match > opt.r_min && r_match < r_max)) throw UsageError("matching radius outside the grid");
  const auto o = ode_options(opt.ode_tol);
  const Trajectory out = integrate(p, E, Direction::outward, {opt.r_min, r_match}, o);
  const Trajectory in = integrate(p, E, Direction::inward, {r_max, r_match}, o);
  if (out.diverged || in.diverged) return std::numeric_limits<double>::quiet_NaN();
  const double Go = out.G.back(), Fo = out.F.back(), Gi = in.G.back(), Fi = in.F.back();
  return (Go * Fi - Fo * Gi) / (std::hypot(Go, Fo) * std::hypot(Gi, Fi));
}

namespace {

struct NanDefect {};

struct RootResult {
  bool ok = false;
  double E = 0.0, D = 0.0;
  int iterations = 0;
};

template <class Fn>
RootResult refine(Fn&& D, double a, double b, double Da, double Db, int max_iter, double m) {
  RootResult res;
  if (!(Da * Db <= 0.0)) return res;
  if (Da == 0.0) return {true, a, 0.0, 0};
  if (Db == 0.0) return {true, b, 0.0, 0};
  auto f = [&](double E) {
    const double v = D(E);
    if (!std::isfinite(v)) throw NanDefect{};
    return v;
  };
  std::uintmax_t it = std::uintmax_t(max_iter);
  // a few ulp: tighter brackets stall toms748 on a single abscissa
  const double scale = std::max({std::abs(a), std::abs(b), 1e-3 * m});
  auto tol = [scale](double x, double y) {
    return std::abs(x - y) <= 8.0 * std::numeric_limits<double>::epsilon() * scale;
  };
  try {
    const auto br = boost::math::tools::toms748_solve(f, a, b, Da, Db, tol, it);
    const double fa = f(br.first), fb = f(br.second);
    res.ok = true;
    res.E = std::abs(fa) <= std::abs(fb) ? br.first : br.second;
    res.D = std::abs(fa) <= std::abs(fb) ? fa : fb;
  } catch (const NanDefect&) {
    res.ok = false;
  }
  res.iterations = int(it);
  return res;
}

}  // namespace

ShootingResult shoot_eigenvalue(const RadialProblem& p, double E_lo, double E_hi,
                                const ShootingOptions& opt) {
  const double m = p.ch.m;
  if (!(E_lo < E_hi)) throw UsageError("shoot_eigenvalue: empty bracket");
  if (!(E_lo > -m && E_hi < m))
    throw UsageError("shoot_eigenvalue: bracket must lie inside (-m, m)");
  ShootingResult res;

  // Pass 1: radii follow E, which keeps the defect continuous in E.
  auto D1 = [&](double E) {
    const double rm = auto_r_max(p.ch, E, opt);
    return matching_defect(p, E, turning_point(p, E, rm, opt), rm, opt);
  };
  const double Da = D1(E_lo), Db = D1(E_hi);
  if (!std::isfinite(Da) || !std::isfinite(Db) || Da * Db > 0.0) return res;
  const RootResult r1 = refine(D1, E_lo, E_hi, Da, Db, opt.max_iterations, m);
  res.iterations = r1.iterations;
  if (!r1.ok) return res;
  res.found = true;
  res.E_found = r1.E;
  res.matching_defect = r1.D;
  res.r_max = auto_r_max(p.ch, r1.E, opt);
  res.r_match = turning_point(p, r1.E, res.r_max, opt);

  // Pass 2: fixed r_max, match at the density maximum.
  const RadialState s1 = build_state(p, r1.E, res.r_match, res.r_max, opt);
  const double r_peak = std::clamp(s1.r[s1.peak_index()], 100.0 * opt.r_min, 0.5 * res.r_max);
  auto D2 = [&](double E) { return matching_defect(p, E, r_peak, res.r_max, opt); };
  double delta = 1e-8 * m;
  for (int k = 0; k < 12; ++k, delta *= 10.0) {
    const double a = std::max(E_lo, r1.E - delta), b = std::min(E_hi, r1.E + delta);
    const double fa = D2(a), fb = D2(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) break;
    if (fa * fb > 0.0) continue;
    const RootResult r2 = refine(D2, a, b, fa, fb, opt.max_iterations, m);
    res.iterations += r2.iterations;
    if (r2.ok) {
      res.E_found = r2.E;
      res.matching_defect = r2.D;
      res.r_match = r_peak;
    }
    break;
  }
  res.converged = std::abs(res.matching_defect) < opt.defect_tol;
  const RadialState s2 = build_state(p, res.E_found, res.r_match, res.r_max, opt);
  res.node_count = node_count(s2.G, s2.F);
  return res;
}

// ---------------------------------------------------------------- states

std::vector<double> RadialState::h() const {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = (G[i] * G[i] + F[i] * F[i]) / (r[i] * r[i]);
  return out;
}

double RadialState::norm() const {
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) g[i] = G[i] * G[i] + F[i] * F[i];
  return origin_piece(r[0], r[1], g[0], g[1]) + cumulative_integral(r, g).back();
}

std::size_t RadialState::peak_index() const {
  std::size_t best = 0;
  double v = -1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = G[i] * G[i] + F[i] * F[i];
    if (d > v) {
      v = d;
      best = i;
    }
  }
  return best;
}

int node_count(const std::vector<double>& G, const std::vector<double>& F) {
  double nG = 0.0, nF = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) {
    nG = std::max(nG, std::abs(G[i]));
    nF = std::max(nF, std::abs(F[i]));
  }
  const auto& X = nG >= nF ? G : F;
  const double floor = 1e-8 * std::max(nG, nF);
  int n = 0;
  double last = 0.0;
  for (double x : X) {
    if (std::abs(x) < floor) continue;
    if (last != 0.0 && (x > 0) != (last > 0)) ++n;
    last = x;
  }
  return n;
}

RadialState build_state(const RadialProblem& p, double E, double r_match, double r_max,
                        const ShootingOptions& opt) {
  const auto r = log_grid(opt.r_min, r_max, opt.n_grid);
  const std::size_t n = r.size();
  std::size_t im = std::size_t(std::lower_bound(r.begin(), r.end(), r_match) - r.begin());
  im = std::clamp<std::size_t>(im, 2, n - 3);
  const auto o = ode_options(opt.ode_tol);
  const std::vector<double> out_nodes(r.begin(), r.begin() + std::ptrdiff_t(im) + 1);
  const std::vector<double> in_nodes(r.rbegin(), r.rbegin() + std::ptrdiff_t(n - im));
  const Trajectory out = integrate(p, E, Direction::outward, out_nodes, o);
  const Trajectory in = integrate(p, E, Direction::inward, in_nodes, o);
  if (out.diverged || in.diverged) throw SpectralError("trajectory overflow while building the state");
  const double Gi = in.G.back(), Fi = in.F.back();
  const double s = (out.G.back() * Gi + out.F.back() * Fi) / (Gi * Gi + Fi * Fi);

  RadialState st;
  st.r = r;
  st.G.resize(n);
  st.F.resize(n);
  for (std::size_t i = 0; i <= im; ++i) {
    st.G[i] = out.G[i];
    st.F[i] = out.F[i];
  }
  for (std::size_t j = 0; j + 1 < in.G.size(); ++j) {
    st.G[n - 1 - j] = s * in.G[j];
    st.F[n - 1 - j] = s * in.F[j];
  }
  const double N = std::sqrt(st.norm());
  if (!(N > 0.0) || !std::isfinite(N)) throw SpectralError("state has zero or infinite norm");
  // sign convention: the large component is positive near the origin
  const double sign = (std::abs(st.G[0]) >= std::abs(st.F[0]) ? st.G[0] : st.F[0]) < 0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    st.G[i] *= sign / N;
    st.F[i] *= sign / N;
  }
  st.A0 = p.A0.sample(r);
  st.E = E;
  st.kappa = p.ch.kappa;
  st.m = p.ch.m;
  st.e = p.ch.e;
  st.q_interior = p.A0.q_interior();
  return st;
}

std::pair<ShootingResult, RadialState> find_bound_state(const RadialProblem& p, int nodes,
                                                        const ShootingOptions& opt) {
  const double m = p.ch.m;
  const std::size_t n = std::max<std::size_t>(opt.n_scan, 4);
  std::vector<double> E(n), D(n);
  for (std::size_t j = 0; j < n; ++j) {
    // theta from near pi down to near 0: E increasing
    const double theta = kPi * (double(n - j) - 0.5) / double(n);
    E[j] = m * std::cos(theta);
    const double rm = auto_r_max(p.ch, E[j], opt);
    try {
      D[j] = matching_defect(p, E[j], turning_point(p, E[j], rm, opt), rm, opt);
    } catch (const SpectralError&) {
      D[j] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!std::isfinite(D[j]) || !std::isfinite(D[j + 1]) || D[j] * D[j + 1] > 0.0) continue;
    ShootingResult res = shoot_eigenvalue(p, E[j], E[j + 1], opt);
    if (!res.found || res.node_count != nodes) continue;
    RadialState st = build_state(p, res.E_found, res.r_match, res.r_max, opt);
    return {res, st};
  }
  return {ShootingResult{}, RadialState{}};
}

SpectrumScan scan_spectrum(const RadialProblem& p, double E_lo, double E_hi, std::size_t n,
                           const ShootingOptions& opt) {
  if (n < 2 || !(E_hi > E_lo)) throw UsageError("scan_spectrum: need n >= 2 and E_hi > E_lo");
  const double m = p.ch.m;
  SpectrumScan scan;
  const auto o = ode_options(opt.ode_tol);
  for (std::size_t j = 0; j < n; ++j) {
    ScanSample s;
    s.E = E_lo + (E_hi - E_lo) * double(j) / double(n - 1);
    s.in_gap = std::abs(s.E) < m;
    if (s.in_gap) {
      const double rm = auto_r_max(p.ch, s.E, opt);
      try {
        s.defect = matching_defect(p, s.E, turning_point(p, s.E, rm, opt), rm, opt);
      } catch (const SpectralError&) {
        s.defect = std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      // outward solution with its running norm as a third component
      const double Ev = s.E;
      auto rhs = [&](double t, const ode::State<3>& y, ode::State<3>& d) {
        const double r = std::exp(t);
        const auto v = radial_rhs(r, y[0], y[1], Ev, p.A0(r), p.ch);
        d = {r * v[0], r * v[1], r * (y[0] * y[0] + y[1] * y[1])};
      };
      const auto y0 = outward_seed(p, s.E, opt.r_min);
      ode::State<3> y{y0[0], y0[1], 0.0};
      double h = 0.0;
      auto st = ode::dopri5<3>(rhs, std::log(opt.r_min), y, std::log(0.5 * opt.r_cap), o, h);
      const double half = y[2];
      if (!st.diverged) st = ode::dopri5<3>(rhs, std::log(0.5 * opt.r_cap), y, std::log(opt.r_cap), o, h);
      s.tail_fraction = st.diverged ? 1.0 : (y[2] - half) / y[2];
      scan.min_continuum_tail = std::min(scan.min_continuum_tail, s.tail_fraction);
      if (s.tail_fraction < 1e-3) scan.embedded_candidates.push_back(s.E);
    }
    scan.samples.push_back(s);
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto& a = scan.samples[j];
    const auto& b = scan.samples[j + 1];
    if (a.in_gap && b.in_gap && std::isfinite(a.defect) && std::isfinite(b.defect) &&
        a.defect * b.defect < 0.0)
      scan.sign_changes.emplace_back(a.E, b.E);
  }
  return scan;
}

// ---------------------------------------------------------------- Poisson

PoissonSolution poisson_solve_radial(const std::vector<double>& r, const std::vector<double>& h,
                                     double q_interior, double coupling) {
  if (h.size() != r.size()) throw UsageError("poisson_solve_radial: size mismatch");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!std::isfinite(h[i]) || h[i] < 0.0)
      throw UsageError("density must be finite and non-negative (index " + std::to_string(i) + ")");
  const std::size_t n = r.size();
  std::vector<double> hr2(n), hr(n);
  for (std::size_t i = 0; i < n; ++i) {
    hr2[i] = h[i] * r[i] * r[i];
    hr[i] = h[i] * r[i];
  }
  const double q_origin = origin_piece(r[0], r[1], hr2[0], hr2[1]);
  const auto Q = cumulative_integral(r, hr2);
  const auto P = cumulative_integral(r, hr);
  PoissonSolution s;
  s.r = r;
  s.A0.resize(n);
  s.dA0.resize(n);
  s.d2A0.resize(n);
  s.q_interior = q_interior;
  s.density_integral = q_origin + Q.back();
  s.q_total = q_interior - coupling * s.density_integral;
  for (std::size_t i = 0; i < n; ++i) {
    const double Qi = q_origin + Q[i];
    const double Pi = P.back() - P[i];
    s.A0[i] = q_interior / r[i] - coupling * (Qi / r[i] + Pi);
    s.dA0[i] = -(q_interior - coupling * Qi) / (r[i] * r[i]);
    s.d2A0[i] = coupling * h[i] - 2.0 * s.dA0[i] / r[i];
  }
  return s;
}

RadialPotential PoissonSolution::potential() const {
  std::vector<double> a(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) a[i] = A0[i] - q_interior / r[i];
  return RadialPotential(q_interior, r, a, q_total);
}

}  // namespace mdlab::radial
