#include "mdlab/scf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/math/tools/toms748_solve.hpp>

#include "mdlab/errors.hpp"

namespace mdlab::scf {

using radial::RadialPotential;
using radial::RadialProblem;
using radial::RadialState;
using radial::ShootingOptions;
using radial::ShootingResult;

void ScfConfig::validate() const {
  if (!(alpha_mix > 0.0 && alpha_mix <= 1.0)) throw UsageError("alpha_mix must lie in (0, 1]");
  if (max_iterations < 1) throw UsageError("max_iterations must be positive");
  if (!(tol_E > 0.0) || !(tol_A > 0.0)) throw UsageError("SCF tolerances must be positive");
  if (!(ch.m > 0.0)) throw UsageError("m must be positive");
  if (ch.kappa == 0) throw UsageError("kappa must be nonzero");
  if (nodes < 0) throw UsageError("nodes must be non-negative");
  if (!(q_psi >= 0.0)) throw UsageError("q_psi must be non-negative");
  // The radial Poisson solve uses the angle-averaged density, which is the
  // exact density only for |kappa| = 1.
  if (std::abs(ch.kappa) != 1 && ch.e * q_psi != 0.0)
    throw UsageError("self-coupled solves need |kappa| = 1 (spherical density)");
}

namespace {

// A0 = q_int / r + a, with a the self field on the grid.
RadialPotential from_self(double q_int, const std::vector<double>& r, const std::vector<double>& a) {
  return RadialPotential(q_int, r, a, q_int + r.back() * a.back());
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Eigenvalue with the requested node count close to E_prev; falls back to
// a full search.
std::pair<ShootingResult, RadialState> solve_near(const RadialProblem& p, double E_prev, int nodes,
                                                  const ShootingOptions& opt) {
  const double m = p.ch.m;
  const double edge = m * (1.0 - 1e-12);
  for (double d = 1e-5 * m; d < 0.5 * m; d *= 4.0) {
    const double a = std::max(-edge, E_prev - d), b = std::min(edge, E_prev + d);
    ShootingResult res = radial::shoot_eigenvalue(p, a, b, opt);
    if (!res.found) continue;
    if (res.node_count != nodes) break;
    return {res, radial::build_state(p, res.E_found, res.r_match, res.r_max, opt)};
  }
  return radial::find_bound_state(p, nodes, opt);
}

}  // namespace

ScfResult scf_solve(const ScfConfig& cfg, const std::optional<RadialPotential>& guess) {
  cfg.validate();
  ScfResult out;
  const double coupling = cfg.ch.e * cfg.q_psi;
  const RadialPotential start = guess ? *guess : RadialPotential::coulomb(cfg.q_interior);
  if (guess && guess->q_interior() != cfg.q_interior)
    throw UsageError("initial guess has a different q_interior");

  // Decoupled solve in the starting potential fixes the grid.
  auto [res0, st0] = radial::find_bound_state(RadialProblem{cfg.ch, start}, cfg.nodes, cfg.shoot);
  if (!res0.found) {
    out.trace.message = "no bound state with the requested node count in the starting potential";
    return out;
  }
  ShootingOptions opt = cfg.shoot;
  opt.r_max = cfg.shoot.r_max > 0.0 ? cfg.shoot.r_max : res0.r_max;
  out.r_max = opt.r_max;
  const auto r = radial::log_grid(opt.r_min, opt.r_max, opt.n_grid);

  // Only the self field changes between iterations; keeping it apart from
  // q_int / r avoids a round-off floor near the origin when q_int is large.
  std::vector<double> a_old = start.sample(r);
  for (std::size_t i = 0; i < r.size(); ++i) a_old[i] -= cfg.q_interior / r[i];
  RadialPotential pot = start;
  double E_prev = res0.E_found;
  std::vector<double> h_prev;
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const RadialProblem p{cfg.ch, pot};
    auto [res, st] = solve_near(p, E_prev, cfg.nodes, opt);
    if (!res.found) {
      out.trace.message = "eigenvalue lost at iteration " + std::to_string(k);
      return out;
    }
    const auto h = st.h();
    const auto self = radial::poisson_solve_radial(r, h, 0.0, coupling);
    ScfIteration it;
    it.E = res.E_found;
    it.dA_inf = sup_diff(self.A0, a_old);
    if (!h_prev.empty()) {
      std::vector<double> d(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) d[i] = (h[i] - h_prev[i]) * (h[i] - h_prev[i]) * r[i] * r[i];
      it.dh_l2 = std::sqrt(radial::cumulative_integral(r, d).back());
    }
    out.trace.iterations.push_back(it);
    st.q_psi = cfg.q_psi;
    out.state = std::move(st);
    out.shooting = res;
    out.q0 = cfg.q_interior + self.q_total;
    out.a_self = a_old;
    const bool done = it.dA_inf < cfg.tol_A && (k == 1 || std::abs(it.E - E_prev) < cfg.tol_E);
    if (done) {
      out.trace.converged = res.converged;
      out.trace.message = res.converged ? "converged" : "fixed point reached but matching defect above tolerance";
      return out;
    }
    for (std::size_t i = 0; i < r.size(); ++i)
      a_old[i] = (1.0 - cfg.alpha_mix) * a_old[i] + cfg.alpha_mix * self.A0[i];
    pot = from_self(cfg.q_interior, r, a_old);
    E_prev = res.E_found;
    h_prev = h;
  }
  out.trace.message = "max_iterations exceeded";
  return out;
}

RadialPotential self_potential(const ScfResult& res) {
  if (res.a_self.size() != res.state.r.size() || res.a_self.empty())
    throw UsageError("self_potential: result has no self field");
  return from_self(res.state.q_interior, res.state.r, res.a_self);
}

std::pair<double, double> fixed_point_residual(const ScfConfig& cfg, const ScfResult& res) {
  const auto& s = res.state;
  ShootingOptions opt = cfg.shoot;
  opt.r_max = res.r_max;
  if (res.a_self.size() != s.r.size()) throw UsageError("fixed_point_residual: result has no self field");
  const RadialProblem p{cfg.ch, from_self(cfg.q_interior, s.r, res.a_self)};
  auto [sr, st] = solve_near(p, s.E, cfg.nodes, opt);
  if (!sr.found) throw SpectralError("fixed_point_residual: eigenvalue not found");
  const auto self = radial::poisson_solve_radial(s.r, st.h(), 0.0, cfg.ch.e * cfg.q_psi);
  return {std::abs(sr.E_found - s.E), sup_diff(self.A0, res.a_self)};
}

std::vector<SweepRow> sweep(const ScfConfig& base, const std::vector<SweepCell>& cells, unsigned threads) {
  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      rows[i].cell = cells[i];
      ScfConfig cfg = base;
      cfg.ch.e = cells[i].e;
      cfg.q_psi = cells[i].q_psi;
      cfg.q_interior = cells[i].q_interior;
      try {
        rows[i].result = scf_solve(cfg);
      } catch (const std::exception& ex) {
        rows[i].result = ScfResult{};
        rows[i].result.trace.message = ex.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, unsigned(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

ScfResult solve_for_energy(ScfConfig cfg, double target) {
  if (!(std::abs(target) < 1.0)) throw UsageError("target E/m must lie in (-1, 1)");
  if (cfg.ch.e == 0.0) throw UsageError("solve_for_energy needs e != 0");
  const double kap = std::abs(double(cfg.ch.kappa));
  // decoupled Coulomb estimate for the lowest state of the channel
  const double Z0 = std::sqrt(1.0 - target * target) * (cfg.ch.kappa < 0 || target < 0 ? 1.0 : 0.5);
  const double sgn = target >= 0 ? 1.0 : -1.0;
  ScfResult last;
  auto f = [&](double q) {
    cfg.q_interior = q;
    last = scf_solve(cfg);
    if (!last.trace.converged) throw InsufficientDataError("SCF did not converge at q_interior = " + std::to_string(q));
    return last.state.E / cfg.ch.m - target;
  };
  double qa = sgn * Z0 / cfg.ch.e;
  double fa = f(qa);
  double qb = qa, fb = fa;
  // E rises with |q| for negative targets and falls for positive ones
  const double grow = (fa > 0) == (sgn > 0) ? 1.1 : 1.0 / 1.1;
  for (int k = 0; k < 40 && fa * fb > 0.0; ++k) {
    qb *= grow;
    if (std::abs(cfg.ch.e * qb) >= 0.999 * kap) break;
    fb = f(qb);
  }
  if (fa * fb > 0.0) throw InsufficientDataError("no q_interior bracket for the target energy");
  std::uintmax_t it = 60;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-13 * std::max(std::abs(x), std::abs(y)); };
  const auto br = boost::math::tools::toms748_solve(f, std::min(qa, qb), std::max(qa, qb),
                                                    qa < qb ? fa : fb, qa < qb ? fb : fa, tol, it);
  const double q = std::abs(f(br.first)) <= std::abs(f(br.second)) ? br.first : br.second;
  f(q);
  return last;
}

}  // namespace mdlab::scf
