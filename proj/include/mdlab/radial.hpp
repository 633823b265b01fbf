#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "mdlab/ode.hpp"

namespace mdlab::radial {

// n points log-uniform on [r_min, r_max].
std::vector<double> log_grid(double r_min, double r_max, std::size_t n);

// Cumulative integral of f over r on a log-uniform grid, F[0] = 0.
// Fourth order in t = ln r (the integrand is f r in t).
std::vector<double> cumulative_integral(const std::vector<double>& r, const std::vector<double>& f);

struct Channel {
  int kappa = -1;
  double m = 1.0;
  double e = 1.0;
};

// A0(r) = q_interior / r + a(r).  a is a cubic spline in ln r over the
// sample grid; below the grid it is frozen at a(r_min), above it continues
// as (q_total - q_interior) / r.
class RadialPotential {
 public:
  RadialPotential() = default;
  static RadialPotential coulomb(double q_interior);
  RadialPotential(double q_interior, const std::vector<double>& r, const std::vector<double>& a,
                  double q_total);

  double operator()(double r) const;
  double q_interior() const { return q_int_; }
  double q_total() const { return q_tot_; }
  std::vector<double> sample(const std::vector<double>& r) const;

 private:
  double smooth(double r) const;
  double q_int_ = 0.0, q_tot_ = 0.0;
  bool has_spline_ = false;
  double t_min_ = 0.0, t_max_ = 0.0, a_min_ = 0.0;
  boost::math::interpolators::cardinal_cubic_b_spline<double> a_;
};

struct RadialProblem {
  Channel ch;
  RadialPotential A0;
};

// (G', F') for G' = -kappa G/r + (E + e A0 + m) F,
//               F' =  kappa F/r - (E + e A0 - m) G.
// UsageError for r <= 0.
std::array<double, 2> radial_rhs(double r, double G, double F, double E, double A0,
                                 const Channel& ch);

// Two-term Frobenius series r^gamma (c0 + c1 r) at r, gamma = sqrt(kappa^2 - Z^2)
// with Z = e q_interior.  UsageError when kappa^2 <= Z^2.
std::array<double, 2> outward_seed(const RadialProblem& p, double E, double r);
// Decaying eigenvector of the local coefficient matrix at r.  SpectralError when |E| >= m or when the
// local energy at r is outside the gap.
std::array<double, 2> inward_seed(const RadialProblem& p, double E, double r);

enum class Direction { outward, inward };

struct Trajectory {
  std::vector<double> r, G, F;
  bool diverged = false;
  std::size_t steps = 0;
};

// Integrates from nodes.front() through every node in order (increasing for
// outward, decreasing for inward), seeded by the matching seed function.
Trajectory integrate(const RadialProblem& p, double E, Direction dir,
                     const std::vector<double>& nodes, const ode::Options& opt = {});
// Same with explicit initial data.
Trajectory integrate(const RadialProblem& p, double E, const std::vector<double>& nodes,
                     std::array<double, 2> y0, const ode::Options& opt = {});

struct ShootingOptions {
  double r_min = 1e-4;        // in units of 1/m
  double r_max = 0.0;         // 0: min(60 / sqrt(m^2 - E^2), r_cap)
  double r_cap = 2000.0;      // in units of 1/m
  std::size_t n_grid = 4000;
  double defect_tol = 1e-10;
  double ode_tol = 1e-10;
  int max_iterations = 200;
  std::size_t n_scan = 400;   // samples for bound-state searches
};

struct ShootingResult {
  bool found = false;         // sign change in the bracket
  bool converged = false;     // found and |defect| < defect_tol
  double E_found = 0.0;
  double matching_defect = 0.0;
  int node_count = -1;
  int iterations = 0;
  double r_match = 0.0, r_max = 0.0;
};

double auto_r_max(const Channel& ch, double E, const ShootingOptions& opt);
// Outer classical turning point, clamped to [100 r_min, r_max / 2].
double turning_point(const RadialProblem& p, double E, double r_max, const ShootingOptions& opt);

// sin of the angle between the outward and inward (G, F) vectors at r_match.
// The sign does not depend on r_match (the Wronskian is constant in r).
double matching_defect(const RadialProblem& p, double E, double r_match, double r_max,
                       const ShootingOptions& opt = {});

// Root of the matching defect in [E_lo, E_hi].  UsageError unless the
// bracket lies inside (-m, m).  No sign change -> found = false.
ShootingResult shoot_eigenvalue(const RadialProblem& p, double E_lo, double E_hi,
                                const ShootingOptions& opt = {});

struct RadialState {
  std::vector<double> r, G, F, A0;
  double E = 0.0;
  int kappa = -1;
  double m = 1.0, e = 1.0;
  double q_interior = 0.0;
  double q_psi = 0.0;         // charge normalization of the self-field, 0 for a test particle

  std::vector<double> h() const;  // (G^2 + F^2) / r^2
  double norm() const;            // integral of G^2 + F^2 dr
  std::size_t peak_index() const; // argmax of G^2 + F^2
};

// Sign changes of the component with the larger norm (G for electron-like
// states, F for their charge conjugates).
int node_count(const std::vector<double>& G, const std::vector<double>& F);

// Outward and inward solutions at energy E joined at r_match on
// log_grid(r_min, r_max, n_grid) and normalized to unit norm.
RadialState build_state(const RadialProblem& p, double E, double r_match, double r_max,
                        const ShootingOptions& opt = {});

// Lowest-energy bound state with the given node count, searched on
// E = m cos(theta) with theta uniform.  found = false when none exists.
std::pair<ShootingResult, RadialState> find_bound_state(const RadialProblem& p, int nodes,
                                                        const ShootingOptions& opt = {});

struct ScanSample {
  double E = 0.0;
  bool in_gap = false;
  double defect = 0.0;         // only for in_gap samples
  double tail_fraction = 1.0;  // continuum only: share of the outward norm in [r_cap/2, r_cap]
};

struct SpectrumScan {
  std::vector<ScanSample> samples;
  std::vector<std::pair<double, double>> sign_changes;  // defect brackets
  std::vector<double> embedded_candidates;  // |E| >= m samples with a normalizable outward solution
  double min_continuum_tail = 1.0;
};

// Uniform scan of [E_lo, E_hi].  Inside the gap the matching defect is
// evaluated; outside it no decaying seed exists, and the outward solution
// is checked for normalizability instead (tail_fraction < 1e-3 would flag an
// embedded eigenvalue).
SpectrumScan scan_spectrum(const RadialProblem& p, double E_lo, double E_hi, std::size_t n,
                           const ShootingOptions& opt = {});

struct PoissonSolution {
  std::vector<double> r, A0, dA0, d2A0;
  double q_interior = 0.0;
  double q_total = 0.0;       // r A0 as r -> infinity
  double density_integral = 0.0;  // integral of h r^2 dr from 0
  RadialPotential potential() const;
};

// A0 = q_interior / r - coupling * (Q(r)/r + P(r)),
// Q = int_0^r h s^2 ds, P = int_r^inf h s ds, so that
// Delta A0 = coupling * h and q_total = q_interior - coupling * Q(inf).
// The part of Q below r_min uses the local power law of h.  UsageError on
// negative or non-finite h, or when h grows like r^-3 or faster at r_min.
PoissonSolution poisson_solve_radial(const std::vector<double>& r, const std::vector<double>& h,
                                     double q_interior, double coupling = 1.0);

}  // namespace mdlab::radial
