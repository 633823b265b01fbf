#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdlab/radial.hpp"

namespace mdlab::scf {

struct ScfConfig {
  radial::Channel ch;             // kappa, m, e
  int nodes = 0;                  // radial node count of the orbital
  double q_interior = 0.0;
  double q_psi = 1.0;             // fixed charge normalization of the orbital
  double alpha_mix = 0.5;
  int max_iterations = 200;
  double tol_E = 1e-10;
  double tol_A = 1e-10;           // sup norm of the A0 update
  radial::ShootingOptions shoot;  // r_max = 0: fixed from the decoupled solution

  void validate() const;          // UsageError on bad values
};

struct ScfIteration {
  double E = 0.0;
  double dA_inf = 0.0;            // sup |A0_new - A0_old|
  double dh_l2 = 0.0;             // (int (h - h_prev)^2 r^2 dr)^(1/2)
};

struct ScfTrace {
  std::vector<ScfIteration> iterations;
  bool converged = false;
  std::string message;
};

struct ScfResult {
  radial::RadialState state;      // A0 is the potential the orbital was solved in
  radial::ShootingResult shooting;
  ScfTrace trace;
  double q0 = 0.0;                // q_interior - e Q_psi int h r^2 dr
  std::vector<double> a_self;     // A0 - q_interior / r on the state grid
  double r_max = 0.0;
};

// Fixed-point iteration density -> Poisson -> eigenvalue with linear mixing.
// Starts from the pure q_interior Coulomb potential unless a guess is given.
// Non-convergence is reported in the trace, not thrown.
ScfResult scf_solve(const ScfConfig& cfg, const std::optional<radial::RadialPotential>& guess = {});

// The potential the result's state was solved in.  UsageError without a_self.
radial::RadialPotential self_potential(const ScfResult& res);

// One more Dirac + Poisson cycle on a converged result: returns (|dE|, sup |dA0|).
std::pair<double, double> fixed_point_residual(const ScfConfig& cfg, const ScfResult& res);

struct SweepCell {
  double e = 0.0, q_psi = 0.0, q_interior = 0.0;
};

struct SweepRow {
  SweepCell cell;
  ScfResult result;
};

// Independent scf_solve per cell on up to `threads` worker threads.  Rows
// are returned in cell order; a failing cell is recorded, not fatal.
std::vector<SweepRow> sweep(const ScfConfig& base, const std::vector<SweepCell>& cells,
                            unsigned threads = 1);

// q_interior for which the self-consistent E/m equals target, by root
// finding on scf_solve.  InsufficientDataError if no bracket is found.
ScfResult solve_for_energy(ScfConfig cfg, double target_E_over_m);

}  // namespace mdlab::scf
