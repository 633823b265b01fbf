#pragma once

#include <array>
#include <complex>

#include "mdlab/field.hpp"
#include "mdlab/radial.hpp"

namespace mdlab::radial {

// Two-component spin-angle function Omega_kappa for m_j = 1/2 at unit
// direction n.  Omega_{-kappa} = -(sigma.n) Omega_kappa.
std::array<cplx, 2> spin_angle(int kappa, const std::array<double, 3>& n);

struct EmbedOptions {
  int n = 64;                                  // points per side
  double center_factor = 1.5;                  // patch center at this many r_peak
  double half_width_factor = 0.3;              // half side length in r_peak
  std::array<double, 3> direction{1.0, 1.0, 1.0};
};

struct Embedding {
  field::SpinorComponents psi;                 // unit normalized
  field::PotentialField A;                     // A0 from the state's own density, A^k = 0
  double r_peak = 0.0;
  double charge_scale = 0.0;                   // Q_psi of the source term
};

// Reconstructs
//   a = (G/r) Omega_kappa, b = i (F/r) Omega_{-kappa},
//   U = (a - b)/sqrt2, conj(V^Adot) = (a + b)/sqrt2
// on a Cartesian patch.  G and F are quintic Hermite interpolants with the
// derivatives taken from the radial equations.
Embedding embed(const RadialState& rs, const EmbedOptions& opt = {});

struct EmbedReport {
  field::ResidualReport dirac, reality, maxwell;
  double max_dirac = 0.0;     // over the Cartesian and spinor forms
  double max_reality = 0.0;
  double max_maxwell = 0.0;   // over the four components and the Lorenz condition
  double r_peak = 0.0;
  double max() const;
};

EmbedReport embed_and_check(const RadialState& rs, const EmbedOptions& opt = {});

}  // namespace mdlab::radial
