#pragma once

// Synthetic field families shared by the field-model tests and the
// acceptance binary.

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "mdlab/field.hpp"

namespace fixtures {

using mdlab::cplx;
using mdlab::field::Grid;
using mdlab::field::PotentialField;
using mdlab::field::SpinorComponents;

// Smooth random components U_A, V_A kept close to a canonical dyad so that
// U_C V^C stays away from zero.
struct SmoothRandom {
  struct Mode {
    std::array<double, 3> k;
    double phase;
    cplx amp;
  };
  std::array<std::array<Mode, 3>, 4> spin;  // per component
  std::array<std::array<Mode, 2>, 4> pot;   // per A^alpha

  explicit SmoothRandom(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& c : spin)
      for (auto& m : c) m = {{2 * u(rng), 2 * u(rng), 2 * u(rng)}, 3 * u(rng), cplx(u(rng), u(rng)) * 0.25};
    for (auto& c : pot)
      for (auto& m : c) m = {{2 * u(rng), 2 * u(rng), 2 * u(rng)}, 3 * u(rng), cplx(u(rng), 0) * 0.5};
  }

  template <std::size_t N>
  static cplx eval(const std::array<Mode, N>& ms, const std::array<double, 3>& x) {
    cplx s{};
    for (const auto& m : ms)
      s += m.amp * std::sin(m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] + m.phase);
    return s;
  }

  SpinorComponents components(const Grid& g) const {
    SpinorComponents c(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto x = g.point(q);
      c.U0[q] = 1.0 + eval(spin[0], x);
      c.U1[q] = eval(spin[1], x);
      c.V0[q] = eval(spin[2], x);
      c.V1[q] = 1.0 + eval(spin[3], x);
    }
    return c;
  }

  PotentialField potential(const Grid& g, double E, double m, double e) const {
    PotentialField A(g, E, m, e);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto x = g.point(q);
      for (int a = 0; a < 4; ++a) A.A[a][q] = eval(pot[a], x).real();
    }
    return A;
  }
};

// Exact solution of the stationary Dirac system: a plane wave in a constant
// background potential, then gauge transformed by
// Lambda = g0 sin(x + 0.5 y) cos(0.7 z), which makes A^k position dependent:
// U -> e^{i Lambda} U, V -> e^{-i Lambda} V, A^k -> A^k - d_k Lambda / e.
struct GaugedPlaneWave {
  double m = 1.0, e = 0.7;
  std::array<double, 3> p{0.3, -0.2, 0.5};
  std::array<double, 4> A_const{0.15, 0.1, -0.05, 0.2};
  std::array<cplx, 2> U_amp{cplx(0.8, 0.1), cplx(-0.3, 0.4)};
  double g0 = 0.3;
  double E = 0.0;           // set by solve()
  std::array<cplx, 2> W_amp{};

  GaugedPlaneWave() { solve(); }

  void solve() {
    const std::array<double, 3> pi{p[0] + e * A_const[1], p[1] + e * A_const[2],
                                   p[2] + e * A_const[3]};
    const double pi2 = pi[0] * pi[0] + pi[1] * pi[1] + pi[2] * pi[2];
    const double Ep = std::sqrt(m * m + pi2);
    E = Ep - e * A_const[0];
    // W = (E' + sigma.pi) U / m
    const cplx sU0 = pi[2] * U_amp[0] + cplx(pi[0], -pi[1]) * U_amp[1];
    const cplx sU1 = cplx(pi[0], pi[1]) * U_amp[0] - pi[2] * U_amp[1];
    W_amp = {(Ep * U_amp[0] + sU0) / m, (Ep * U_amp[1] + sU1) / m};
  }

  double Lambda(const std::array<double, 3>& x) const {
    return g0 * std::sin(x[0] + 0.5 * x[1]) * std::cos(0.7 * x[2]);
  }
  std::array<double, 3> grad_Lambda(const std::array<double, 3>& x) const {
    const double s = std::sin(x[0] + 0.5 * x[1]), c = std::cos(x[0] + 0.5 * x[1]);
    const double cz = std::cos(0.7 * x[2]), sz = std::sin(0.7 * x[2]);
    return {g0 * c * cz, 0.5 * g0 * c * cz, -0.7 * g0 * s * sz};
  }

  SpinorComponents components(const Grid& g) const {
    SpinorComponents c(g);
    const cplx I{0, 1};
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto x = g.point(q);
      const double ph = p[0] * x[0] + p[1] * x[1] + p[2] * x[2];
      const cplx f = std::exp(I * (ph + Lambda(x)));
      const cplx W0 = W_amp[0] * f, W1 = W_amp[1] * f;
      c.U0[q] = U_amp[0] * f;
      c.U1[q] = U_amp[1] * f;
      // V^i = conj(W_i); V_0 = -V^1, V_1 = V^0
      c.V0[q] = -std::conj(W1);
      c.V1[q] = std::conj(W0);
    }
    return c;
  }

  std::array<double, 4> A_exact(const std::array<double, 3>& x) const {
    const auto gl = grad_Lambda(x);
    return {A_const[0], A_const[1] - gl[0] / e, A_const[2] - gl[1] / e, A_const[3] - gl[2] / e};
  }

  PotentialField potential(const Grid& g) const {
    PotentialField A(g, E, m, e);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto a = A_exact(g.point(q));
      for (int k = 0; k < 4; ++k) A.A[k][q] = a[k];
    }
    return A;
  }
};

}  // namespace fixtures
