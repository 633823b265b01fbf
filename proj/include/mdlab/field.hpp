#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mdlab/grid.hpp"
#include "mdlab/spinor.hpp"

namespace mdlab::field {

// Lower-index component fields U_A, V_A of the stationary Dirac pair
// u = e^{-iEt} U, v = e^{+iEt} V.
struct SpinorComponents {
  Grid grid;
  std::vector<cplx> U0, U1, V0, V1;

  explicit SpinorComponents(const Grid& g = {})
      : grid(g), U0(g.size()), U1(g.size()), V0(g.size()), V1(g.size()) {}
};

// Polar form U = sqrt(R) e^{i chi/2} o, V = sqrt(R) e^{i chi/2} iota with
// U_C V^C = R e^{i chi}.  Holds both representations so evaluators can use
// whichever the formula is written in.
class PolarField {
 public:
  // Pointwise decomposition.  DegeneracyError naming points where R < 1e-300.
  static PolarField from_components(SpinorComponents c);
  static PolarField from_polar(const Grid& g, std::vector<double> R, std::vector<double> chi,
                               std::vector<spinor::Dyad> dyads);

  const Grid& grid() const { return comp_.grid; }
  const SpinorComponents& components() const { return comp_; }
  const std::vector<double>& R() const { return R_; }
  const std::vector<double>& chi() const { return chi_; }
  const std::vector<spinor::Dyad>& dyads() const { return dyads_; }

  // max over points of |U_A - sqrt(R) e^{i chi/2} o_A| and same for V.
  double reconstruction_error() const;

 private:
  PolarField() = default;
  SpinorComponents comp_;
  std::vector<double> R_, chi_;
  std::vector<spinor::Dyad> dyads_;
};

struct PotentialField {
  Grid grid;
  std::array<std::vector<double>, 4> A;  // contravariant A^alpha
  double E = 0.0, m = 1.0, e = 1.0;

  explicit PotentialField(const Grid& g = {}, double E_ = 0.0, double m_ = 1.0, double e_ = 1.0)
      : grid(g), E(E_), m(m_), e(e_) {
    for (auto& a : A) a.assign(g.size(), 0.0);
  }

  // B^alpha = E delta^alpha_0 + A^alpha at one point.
  std::array<double, 4> B(std::size_t idx) const {
    return {E + A[0][idx], A[1][idx], A[2][idx], A[3][idx]};
  }
};

struct EquationNorm {
  std::string equation;
  double max_norm = 0.0;
  double l2_norm = 0.0;
};

struct ResidualReport {
  double grid_h = 0.0;
  std::size_t points = 0;
  std::vector<EquationNorm> equations;

  const EquationNorm& at(const std::string& name) const;
  double max_norm() const;
  // Largest max-norm among equations whose name starts with prefix.
  double max_norm(const std::string& prefix) const;
};

// Restricts norms to interior points for which include(x) is true.
struct ResidualOptions {
  std::function<bool(const std::array<double, 3>&)> include;
};

struct DiracPotential {
  PotentialField A;             // real parts; boundary shell set to NaN
  std::vector<std::array<double, 4>> imag;  // imaginary parts, same layout
  double reality_violation = 0.0;           // max |Im A^alpha| over interior
};

DiracPotential potential_from_dirac(const PolarField& psi, double E, double m, double e);

// Reports cartesian_1..cartesian_4 (explicit Cartesian form), spinor_u0, spinor_u1, spinor_v0,
// spinor_v1 (2-spinor contraction form) and assembly_mismatch, the largest
// difference between the two once mapped onto each other.
ResidualReport dirac_residual(const PolarField& psi, const PotentialField& A,
                              const ResidualOptions& opt = {});

// Raw pointwise values of the three reality conditions.
struct RealityFields {
  std::vector<cplx> uu, vv;  // real up to round-off
  std::vector<cplx> uv;
};
RealityFields reality_fields(const PolarField& psi, double m);
// Reports reality_uu, reality_vv (the two divergence conditions) and
// reality_uv (the complex condition, unnormalized).
ResidualReport reality_residual(const PolarField& psi, double m, const ResidualOptions& opt = {});

// Poisson form Delta A^alpha = 4 pi e j^alpha with j the current of
// charge_scale * psi, plus the Lorenz residual sum_j d_j A^j.
ResidualReport maxwell_residual(const PotentialField& A, const PolarField& psi,
                                double charge_scale = 1.0, const ResidualOptions& opt = {});
ResidualReport maxwell_residual(const PotentialField& A, const SpinorComponents& psi,
                                double charge_scale = 1.0, const ResidualOptions& opt = {});

// Second-order equations for U_0 and U_1: kg_1, kg_2.
ResidualReport klein_gordon_residual(const PolarField& psi, const PotentialField& A,
                                     const ResidualOptions& opt = {});

// A^0 from R, chi and the dyad products.  Complex: the imaginary part
// measures the reality violation.  Boundary shell set to NaN.
std::vector<cplx> a0_formula(const PolarField& psi, double E, double m, double e);

struct CurrentField {
  std::array<std::vector<double>, 4> j;  // sqrt2 R (l + n)
  std::array<std::vector<double>, 3> s;  // l^k + n^k
  std::vector<double> lambda_sq;
  std::vector<double> time_sum;          // l^0 + n^0
};
CurrentField current(const PolarField& psi);

// j^alpha straight from the components: sqrt2 sigma^alpha (u u-bar + v v-bar).
std::array<std::vector<double>, 4> current_from_components(const SpinorComponents& c);

struct ChargeIntegrals {
  double from_current = 0.0;  // sum j^0 h^3
  double from_dyad = 0.0;     // sum R(|o0|^2+|o1|^2+|iota^0|^2+|iota^1|^2) h^3
};
ChargeIntegrals charge_integrals(const PolarField& psi);

}  // namespace mdlab::field
