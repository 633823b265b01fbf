#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdlab/radial.hpp"
#include "mdlab/spinor.hpp"

namespace mdlab::asym {

using json = nlohmann::ordered_json;

enum class Verdict { pass, fail, not_applicable };
const char* to_string(Verdict v);

// Diagnostic record with the stable layout
// {diagnostic, inputs, fitted, predicted, tolerance, verdict}.
struct Report {
  std::string diagnostic;
  json inputs = json::object(), fitted = json::object(), predicted = json::object(),
       tolerance = json::object();
  Verdict verdict = Verdict::not_applicable;
  json to_json() const;
};

struct Window {
  double r1 = 0.0, r2 = 0.0;
};

// Outermost decade of the data, [r2/10, r2] with r2 = 0.95 r_last.
// InsufficientDataError when the data do not reach down to r2/10.
Window default_window(const std::vector<double>& r);

constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- limit formula

struct LimitFormulaReport {
  Window window;
  double E_over_m = 0.0;
  std::vector<double> r, value;   // cos(chi) / sqrt(1 + lambda^2/2) per shell
  double gamma = 0.0, C = 0.0;    // |E/m - value| ~ C r^-gamma over the window
  double rms = 0.0;               // rms log residual of that fit
  bool monotone = false;          // deviation non-increasing over the outer half of the window
  Report report(double gamma_tol = 0.3) const;  // pass: monotone and |gamma - 1| <= gamma_tol
};

// Deviations at or below resolution count as zero; gamma is then the
// infinite sentinel.
LimitFormulaReport limit_formula_check(const std::vector<double>& r, const std::vector<double>& cos_chi,
                                       const std::vector<double>& lambda_sq, double E_over_m,
                                       std::optional<Window> w = {}, double resolution = 0.0);
// Radial states: cos(chi) / sqrt(1 + lambda^2/2) = (G^2 - F^2) / (G^2 + F^2)
// on every shell, with a round-off resolution of 64 eps.
LimitFormulaReport limit_formula_check(const radial::RadialState& s, std::optional<Window> w = {});
std::vector<double> limit_formula_values(const radial::RadialState& s);

// ---------------------------------------------------------------- decay fits

enum class DecayModel { exponential, stretched, power };
const char* to_string(DecayModel m);

struct DecayFitReport {
  DecayModel model = DecayModel::exponential;
  double C = 0.0;
  double rate = 0.0;   // a (exponential), b (stretched), 0 (power)
  double p = 0.0;
  Window window;
  double rms = 0.0;    // rms log residual
  std::size_t samples = 0;
  // pass when rate and p are within rel_tol of the prediction
  Report report(std::optional<std::array<double, 2>> predicted = {}, double rel_tol = 0.01) const;
};

// Least squares of log h against
//   exponential: log C - a r - p log r
//   stretched:   log C - b sqrt(r) - p log r
//   power:       log C - p log r
// UsageError on non-positive samples in the window.
DecayFitReport fit_decay(const std::vector<double>& r, const std::vector<double>& h, DecayModel model,
                         std::optional<Window> w = {});

struct ComparisonReport {
  double k = 0.0, rho = 0.0, C0 = 0.0;
  double margin = 0.0;     // min over r >= rho of 1 - h / w; negative when violated
  double r_worst = 0.0;
  bool holds = false;
  Report report() const;
};

// h <= C0 e^{-sqrt2 k r} / r for r >= rho with k = k_factor sqrt(m^2 - E^2)
// and C0 = rho e^{sqrt2 k rho} sup_{r >= rho} h.  rho defaults to the start
// of the window and is moved up to the next sample.  InapplicableError for
// |E| >= m.
ComparisonReport comparison_bound_check(const std::vector<double>& r, const std::vector<double>& h,
                                        double E, double m, std::optional<double> rho = {},
                                        double k_factor = 0.9);

// exponential_decay: pass when the fitted exponential rate of h is at
// least sqrt2 k_factor sqrt(m^2 - E^2).
Report exponential_rate_report(const DecayFitReport& fit, double E, double m, double k_factor = 0.9);

// spectral_gap: pass when every defect sign change lies in (-m, m), one of
// them lies within one scan step of E_state, and no continuum sample is
// normalizable.
Report spectral_gap_report(const radial::SpectrumScan& scan, double m, double E_state);

// ---------------------------------------------------------------- staticity

struct StaticityReport {
  Window window;
  double exponent = 0.0;   // |s| ~ r^-exponent, kInfiniteExponent when s vanishes
  double rms = 0.0;
  Report report(std::optional<double> predicted = {}, double rel_tol = 0.05) const;
};

// s = l^k + n^k from the dyad at each radius.
StaticityReport staticity_check(const std::vector<double>& r, const std::vector<spinor::Dyad>& dyads,
                                std::optional<Window> w = {});
StaticityReport staticity_check(const std::vector<double>& r, const std::vector<double>& s_norm,
                                std::optional<Window> w = {});

// ---------------------------------------------------------------- zeta expansion

struct ZetaReport {
  Window window;
  long branch = 0;                         // n in chi = n pi + zeta
  std::array<double, 3> fitted{};          // coefficients of r^-1/2, r^-1, r^-3/2
  std::array<double, 3> predicted{};
  std::array<double, 3> rel_error{};
  int eps1 = 0, eps2 = 0, eps = 0;         // fitted sign branch, eps eps1 eps2 = 1
  bool signs_consistent = false;           // signs of c1, c2, c3 fit one eps1
  Report report(double rel_tol = 1e-3) const;
};

// predicted c1 = sqrt2 eps1 lambda, c2 = -eps1/(4m),
// c3 = eps1 (16 lambda^4 m^2 + 9) / (96 sqrt2 lambda m^2), eps1 = sign of fitted c1.
std::array<double, 3> zeta_coefficients(double m, double lambda, int eps1);
ZetaReport zeta_expansion_fit(const std::vector<double>& r, const std::vector<double>& chi, double m,
                              double lambda, int eps = 1, std::optional<Window> w = {});

// ---------------------------------------------------------------- charge and dipole

struct Shell {
  double r = 0.0;
  int n_theta = 0, n_phi = 0;
  std::vector<double> values;   // index it * n_phi + ip; theta at Gauss-Legendre nodes in cos(theta)
};

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);
Shell sample_shell(const std::function<double(const std::array<double, 3>&)>& f, double r, int n_theta,
                   int n_phi);

struct ChargeDipoleReport {
  double q0 = 0.0;                 // r times the monopole average, outermost shell
  std::array<double, 3> d{};       // (3/4pi) r^2 int A0 n dOmega, outermost shell
  double d_norm = 0.0;
  double q0_spread = 0.0, d_spread = 0.0;  // variation across shells
  std::vector<double> radii;
  Report report(std::optional<double> q0_expected = {}, double rel_tol = 1e-6) const;
};

// InsufficientDataError with fewer than 2 shells, n_theta < 2 or n_phi < 3.
ChargeDipoleReport charge_and_dipole(const std::vector<Shell>& shells);

// ---------------------------------------------------------------- lambda relation

struct LambdaReport {
  double E = 0.0, m = 0.0, e = 0.0, q0 = 0.0;
  int eps = 0;
  double lambda_sq = 0.0, lambda = 0.0;
  Verdict verdict = Verdict::not_applicable;
  Report report() const;
};

// lambda^2 = -eps e q0 / m with eps = E/m.  InapplicableError unless |E| = m.
LambdaReport lambda_relation_check(double E, double m, double e, double q0);

// ---------------------------------------------------------------- synthetic data

namespace synthetic {
std::vector<double> exponential(const std::vector<double>& r, double C, double a, double p);
std::vector<double> stretched(const std::vector<double>& r, double C, double b, double p);
std::vector<double> power(const std::vector<double>& r, double C, double p);
// C e^{-4 sqrt2 m lambda sqrt r} / r^{3/2}
std::vector<double> stretched_envelope(const std::vector<double>& r, double m, double lambda, double C = 1.0);
// cos chi = (E/m)(1 + delta/r), lambda = 0
std::vector<double> limit_cos_chi(const std::vector<double>& r, double E_over_m, double delta);
// chi = n pi + the three expansion terms, plus c4 r^-2
std::vector<double> zeta_chi(const std::vector<double>& r, double m, double lambda, int eps1, long n = 0,
                             double c4 = 0.0);
// Dyad boosted along z with |l^k + n^k| = s.
spinor::Dyad boosted_dyad(double s);
std::vector<spinor::Dyad> staticity_dyads(const std::vector<double>& r, double amplitude, double exponent);
}  // namespace synthetic

}  // namespace mdlab::asym
