#include "mdlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

#include "mdlab/errors.hpp"

namespace mdlab::asym {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

json window_json(const Window& w) { return json::array({w.r1, w.r2}); }

std::vector<std::size_t> in_window(const std::vector<double>& r, const Window& w) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= w.r1 && r[i] <= w.r2) idx.push_back(i);
  return idx;
}

Window resolve(const std::vector<double>& r, const std::optional<Window>& w) {
  if (!w) return default_window(r);
  if (!(w->r1 > 0.0 && w->r2 > w->r1)) throw UsageError("fit window must satisfy 0 < r1 < r2");
  if (r.empty() || w->r1 < r.front() || w->r2 > r.back())
    throw InsufficientDataError("fit window lies outside the data range");
  return *w;
}

struct Lsq {
  Eigen::VectorXd coef;
  double rms = 0.0;
};

// Column-scaled least squares.
Lsq least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() < X.cols() + 1) throw InsufficientDataError("too few samples in the fit window");
  Eigen::VectorXd scale = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd c = Xs.colPivHouseholderQr().solve(y);
  Lsq out;
  out.coef = c.cwiseQuotient(scale);
  out.rms = std::sqrt((X * out.coef - y).squaredNorm() / double(y.size()));
  return out;
}

// Power-law fit of positive samples: log y = log C - q log r.
struct PowerFit {
  double C = 0.0, q = 0.0, rms = 0.0;
  bool vanishing = false;
};

// Samples at or below floor count as zero; all zero gives the vanishing sentinel.
PowerFit power_fit(const std::vector<double>& r, const std::vector<double>& y, const Window& w,
                   double floor = 1e-300) {
  const auto idx = in_window(r, w);
  std::vector<std::size_t> pos;
  bool all_below = true;
  for (auto i : idx) {
    if (y[i] > 1e-300) pos.push_back(i);
    if (y[i] > floor) all_below = false;
  }
  PowerFit f;
  if (pos.empty() || all_below) {
    f.vanishing = true;
    f.q = kInfiniteExponent;
    return f;
  }
  Eigen::MatrixXd X(pos.size(), 2);
  Eigen::VectorXd v(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) {
    X(k, 0) = 1.0;
    X(k, 1) = -std::log(r[pos[k]]);
    v(k) = std::log(y[pos[k]]);
  }
  const Lsq l = least_squares(X, v);
  f.C = std::exp(l.coef(0));
  f.q = l.coef(1);
  f.rms = l.rms;
  return f;
}

bool close_rel(double fit, double pred, double tol) {
  return std::abs(fit - pred) <= tol * std::max(std::abs(pred), 1e-300);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "not_applicable";
  }
}

const char* to_string(DecayModel m) {
  switch (m) {
    case DecayModel::exponential: return "exponential";
    case DecayModel::stretched: return "stretched";
    default: return "power";
  }
}

json Report::to_json() const {
  json j;
  j["diagnostic"] = diagnostic;
  j["inputs"] = inputs;
  j["fitted"] = fitted;
  j["predicted"] = predicted;
  j["tolerance"] = tolerance;
  j["verdict"] = to_string(verdict);
  return j;
}

Window default_window(const std::vector<double>& r) {
  if (r.size() < 4) throw InsufficientDataError("too few samples for a fit window");
  Window w;
  w.r2 = 0.95 * r.back();
  w.r1 = w.r2 / 10.0;
  if (w.r1 < r.front()) throw InsufficientDataError("data range too short for a one-decade fit window");
  return w;
}

// ---------------------------------------------------------------- limit formula

LimitFormulaReport limit_formula_check(const std::vector<double>& r, const std::vector<double>& cos_chi,
                                       const std::vector<double>& lambda_sq, double E_over_m,
                                       std::optional<Window> w, double resolution) {
  if (cos_chi.size() != r.size() || lambda_sq.size() != r.size())
    throw UsageError("limit_formula_check: size mismatch");
  LimitFormulaReport rep;
  rep.window = resolve(r, w);
  rep.E_over_m = E_over_m;
  rep.r = r;
  rep.value.resize(r.size());
  std::vector<double> dev(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (lambda_sq[i] < 0.0) throw UsageError("lambda^2 must be non-negative");
    rep.value[i] = cos_chi[i] / std::sqrt(1.0 + 0.5 * lambda_sq[i]);
    dev[i] = std::abs(E_over_m - rep.value[i]);
  }
  const PowerFit f = power_fit(r, dev, rep.window, std::max(resolution, 1e-300));
  rep.gamma = f.q;
  rep.C = f.C;
  rep.rms = f.rms;
  const auto idx = in_window(r, rep.window);
  const double mid = 0.5 * (rep.window.r1 + rep.window.r2);
  rep.monotone = true;
  double prev = -1.0;
  for (auto i : idx) {
    if (r[i] < mid) continue;
    if (prev >= 0.0 && dev[i] > prev + 1e-13) rep.monotone = false;
    prev = dev[i];
  }
  return rep;
}

std::vector<double> limit_formula_values(const radial::RadialState& s) {
  std::vector<double> v(s.r.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double g2 = s.G[i] * s.G[i], f2 = s.F[i] * s.F[i];
    v[i] = (g2 - f2) / (g2 + f2);
  }
  return v;
}

LimitFormulaReport limit_formula_check(const radial::RadialState& s, std::optional<Window> w) {
  return limit_formula_check(s.r, limit_formula_values(s), std::vector<double>(s.r.size(), 0.0), s.E / s.m, w,
                             64.0 * std::numeric_limits<double>::epsilon());
}

Report LimitFormulaReport::report(double gamma_tol) const {
  Report r;
  r.diagnostic = "limit_formula";
  r.inputs = {{"E_over_m", E_over_m}, {"window", window_json(window)}, {"samples", this->r.size()}};
  r.fitted = {{"gamma", number(gamma)}, {"C", C}, {"rms_log_residual", rms}, {"monotone_outer_half", monotone}};
  r.predicted = {{"gamma", 1.0}};
  r.tolerance = {{"gamma_abs", gamma_tol}};
  if (std::isinf(gamma))
    r.verdict = Verdict::pass;  // identically at the limit
  else
    r.verdict = monotone && std::abs(gamma - 1.0) <= gamma_tol ? Verdict::pass : Verdict::fail;
  return r;
}

// ---------------------------------------------------------------- decay fits

DecayFitReport fit_decay(const std::vector<double>& r, const std::vector<double>& h, DecayModel model,
                         std::optional<Window> w) {
  if (h.size() != r.size()) throw UsageError("fit_decay: size mismatch");
  DecayFitReport rep;
  rep.model = model;
  rep.window = resolve(r, w);
  const auto idx = in_window(r, rep.window);
  for (auto i : idx)
    if (!(h[i] > 0.0)) throw UsageError("fit_decay: non-positive sample at r = " + std::to_string(r[i]));
  const int cols = model == DecayModel::power ? 2 : 3;
  Eigen::MatrixXd X(idx.size(), cols);
  Eigen::VectorXd y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double x = r[idx[k]];
    X(k, 0) = 1.0;
    X(k, 1) = -std::log(x);
    if (cols == 3) X(k, 2) = model == DecayModel::exponential ? -x : -std::sqrt(x);
    y(k) = std::log(h[idx[k]]);
  }
  const Lsq l = least_squares(X, y);
  rep.C = std::exp(l.coef(0));
  rep.p = l.coef(1);
  rep.rate = cols == 3 ? l.coef(2) : 0.0;
  rep.rms = l.rms;
  rep.samples = idx.size();
  return rep;
}

Report DecayFitReport::report(std::optional<std::array<double, 2>> pred, double rel_tol) const {
  Report r;
  r.diagnostic = std::string("decay_fit_") + to_string(model);
  r.inputs = {{"model", to_string(model)}, {"window", window_json(window)}, {"samples", samples}};
  r.fitted = {{"C", C}, {"rate", rate}, {"p", p}, {"rms_log_residual", rms}};
  if (pred) {
    r.predicted = {{"rate", (*pred)[0]}, {"p", (*pred)[1]}};
    r.tolerance = {{"relative", rel_tol}};
    const bool rate_ok = model == DecayModel::power || close_rel(rate, (*pred)[0], rel_tol);
    r.verdict = rate_ok && close_rel(p, (*pred)[1], rel_tol) ? Verdict::pass : Verdict::fail;
  }
  return r;
}

ComparisonReport comparison_bound_check(const std::vector<double>& r, const std::vector<double>& h,
                                        double E, double m, std::optional<double> rho, double k_factor) {
  if (h.size() != r.size()) throw UsageError("comparison_bound_check: size mismatch");
  if (std::abs(E) >= m) throw InapplicableError("comparison bound needs |E| < m");
  ComparisonReport rep;
  rep.k = k_factor * std::sqrt(m * m - E * E);
  const double rho_req = rho ? *rho : default_window(r).r1;
  const double r_end = 0.95 * r.back();
  if (!(rho_req >= r.front() && rho_req < r_end)) throw InsufficientDataError("rho outside the data range");
  // the boundary sphere sits on a sample so that w(rho) = sup h exactly
  rep.rho = *std::lower_bound(r.begin(), r.end(), rho_req);
  double sup = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= rep.rho) sup = std::max(sup, h[i]);
  rep.C0 = rep.rho * std::exp(kSqrt2 * rep.k * rep.rho) * sup;
  rep.margin = 1.0;
  const double logC0 = std::log(rep.rho) + kSqrt2 * rep.k * rep.rho + std::log(std::max(sup, 1e-300));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < rep.rho || r[i] > r_end) continue;
    const double logw = logC0 - kSqrt2 * rep.k * r[i] - std::log(r[i]);
    const double ratio = h[i] > 0.0 ? std::exp(std::log(h[i]) - logw) : 0.0;
    if (1.0 - ratio < rep.margin) {
      rep.margin = 1.0 - ratio;
      rep.r_worst = r[i];
    }
  }
  rep.holds = rep.margin >= -1e-12;
  return rep;
}

Report ComparisonReport::report() const {
  Report r;
  r.diagnostic = "comparison_bound";
  r.inputs = {{"k", k}, {"rho", rho}};
  r.fitted = {{"C0", C0}, {"margin", margin}, {"r_worst", r_worst}};
  r.predicted = {{"margin_min", 0.0}};
  r.tolerance = {{"margin_abs", 1e-12}};
  r.verdict = holds ? Verdict::pass : Verdict::fail;
  return r;
}

Report exponential_rate_report(const DecayFitReport& fit, double E, double m, double k_factor) {
  if (fit.model != DecayModel::exponential) throw UsageError("exponential_rate_report needs an exponential fit");
  if (std::abs(E) >= m) throw InapplicableError("exponential rate bound needs |E| < m");
  const double bound = kSqrt2 * k_factor * std::sqrt(m * m - E * E);
  Report r;
  r.diagnostic = "exponential_decay";
  r.inputs = {{"E", E}, {"m", m}, {"k_factor", k_factor}, {"window", window_json(fit.window)}};
  r.fitted = {{"rate", fit.rate}, {"p", fit.p}, {"rms_log_residual", fit.rms}};
  r.predicted = {{"rate_lower_bound", bound}};
  r.tolerance = {{"rate", "fitted >= bound"}};
  r.verdict = fit.rate >= bound ? Verdict::pass : Verdict::fail;
  return r;
}

Report spectral_gap_report(const radial::SpectrumScan& scan, double m, double E_state) {
  Report r;
  r.diagnostic = "spectral_gap";
  r.inputs = {{"m", m},
              {"E_range", json::array({scan.samples.front().E, scan.samples.back().E})},
              {"samples", scan.samples.size()},
              {"E_state", E_state}};
  json brackets = json::array();
  bool inside = true, hits = false;
  // E_state may sit on a scan sample, where the defect sign is round-off
  const double step = scan.samples.size() > 1 ? scan.samples[1].E - scan.samples[0].E : 0.0;
  for (const auto& [a, b] : scan.sign_changes) {
    brackets.push_back(json::array({a, b}));
    inside = inside && std::abs(a) < m && std::abs(b) < m;
    hits = hits || (a - step <= E_state && E_state <= b + step);
  }
  r.fitted = {{"sign_changes", brackets},
              {"embedded_candidates", scan.embedded_candidates},
              {"min_continuum_tail", scan.min_continuum_tail}};
  r.predicted = {{"eigenvalues", "inside (-m, m) only"}};
  r.tolerance = {{"continuum_tail_fraction", 1e-3}};
  r.verdict = inside && hits && scan.embedded_candidates.empty() ? Verdict::pass : Verdict::fail;
  return r;
}

// ---------------------------------------------------------------- staticity

StaticityReport staticity_check(const std::vector<double>& r, const std::vector<double>& s_norm,
                                std::optional<Window> w) {
  if (s_norm.size() != r.size()) throw UsageError("staticity_check: size mismatch");
  StaticityReport rep;
  rep.window = resolve(r, w);
  const PowerFit f = power_fit(r, s_norm, rep.window);
  rep.exponent = f.q;
  rep.rms = f.rms;
  return rep;
}

StaticityReport staticity_check(const std::vector<double>& r, const std::vector<spinor::Dyad>& dyads,
                                std::optional<Window> w) {
  if (dyads.size() != r.size()) throw UsageError("staticity_check: size mismatch");
  std::vector<double> s(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto sv = spinor::staticity(spinor::tetrad_from_dyad(dyads[i]));
    s[i] = std::sqrt(sv.s[0] * sv.s[0] + sv.s[1] * sv.s[1] + sv.s[2] * sv.s[2]);
  }
  return staticity_check(r, s, w);
}

Report StaticityReport::report(std::optional<double> pred, double rel_tol) const {
  Report r;
  r.diagnostic = "staticity";
  r.inputs = {{"window", window_json(window)}};
  r.fitted = {{"exponent", number(exponent)}, {"rms_log_residual", rms}};
  if (pred) {
    r.predicted = {{"exponent", *pred}};
    r.tolerance = {{"relative", rel_tol}};
    r.verdict = std::isinf(exponent) || close_rel(exponent, *pred, rel_tol) ? Verdict::pass : Verdict::fail;
  }
  return r;
}

// ---------------------------------------------------------------- zeta expansion

std::array<double, 3> zeta_coefficients(double m, double lambda, int eps1) {
  if (!(lambda > 0.0)) throw InapplicableError("zeta expansion needs lambda > 0");
  const double e1 = eps1 >= 0 ? 1.0 : -1.0;
  const double l4 = lambda * lambda * lambda * lambda;
  return {kSqrt2 * e1 * lambda, -e1 / (4.0 * m), e1 * (16.0 * l4 * m * m + 9.0) / (96.0 * kSqrt2 * lambda * m * m)};
}

ZetaReport zeta_expansion_fit(const std::vector<double>& r, const std::vector<double>& chi, double m,
                              double lambda, int eps, std::optional<Window> w) {
  if (chi.size() != r.size()) throw UsageError("zeta_expansion_fit: size mismatch");
  if (!(lambda > 0.0)) throw InapplicableError("zeta expansion needs lambda > 0");
  ZetaReport rep;
  rep.window = resolve(r, w);
  rep.branch = std::lround(chi.back() / kPi);
  const auto idx = in_window(r, rep.window);
  Eigen::MatrixXd X(idx.size(), 3);
  Eigen::VectorXd y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double x = r[idx[k]];
    X(k, 0) = 1.0 / std::sqrt(x);
    X(k, 1) = 1.0 / x;
    X(k, 2) = 1.0 / (x * std::sqrt(x));
    y(k) = chi[idx[k]] - double(rep.branch) * kPi;
  }
  const Lsq l = least_squares(X, y);
  for (int j = 0; j < 3; ++j) rep.fitted[j] = l.coef(j);
  rep.eps1 = rep.fitted[0] >= 0.0 ? 1 : -1;
  rep.eps = eps >= 0 ? 1 : -1;
  rep.eps2 = rep.eps * rep.eps1;
  rep.predicted = zeta_coefficients(m, lambda, rep.eps1);
  for (int j = 0; j < 3; ++j) rep.rel_error[j] = std::abs(rep.fitted[j] - rep.predicted[j]) / std::abs(rep.predicted[j]);
  rep.signs_consistent = (rep.fitted[1] < 0) == (rep.eps1 > 0) && (rep.fitted[2] > 0) == (rep.eps1 > 0);
  return rep;
}

Report ZetaReport::report(double rel_tol) const {
  Report r;
  r.diagnostic = "zeta_expansion";
  r.inputs = {{"window", window_json(window)}, {"branch", branch}, {"eps", eps}};
  r.fitted = {{"c1", fitted[0]}, {"c2", fitted[1]}, {"c3", fitted[2]}, {"eps1", eps1}, {"eps2", eps2},
              {"signs_consistent", signs_consistent}};
  r.predicted = {{"c1", predicted[0]}, {"c2", predicted[1]}, {"c3", predicted[2]}};
  r.tolerance = {{"relative", rel_tol}};
  const bool ok = signs_consistent && std::all_of(rel_error.begin(), rel_error.end(),
                                                  [&](double e) { return e <= rel_tol; });
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  return r;
}

// ---------------------------------------------------------------- charge and dipole

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw UsageError("gauss_legendre: n must be positive");
  const auto pos = boost::math::legendre_p_zeros<double>(n);  // non-negative zeros
  std::vector<double> x;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it)
    if (*it > 0.0) x.push_back(-*it);
  for (double z : pos) x.push_back(z);
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dp = boost::math::legendre_p_prime(n, x[i]);
    w[i] = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
  }
  return {x, w};
}

Shell sample_shell(const std::function<double(const std::array<double, 3>&)>& f, double r, int n_theta,
                   int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw UsageError("sample_shell: empty angular grid");
  Shell s;
  s.r = r;
  s.n_theta = n_theta;
  s.n_phi = n_phi;
  const auto [x, w] = gauss_legendre(n_theta);
  s.values.resize(std::size_t(n_theta) * n_phi);
  for (int it = 0; it < n_theta; ++it) {
    const double ct = x[it], st = std::sqrt(1.0 - ct * ct);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double ph = 2.0 * kPi * ip / n_phi;
      s.values[std::size_t(it) * n_phi + ip] = f({r * st * std::cos(ph), r * st * std::sin(ph), r * ct});
    }
  }
  return s;
}

ChargeDipoleReport charge_and_dipole(const std::vector<Shell>& shells) {
  if (shells.size() < 2) throw InsufficientDataError("charge_and_dipole needs at least 2 shells");
  ChargeDipoleReport rep;
  std::vector<double> q(shells.size());
  std::vector<std::array<double, 3>> d(shells.size());
  std::size_t outer = 0;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    const Shell& s = shells[k];
    if (s.n_theta < 2 || s.n_phi < 3) throw InsufficientDataError("angular sampling too coarse for l = 1");
    if (s.values.size() != std::size_t(s.n_theta) * s.n_phi) throw UsageError("shell sample count mismatch");
    const auto [x, w] = gauss_legendre(s.n_theta);
    double mono = 0.0;
    std::array<double, 3> dip{};
    for (int it = 0; it < s.n_theta; ++it) {
      const double ct = x[it], st = std::sqrt(1.0 - ct * ct);
      for (int ip = 0; ip < s.n_phi; ++ip) {
        const double ph = 2.0 * kPi * ip / s.n_phi;
        const double wt = w[it] * 2.0 * kPi / s.n_phi;
        const double v = s.values[std::size_t(it) * s.n_phi + ip];
        mono += wt * v;
        dip[0] += wt * v * st * std::cos(ph);
        dip[1] += wt * v * st * std::sin(ph);
        dip[2] += wt * v * ct;
      }
    }
    q[k] = s.r * mono / (4.0 * kPi);
    for (int c = 0; c < 3; ++c) d[k][c] = 3.0 / (4.0 * kPi) * s.r * s.r * dip[c];
    if (s.r > shells[outer].r) outer = k;
    rep.radii.push_back(s.r);
  }
  rep.q0 = q[outer];
  rep.d = d[outer];
  rep.d_norm = std::sqrt(rep.d[0] * rep.d[0] + rep.d[1] * rep.d[1] + rep.d[2] * rep.d[2]);
  for (std::size_t k = 0; k < shells.size(); ++k) {
    rep.q0_spread = std::max(rep.q0_spread, std::abs(q[k] - rep.q0));
    const double dn = std::sqrt(d[k][0] * d[k][0] + d[k][1] * d[k][1] + d[k][2] * d[k][2]);
    rep.d_spread = std::max(rep.d_spread, std::abs(dn - rep.d_norm));
  }
  return rep;
}

Report ChargeDipoleReport::report(std::optional<double> q0_expected, double rel_tol) const {
  Report r;
  r.diagnostic = "charge_dipole";
  r.inputs = {{"radii", radii}};
  r.fitted = {{"q0", q0}, {"d", d}, {"d_norm", d_norm}, {"q0_spread", q0_spread}, {"d_spread", d_spread}};
  if (q0_expected) {
    r.predicted = {{"q0", *q0_expected}};
    r.tolerance = {{"q0_relative", rel_tol}};
    r.verdict = close_rel(q0, *q0_expected, rel_tol) ? Verdict::pass : Verdict::fail;
  }
  return r;
}

// ---------------------------------------------------------------- lambda relation

LambdaReport lambda_relation_check(double E, double m, double e, double q0) {
  if (!(m > 0.0)) throw UsageError("m must be positive");
  if (std::abs(std::abs(E) - m) > 1e-12 * m) throw InapplicableError("lambda relation needs |E| = m");
  LambdaReport rep;
  rep.E = E;
  rep.m = m;
  rep.e = e;
  rep.q0 = q0;
  rep.eps = E > 0 ? 1 : -1;
  rep.lambda_sq = -double(rep.eps) * e * q0 / m;
  if (q0 == 0.0 || e == 0.0) {
    rep.verdict = Verdict::not_applicable;
  } else if (rep.lambda_sq > 0.0) {
    rep.lambda = std::sqrt(rep.lambda_sq);
    rep.verdict = Verdict::pass;
  } else {
    rep.verdict = Verdict::fail;
  }
  return rep;
}

Report LambdaReport::report() const {
  Report r;
  r.diagnostic = "lambda_relation";
  r.inputs = {{"E", E}, {"m", m}, {"e", e}, {"q0", q0}};
  r.fitted = {{"eps", eps}, {"lambda_sq", lambda_sq}, {"lambda", lambda}};
  r.predicted = {{"lambda_sq_sign", "positive"}};
  r.tolerance = json::object();
  r.verdict = verdict;
  return r;
}

// ---------------------------------------------------------------- synthetic data

namespace synthetic {

std::vector<double> exponential(const std::vector<double>& r, double C, double a, double p) {
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = C * std::exp(-a * r[i]) / std::pow(r[i], p);
  return v;
}

std::vector<double> stretched(const std::vector<double>& r, double C, double b, double p) {
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = C * std::exp(-b * std::sqrt(r[i])) / std::pow(r[i], p);
  return v;
}

std::vector<double> power(const std::vector<double>& r, double C, double p) {
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = C / std::pow(r[i], p);
  return v;
}

std::vector<double> stretched_envelope(const std::vector<double>& r, double m, double lambda, double C) {
  return stretched(r, C, 4.0 * kSqrt2 * m * lambda, 1.5);
}

std::vector<double> limit_cos_chi(const std::vector<double>& r, double E_over_m, double delta) {
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double c = E_over_m * (1.0 + delta / r[i]);
    if (std::abs(c) > 1.0) throw UsageError("limit_cos_chi: |cos chi| > 1 at r = " + std::to_string(r[i]));
    v[i] = c;
  }
  return v;
}

std::vector<double> zeta_chi(const std::vector<double>& r, double m, double lambda, int eps1, long n, double c4) {
  const auto c = zeta_coefficients(m, lambda, eps1);
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r[i];
    v[i] = double(n) * kPi + c[0] / std::sqrt(x) + c[1] / x + c[2] / (x * std::sqrt(x)) + c4 / (x * x);
  }
  return v;
}

spinor::Dyad boosted_dyad(double s) {
  if (!(s >= 0.0)) throw UsageError("boosted_dyad: s must be non-negative");
  // o = (a, 0), iota = (0, 1/a) gives |s| = (a^-2 - a^2)/sqrt2 for a < 1
  const double a2 = 0.5 * (-kSqrt2 * s + std::sqrt(2.0 * s * s + 4.0));
  const double a = std::sqrt(a2);
  return spinor::dyad_normalize(spinor::Spinor2::lower(a, 0.0), spinor::Spinor2::lower(0.0, 1.0 / a));
}

std::vector<spinor::Dyad> staticity_dyads(const std::vector<double>& r, double amplitude, double exponent) {
  std::vector<spinor::Dyad> d;
  d.reserve(r.size());
  for (double x : r) d.push_back(boosted_dyad(amplitude * std::pow(x, -exponent)));
  return d;
}

}  // namespace synthetic

}  // namespace mdlab::asym
