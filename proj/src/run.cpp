#include "mdlab/run.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <openssl/opensslv.h>

#include "mdlab/asymptotics.hpp"
#include "mdlab/embed.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/field_io.hpp"
#include "mdlab/scf.hpp"
#include "mdlab/spinor.hpp"

namespace mdlab::run {

using io::json;
using io::format_double;

io::json versions() {
  json v;
  v["mdlab"] = MDLAB_VERSION;
#if defined(__clang__)
  v["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  v["compiler"] = "gcc " __VERSION__;
#else
  v["compiler"] = "unknown";
#endif
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["boost"] = BOOST_LIB_VERSION;
  v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  v["openssl"] = OPENSSL_VERSION_TEXT;
  return v;
}

namespace {

// The output directory does not change any result; it stays out of the hash
// and the manifest so that runs into different directories can be compared.
json hashed_config(const cfg::RunConfig& c) {
  json e = c.echo;
  e.erase("run.out");
  return e;
}

}  // namespace

std::string manifest_hash(const cfg::RunConfig& c) {
  json j;
  j["config"] = hashed_config(c);
  j["versions"] = versions();
  return io::sha256_hex(io::to_json_text(j));
}

Output::Output(std::filesystem::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw IoError("cannot create output directory " + dir_.string());
}

void Output::add(const std::string& rel, const std::string& text) {
  const auto p = dir_ / rel;
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create " + p.parent_path().string());
  }
  io::write_text(p, text);
  files_.emplace_back(rel, io::sha256_hex(text));
}

void Output::csv(const std::string& rel, io::CsvTable t) {
  const bool has = std::any_of(t.meta.begin(), t.meta.end(), [](const auto& kv) { return kv.first == "manifest_hash"; });
  if (!has) t.meta.insert(t.meta.begin(), {"manifest_hash", hash_});
  add(rel, io::to_csv_text(t));
}

void Output::json(const std::string& rel, const io::json& body) {
  io::json j;
  j["schema_version"] = io::kSchemaVersion;
  j["manifest_hash"] = hash_;
  if (body.is_object()) {
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  } else {
    j["data"] = body;
  }
  add(rel, io::to_json_text(j));
}

void Output::manifest(const cfg::RunConfig& c, int exit_code, const std::string& summary) {
  auto files = files_;
  std::sort(files.begin(), files.end());
  io::json f = io::json::array();
  for (const auto& [p, h] : files) f.push_back({{"path", p}, {"sha256", h}});
  io::json j;
  j["schema_version"] = io::kSchemaVersion;
  j["manifest_hash"] = hash_;
  j["mode"] = cfg::to_string(c.mode);
  j["config"] = hashed_config(c);
  j["defaulted"] = c.defaulted;
  j["versions"] = versions();
  j["exit_code"] = exit_code;
  j["summary"] = summary;
  j["files"] = f;
  io::write_text(dir_ / "manifest.json", io::to_json_text(j));
}

namespace {

// Progress lines to the caller's stream and to run.log.
struct Log {
  std::ostream& os;
  std::ostringstream text;
  void operator()(const std::string& s) {
    os << s << '\n';
    text << s << '\n';
  }
};

struct Outcome {
  int code = ok;
  std::string summary;
};

const char* verdict(bool pass) { return pass ? "pass" : "fail"; }

json reports_json(const std::vector<asym::Report>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(r.to_json());
  return a;
}

bool none_failed(const std::vector<asym::Report>& rs) {
  return std::none_of(rs.begin(), rs.end(), [](const auto& r) { return r.verdict == asym::Verdict::fail; });
}

json embed_json(const radial::EmbedReport& e, int n, double tol) {
  json j;
  j["n"] = n;
  j["r_peak"] = e.r_peak;
  j["max_dirac"] = e.max_dirac;
  j["max_reality"] = e.max_reality;
  j["max_maxwell"] = e.max_maxwell;
  j["tolerance"] = tol;
  j["verdict"] = verdict(e.max() < tol);
  j["dirac"] = io::residual_json(e.dirac);
  j["reality"] = io::residual_json(e.reality);
  j["maxwell"] = io::residual_json(e.maxwell);
  return j;
}

std::string label(double E_over_m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "E%.2f", E_over_m);
  return buf;
}

// Point-nucleus Dirac level for kappa < 0 with nodes radial nodes.
double dirac_level(int kappa, int nodes, double Z, double m) {
  const double g = std::sqrt(kappa * kappa - Z * Z), d = nodes + g;
  return m / std::sqrt(1.0 + Z * Z / (d * d));
}

json scf_summary(const scf::ScfResult& r, double m) {
  json j;
  j["converged"] = r.trace.converged;
  j["message"] = r.trace.message;
  j["iterations"] = r.trace.iterations.size();
  j["E"] = r.state.E;
  j["E_over_m"] = r.state.E / m;
  j["q_interior"] = r.state.q_interior;
  j["z"] = r.state.e * r.state.q_interior;
  j["q_psi"] = r.state.q_psi;
  j["q0"] = r.q0;
  j["shooting"] = io::shooting_json(r.shooting);
  return j;
}

// Figure data for an exponential fit: r, h, C e^{-a r} r^{-p} over the window.
io::CsvTable decay_figure(const std::vector<double>& r, const std::vector<double>& h,
                          const asym::DecayFitReport& f) {
  std::vector<double> rr, hh;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= f.window.r1 && r[i] <= f.window.r2) {
      rr.push_back(r[i]);
      hh.push_back(h[i]);
    }
  std::vector<double> model;
  switch (f.model) {
    case asym::DecayModel::exponential: model = asym::synthetic::exponential(rr, f.C, f.rate, f.p); break;
    case asym::DecayModel::stretched: model = asym::synthetic::stretched(rr, f.C, f.rate, f.p); break;
    case asym::DecayModel::power: model = asym::synthetic::power(rr, f.C, f.p); break;
  }
  auto t = io::figure_csv(rr, hh, model);
  t.meta.emplace_back("model", asym::to_string(f.model));
  return t;
}

io::CsvTable limit_figure(const asym::LimitFormulaReport& lf) {
  std::vector<double> r, dev, model;
  for (std::size_t i = 0; i < lf.r.size(); ++i)
    if (lf.r[i] >= lf.window.r1 && lf.r[i] <= lf.window.r2) {
      r.push_back(lf.r[i]);
      dev.push_back(std::abs(lf.E_over_m - lf.value[i]));
      model.push_back(std::isinf(lf.gamma) ? 0.0 : lf.C * std::pow(lf.r[i], -lf.gamma));
    }
  auto t = io::figure_csv(r, dev, model);
  t.meta.emplace_back("model", "C r^-gamma");
  return t;
}

// Shells of A0(|x|) at two tail radii.
asym::ChargeDipoleReport far_field(const radial::RadialPotential& A0, double r_last) {
  std::vector<asym::Shell> shells;
  for (double f : {0.5, 0.9})
    shells.push_back(asym::sample_shell(
        [&](const std::array<double, 3>& x) { return A0(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); },
        f * r_last, 8, 12));
  return asym::charge_and_dipole(shells);
}

// ---------------------------------------------------------------- solve

Outcome do_solve(const cfg::RunConfig& c, Output& out, Log& log) {
  const auto& s = c.scf;
  log("solve: kappa=" + std::to_string(s.ch.kappa) + " nodes=" + std::to_string(s.nodes) +
      " z=" + format_double(s.ch.e * s.q_interior) + " q_psi=" + format_double(s.q_psi));
  const scf::ScfResult r = scf::scf_solve(s);
  out.csv("scf_trace.csv", io::scf_trace_csv(r.trace));
  json j = scf_summary(r, s.ch.m);
  j["m"] = s.ch.m;
  j["kappa"] = s.ch.kappa;
  j["nodes"] = s.nodes;
  if (s.ch.e * s.q_psi == 0.0 && s.ch.kappa < 0) {
    const double ref = dirac_level(s.ch.kappa, s.nodes, s.ch.e * s.q_interior, s.ch.m);
    j["point_nucleus_reference"] = {{"E_over_m", ref / s.ch.m}, {"difference", r.state.E / s.ch.m - ref / s.ch.m}};
  }
  if (!r.state.r.empty()) out.csv("state.csv", io::radial_state_csv(r.state));
  out.json("solve.json", j);
  if (!r.trace.converged) {
    log("solve: not converged: " + r.trace.message);
    return {failed, "not converged: " + r.trace.message};
  }
  radial::EmbedOptions eo;
  eo.n = c.embed_n;
  const auto emb = radial::embed_and_check(r.state, eo);
  out.json("embed.json", embed_json(emb, eo.n, 1e-5));
  log("solve: E/m=" + format_double(r.state.E / s.ch.m) + " embed max residual " + format_double(emb.max()));
  return {ok, "E/m = " + format_double(r.state.E / s.ch.m)};
}

// ---------------------------------------------------------------- sweep

Outcome do_sweep(const cfg::RunConfig& c, Output& out, Log& log) {
  const auto cells = c.sweep_cells();
  log("sweep: " + std::to_string(cells.size()) + " cells on " + std::to_string(c.threads) + " threads");
  const auto rows = scf::sweep(c.scf, cells, c.threads);
  int failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "states/cell_%04zu.csv", i);
    if (!rows[i].result.state.r.empty()) out.csv(name, io::radial_state_csv(rows[i].result.state));
    if (!rows[i].result.trace.converged) {
      ++failures;
      log("sweep: cell " + std::to_string(i) + " failed: " + rows[i].result.trace.message);
    }
  }
  out.csv("sweep.csv", io::sweep_csv(rows, c.scf.ch.m));
  const std::string sum = std::to_string(rows.size() - failures) + "/" + std::to_string(rows.size()) + " cells converged";
  log("sweep: " + sum);
  return {failures ? failed : ok, sum};
}

// ---------------------------------------------------------------- verify

struct DyadFixture {
  const char* name;
  spinor::Dyad dyad;
  std::array<std::array<cplx, 4>, 3> lnm;  // expected l, n, m
};

std::vector<DyadFixture> dyad_fixtures() {
  const double h = std::sqrt(0.5);
  const cplx i(0, 1);
  std::vector<DyadFixture> f;
  f.push_back({"canonical",
               spinor::dyad_normalize(spinor::Spinor2::lower(1, 0), spinor::Spinor2::lower(0, 1)),
               {{{h, 0, 0, -h}, {h, 0, 0, h}, {0, -h, -h * i, 0}}}});
  // a phase rotation o -> e^{i a} o, iota -> e^{-i a} iota leaves l, n and
  // multiplies m by e^{2 i a}
  const double a = 0.3;
  const cplx ph = std::exp(i * a);
  f.push_back({"phase_rotated",
               {spinor::Spinor2::lower(ph, 0), spinor::Spinor2::lower(0, 1.0 / ph)},
               {{{h, 0, 0, -h}, {h, 0, 0, h}, {0, -h * ph * ph, -h * i * ph * ph, 0}}}});
  return f;
}

Outcome do_verify(const cfg::RunConfig& c, Output& out, Log& log) {
  json summary;
  bool all = true;

  const auto suite = spinor::run_identity_suite(c.n_dyads, c.seed);
  {
    json j;
    j["samples"] = suite.samples;
    j["seed"] = suite.seed;
    j["tolerance"] = suite.tolerance;
    json checks = json::array();
    for (const auto& ch : suite.checks)
      checks.push_back({{"name", ch.name}, {"max_error", ch.max_error}, {"verdict", verdict(ch.max_error <= suite.tolerance)}});
    j["checks"] = checks;
    j["worst"] = suite.worst();
    j["verdict"] = verdict(suite.all_pass());
    out.json("identity_suite.json", j);
    summary["identity_suite"] = verdict(suite.all_pass());
    all = all && suite.all_pass();
    log("verify: identity suite over " + std::to_string(suite.samples) + " dyads, worst " + format_double(suite.worst()));
  }

  {
    json arr = json::array();
    bool pass = true;
    for (const auto& fx : dyad_fixtures()) {
      const auto t = spinor::tetrad_from_dyad(fx.dyad);
      double err = 0.0;
      const spinor::MinkowskiVector* got[3] = {&t.l, &t.n, &t.m};
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < 4; ++k) err = std::max(err, std::abs((*got[v])[k] - fx.lnm[v][k]));
      const auto st = spinor::staticity(t);
      err = std::max({err, std::abs(st.lambda_sq), std::abs(st.time_sum - std::sqrt(2.0))});
      arr.push_back({{"name", fx.name}, {"max_error", err}, {"verdict", verdict(err <= 1e-14)}});
      pass = pass && err <= 1e-14;
    }
    out.json("canonical_dyads.json", {{"tolerance", 1e-14}, {"fixtures", arr}, {"verdict", verdict(pass)}});
    summary["canonical_dyads"] = verdict(pass);
    all = all && pass;
  }

  {
    // Coulomb benchmark in the external field, self-coupling off
    const double Z = 0.5, m = 1.0, e = c.scf.ch.e;
    radial::RadialProblem p{{-1, m, e}, radial::RadialPotential::coulomb(Z / e)};
    auto [res, st] = radial::find_bound_state(p, 0, c.scf.shoot);
    const double want = std::sqrt(1.0 - Z * Z);
    const bool e_ok = res.converged && std::abs(st.E / m - want) <= 1e-6;
    json j = {{"z", Z}, {"E_over_m", st.E / m}, {"expected", want}, {"difference", st.E / m - want},
              {"tolerance", 1e-6}, {"shooting", io::shooting_json(res)}, {"verdict", verdict(e_ok)}};
    summary["coulomb_benchmark"] = verdict(e_ok);
    all = all && e_ok;
    if (res.converged) {
      st.q_psi = 0.0;
      out.csv("coulomb_state.csv", io::radial_state_csv(st));
      radial::EmbedOptions eo;
      eo.n = c.embed_n;
      const auto emb = radial::embed_and_check(st, eo);
      j["embedding"] = embed_json(emb, eo.n, 1e-5);
      summary["radial_embedding"] = verdict(emb.max() < 1e-5);
      all = all && emb.max() < 1e-5;
    }
    out.json("coulomb.json", j);
    log("verify: Coulomb E/m - sqrt(1 - Z^2) = " + format_double(st.E / m - want));
  }
  summary["verdict"] = verdict(all);
  out.json("verify.json", summary);
  return {all ? ok : failed, all ? "all checks pass" : "a check failed"};
}

// ---------------------------------------------------------------- fit

Outcome do_fit(const cfg::RunConfig& c, Output& out, Log& log) {
  const std::string text = io::read_text(c.fit_input);
  const radial::RadialState s = io::read_radial_state(io::parse_csv(text));
  const auto h = s.h();
  std::vector<asym::Report> reports;
  const bool bound = std::abs(s.E) < s.m;
  if (bound) reports.push_back(asym::limit_formula_check(s).report());
  for (auto model : {asym::DecayModel::exponential, asym::DecayModel::stretched, asym::DecayModel::power}) {
    if (c.fit_model != "all" && c.fit_model != asym::to_string(model)) continue;
    const auto f = asym::fit_decay(s.r, h, model);
    reports.push_back(f.report());
    if (model == asym::DecayModel::exponential && bound) reports.push_back(asym::exponential_rate_report(f, s.E, s.m));
    out.csv(std::string("fit_") + asym::to_string(model) + ".csv", decay_figure(s.r, h, f));
  }
  if (bound) reports.push_back(asym::comparison_bound_check(s.r, h, s.E, s.m).report());
  json j;
  j["input"] = c.fit_input.filename().string();
  j["input_sha256"] = io::sha256_hex(text);
  j["reports"] = reports_json(reports);
  out.json("fit.json", j);
  const bool pass = none_failed(reports);
  log(std::string("fit: ") + std::to_string(reports.size()) + " reports, " + (pass ? "none failed" : "failures"));
  return {pass ? ok : failed, pass ? "no failed diagnostic" : "a diagnostic failed"};
}

// ---------------------------------------------------------------- report-data

Outcome do_report_data(const cfg::RunConfig& c, Output& out, Log& log) {
  std::map<std::string, bool> props;  // property -> all pass
  auto record = [&](const std::string& key, bool pass) {
    auto it = props.find(key);
    props[key] = (it == props.end() ? true : it->second) && pass;
  };
  auto pass_of = [](const asym::Report& r) { return r.verdict != asym::Verdict::fail; };

  // self-consistent states
  scf::ScfConfig base = c.scf;
  for (double target : {0.7, 0.8, 0.9}) {
    const std::string tag = label(target);
    const scf::ScfResult r = scf::solve_for_energy(base, target);
    const auto& s = r.state;
    const auto h = s.h();
    log("report-data: " + tag + " E/m=" + format_double(s.E / s.m) + " q_interior=" + format_double(s.q_interior));
    out.csv("states/" + tag + ".csv", io::radial_state_csv(s));
    out.csv("states/" + tag + "_trace.csv", io::scf_trace_csv(r.trace));

    std::vector<asym::Report> rep;
    const auto pot = scf::self_potential(r);
    const auto scan = radial::scan_spectrum(radial::RadialProblem{base.ch, pot}, -1.5 * s.m, 1.5 * s.m, 301, base.shoot);
    rep.push_back(asym::spectral_gap_report(scan, s.m, s.E));
    const auto lf = asym::limit_formula_check(s);
    rep.push_back(lf.report());
    const auto ex = asym::fit_decay(s.r, h, asym::DecayModel::exponential);
    rep.push_back(asym::exponential_rate_report(ex, s.E, s.m));
    rep.push_back(asym::comparison_bound_check(s.r, h, s.E, s.m).report());
    rep.push_back(far_field(pot, s.r.back()).report(r.q0, 1e-6));
    radial::EmbedOptions eo;
    eo.n = c.embed_n;
    const auto emb = radial::embed_and_check(s, eo);

    for (const auto& x : rep) record(x.diagnostic, pass_of(x));
    record("radial_embedding", emb.max() < 1e-5);
    out.csv("figures/decay_" + tag + ".csv", decay_figure(s.r, h, ex));
    out.csv("figures/limit_" + tag + ".csv", limit_figure(lf));
    json j = scf_summary(r, s.m);
    j["reports"] = reports_json(rep);
    j["embedding"] = embed_json(emb, eo.n, 1e-5);
    out.json("diagnostics/" + tag + ".json", j);
  }

  // synthetic |E| = m profiles from the asymptotic formulas
  {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> L(0.3, 0.8);
    const double m = 1.0, lambda = L(rng);
    std::vector<asym::Report> rep;

    const double b = 4.0 * std::sqrt(2.0) * m * lambda;
    const auto re = radial::log_grid(1.0, std::min(1e4, std::pow(600.0 / b, 2)), 2000);
    const auto env = asym::synthetic::stretched_envelope(re, m, lambda);
    const auto sf = asym::fit_decay(re, env, asym::DecayModel::stretched);
    rep.push_back(sf.report(std::array<double, 2>{b, 1.5}, 0.01));
    out.csv("figures/stretched_envelope.csv", decay_figure(re, env, sf));

    const auto rz = radial::log_grid(1.0, 1e6, 1500);
    const auto zc = asym::zeta_coefficients(m, lambda, 1);
    const auto clean = asym::zeta_expansion_fit(rz, asym::synthetic::zeta_chi(rz, m, lambda, 1), m, lambda);
    auto rc = clean.report(1e-3);
    rc.inputs["contamination"] = 0.0;
    rep.push_back(rc);
    const auto dirty = asym::zeta_expansion_fit(rz, asym::synthetic::zeta_chi(rz, m, lambda, 1, 0, zc[2]), m, lambda);
    auto rd = dirty.report(1e-2);
    rd.inputs["contamination"] = zc[2];
    rep.push_back(rd);

    const auto rs = radial::log_grid(1.0, 1000.0, 300);
    rep.push_back(asym::staticity_check(rs, asym::synthetic::staticity_dyads(rs, 1.0, 0.5)).report(0.5, 0.05));
    for (const auto& x : rep) record(x.diagnostic == "decay_fit_stretched" ? "stretched_envelope" : x.diagnostic, pass_of(x));

    // both signs of q0 on both branches; the relation admits a solution only
    // when -eps e q0 > 0
    json lam = json::array();
    bool lam_ok = true;
    const double e = c.scf.ch.e;
    for (double eps : {1.0, -1.0})
      for (double q0 : {-2.0, 2.0}) {
        const auto lr = asym::lambda_relation_check(eps * m, m, e, q0);
        const auto want = -eps * e * q0 > 0.0 ? asym::Verdict::pass : asym::Verdict::fail;
        json row = lr.report().to_json();
        row["expected_verdict"] = asym::to_string(want);
        lam.push_back(row);
        lam_ok = lam_ok && lr.verdict == want;
      }
    const auto zero = asym::lambda_relation_check(m, m, e, 0.0);
    json zrow = zero.report().to_json();
    zrow["expected_verdict"] = "not_applicable";
    lam.push_back(zrow);
    lam_ok = lam_ok && zero.verdict == asym::Verdict::not_applicable;
    record("lambda_relation", lam_ok);

    json j;
    j["lambda"] = lambda;
    j["m"] = m;
    j["reports"] = reports_json(rep);
    j["lambda_relation"] = lam;
    out.json("diagnostics/synthetic.json", j);
    log("report-data: synthetic lambda=" + format_double(lambda));
  }

  json v;
  for (const auto& [k, pass] : props) v[k] = verdict(pass);
  v["lambda_relation_q0_zero"] = "not_applicable";
  out.json("verdicts.json", v);
  std::vector<std::string> bad;
  for (const auto& [k, pass] : props)
    if (!pass) bad.push_back(k);
  std::string sum = bad.empty() ? "all properties pass" : "failed:";
  for (const auto& k : bad) sum += " " + k;
  log("report-data: " + sum);
  return {bad.empty() ? ok : failed, sum};
}

}  // namespace

int execute(const cfg::RunConfig& c, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  Log log{os, {}};
  const std::string hash = manifest_hash(c);
  std::optional<Output> out;
  Outcome res;
  try {
    out.emplace(c.out, hash);
    log(std::string("mdlab ") + MDLAB_VERSION + " " + cfg::to_string(c.mode) + " manifest_hash " + hash);
    switch (c.mode) {
      case cfg::Mode::solve: res = do_solve(c, *out, log); break;
      case cfg::Mode::sweep: res = do_sweep(c, *out, log); break;
      case cfg::Mode::verify: res = do_verify(c, *out, log); break;
      case cfg::Mode::fit: res = do_fit(c, *out, log); break;
      case cfg::Mode::report_data: res = do_report_data(c, *out, log); break;
    }
  } catch (const UsageError& e) {
    res = {usage, std::string("usage error: ") + e.what()};
  } catch (const IoError& e) {
    res = {usage, std::string("I/O error: ") + e.what()};
  } catch (const std::runtime_error& e) {
    // physics failures: no bound state, too little data, inapplicable checks
    res = {failed, std::string("failed: ") + e.what()};
  }
  if (res.code != ok) log(res.summary);
  if (!out) return res.code;
  try {
    out->manifest(c, res.code, res.summary);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream rl;
    rl << log.text.str() << "out " << c.out.string() << "\nexit_code " << res.code << "\nwall_time_s "
       << format_double(wall) << "\n";
    io::write_text(out->dir() / "run.log", rl.str());
  } catch (const IoError& e) {
    os << "I/O error: " << e.what() << '\n';
    return usage;
  }
  return res.code;
}

}  // namespace mdlab::run
