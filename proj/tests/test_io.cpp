#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mdlab/config.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/field_io.hpp"
#include "mdlab/format.hpp"

using namespace mdlab;
using namespace mdlab::io;

// ---------------------------------------------------------------- format

TEST_CASE("format_double round-trips every double") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> bits;
  int tried = 0;
  while (tried < 2000) {
    const std::uint64_t b = bits(rng);
    double x;
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    ++tried;
    CHECK(parse_double(format_double(x)) == x);
  }
  for (double x : {0.0, -0.0, 1.0, 0.1, 1e-300, 5e-324, 1.7976931348623157e308}) CHECK(parse_double(format_double(x)) == x);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.0x"), UsageError);
  CHECK_THROWS_AS(parse_double(""), UsageError);
}

TEST_CASE("JSON text is stable and keeps insertion order") {
  json j;
  j["b"] = 1;
  j["a"] = 0.1;
  j["list"] = json::array({1.5, 2, "x"});
  j["nested"] = {{"k", true}, {"v", nullptr}};
  j["inf"] = INFINITY;
  j["empty"] = json::array();
  const std::string want =
      "{\n"
      "  \"b\": 1,\n"
      "  \"a\": 0.10000000000000001,\n"
      "  \"list\": [1.5, 2, \"x\"],\n"
      "  \"nested\": {\n"
      "    \"k\": true,\n"
      "    \"v\": null\n"
      "  },\n"
      "  \"inf\": \"inf\",\n"
      "  \"empty\": []\n"
      "}\n";
  CHECK(to_json_text(j) == want);
  // parses back with any JSON reader
  const auto back = json::parse(to_json_text(j));
  CHECK(back["a"].get<double>() == 0.1);
  CHECK(back["inf"] == "inf");
}

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("CSV round trip with metadata and quoting") {
  CsvTable t;
  t.meta = {{"E", "0.5"}, {"note", "a: b"}};
  t.header = {"x", "label"};
  t.add_row({"1", "plain"});
  t.add_row({"2", "has,comma"});
  t.add_row({"3", "has \"quotes\""});
  const std::string text = to_csv_text(t);
  CHECK(text.rfind("# E: 0.5\n# note: a: b\nx,label\n", 0) == 0);
  const CsvTable u = parse_csv(text);
  CHECK(u.meta == t.meta);
  CHECK(u.header == t.header);
  CHECK(u.rows == t.rows);
  CHECK(u.meta_value("note") == "a: b");
  CHECK(u.column("label") == 1);
  CHECK_THROWS_AS(u.column("nope"), UsageError);
  CHECK_THROWS_AS(t.add_row({"only one"}), UsageError);
  CHECK_THROWS_AS(parse_csv("# only: meta\n"), UsageError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), UsageError);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), UsageError);
}

// ---------------------------------------------------------------- field_io

TEST_CASE("field snapshot round trip is exact") {
  const auto g = field::Grid::cube(5, 0.1, {0.3, -0.2, 1.0});
  const fixtures::SmoothRandom fr(11);
  const auto psi = fr.components(g);
  const auto A = fr.potential(g, 0.8, 1.0, 0.3);
  const CsvTable t = snapshot_csv(psi, A, "abc");
  CHECK(t.header.size() == 15);
  CHECK(t.header[3] == "re_U0");
  CHECK(t.rows.size() == g.size());
  CHECK(t.meta_value("manifest_hash") == "abc");
  const auto [psi2, A2] = read_snapshot(parse_csv(to_csv_text(t)));
  CHECK(psi2.grid == g);
  CHECK(psi2.U0 == psi.U0);
  CHECK(psi2.U1 == psi.U1);
  CHECK(psi2.V0 == psi.V0);
  CHECK(psi2.V1 == psi.V1);
  for (int a = 0; a < 4; ++a) CHECK(A2.A[a] == A.A[a]);
  CHECK(A2.E == A.E);
  CHECK(A2.e == A.e);

  CsvTable bad = t;
  std::swap(bad.rows[0], bad.rows[1]);
  CHECK_THROWS_AS(read_snapshot(bad), UsageError);
  bad = t;
  bad.rows.pop_back();
  CHECK_THROWS_AS(read_snapshot(bad), UsageError);
}

TEST_CASE("residual report JSON layout") {
  field::ResidualReport r;
  r.grid_h = 0.05;
  r.equations = {{"dirac_0", 1e-3, 2e-4}, {"dirac_1", 3e-3, 4e-4}};
  const json j = residual_json(r);
  REQUIRE(j.size() == 2);
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"equation", "max_norm", "l2_norm", "grid_h"});
  CHECK(j[1]["max_norm"].get<double>() == 3e-3);
  CHECK(j[1]["grid_h"].get<double>() == 0.05);
}

TEST_CASE("radial state round trip is exact") {
  radial::RadialState s;
  s.r = radial::log_grid(1e-3, 50.0, 200);
  for (double r : s.r) {
    s.G.push_back(r * std::exp(-r));
    s.F.push_back(-0.1 * r * std::exp(-r));
    s.A0.push_back(2.0 / r);
  }
  s.E = 0.9;
  s.kappa = 1;
  s.m = 1.5;
  s.e = 0.3;
  s.q_interior = 2.0;
  s.q_psi = 1.0;
  const CsvTable t = radial_state_csv(s, "h");
  CHECK(t.header == std::vector<std::string>{"r", "G", "F", "A0", "h"});
  const auto u = read_radial_state(parse_csv(to_csv_text(t)));
  CHECK(u.r == s.r);
  CHECK(u.G == s.G);
  CHECK(u.F == s.F);
  CHECK(u.A0 == s.A0);
  CHECK(u.E == s.E);
  CHECK(u.kappa == s.kappa);
  CHECK(u.m == s.m);
  CHECK(u.e == s.e);
  CHECK(u.q_interior == s.q_interior);
  CHECK(u.q_psi == s.q_psi);
  const auto h = s.h();
  const std::size_t hc = t.column("h");
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(parse_double(t.rows[i][hc]) == h[i]);

  CsvTable bad = t;
  std::swap(bad.rows[3], bad.rows[4]);
  CHECK_THROWS_AS(read_radial_state(bad), UsageError);
  bad = t;
  bad.meta.clear();
  CHECK_THROWS_AS(read_radial_state(bad), UsageError);
}

TEST_CASE("shooting result JSON") {
  radial::ShootingResult r;
  r.found = r.converged = true;
  r.E_found = 0.75;
  r.node_count = 0;
  const json j = shooting_json(r);
  CHECK(j["E_found"].get<double>() == 0.75);
  CHECK(j["converged"] == true);
  CHECK(j.begin().key() == "found");
}

TEST_CASE("sweep and figure tables") {
  std::vector<scf::SweepRow> rows(2);
  rows[0].cell = {0.1, 1.0, 3.0};
  rows[0].result.trace.converged = true;
  rows[0].result.state.E = 0.5;
  rows[0].result.trace.message = "converged";
  rows[1].cell = {0.2, 1.0, 3.0};
  rows[1].result.trace.message = "no bound state, sorry";
  const CsvTable t = sweep_csv(rows, 2.0, "h");
  CHECK(t.rows.size() == 2);
  CHECK(t.rows[0][t.column("E_over_m")] == "0.25");
  CHECK(t.rows[1][t.column("converged")] == "false");
  const CsvTable u = parse_csv(to_csv_text(t));
  CHECK(u.rows[1][u.column("message")] == "no bound state, sorry");

  const auto f = figure_csv({1, 2}, {3, 4}, {5, 6});
  CHECK(f.header == std::vector<std::string>{"r", "value", "model_value"});
  CHECK_THROWS_AS(figure_csv({1, 2}, {3}, {5, 6}), UsageError);
}

// ---------------------------------------------------------------- config

namespace {

int error_line(const std::string& text) {
  try {
    cfg::parse_config(text);
  } catch (const cfg::ConfigError& e) {
    return e.line;
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    cfg::parse_config(text);
  } catch (const cfg::ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal solve config records every default") {
  const auto c = cfg::parse_config("[run]\nmode = solve\n[physics]\nz = 0.5\n");
  CHECK(c.mode == cfg::Mode::solve);
  CHECK(c.scf.ch.kappa == -1);
  CHECK(c.scf.ch.e == doctest::Approx(0.0854245431));
  CHECK(c.scf.q_interior * c.scf.ch.e == doctest::Approx(0.5));
  CHECK(c.scf.q_psi == 1.0);
  CHECK(c.scf.shoot.r_cap == 2000.0);
  // every key except the two given and the unset alternatives is defaulted
  for (const char* k : {"run.out", "run.seed", "run.threads", "physics.m", "physics.e", "physics.kappa",
                        "physics.q_psi", "radial.nodes", "radial.r_min", "radial.r_max", "radial.r_cap",
                        "radial.n_grid", "radial.defect_tol", "radial.ode_tol", "radial.n_scan",
                        "radial.max_iterations", "scf.alpha_mix", "scf.max_iterations", "scf.tol_E", "scf.tol_A",
                        "sweep.e", "sweep.q_psi", "sweep.q_interior", "sweep.z", "verify.n_dyads",
                        "verify.embed_n", "fit.model"}) {
    CAPTURE(k);
    CHECK(std::find(c.defaulted.begin(), c.defaulted.end(), k) != c.defaulted.end());
    CHECK(c.echo.contains(k));
  }
  CHECK(std::find(c.defaulted.begin(), c.defaulted.end(), "physics.z") == c.defaulted.end());
  CHECK(c.echo["physics.q_interior"].get<double>() == c.scf.q_interior);
  CHECK(c.echo["radial.defect_tol"].get<double>() == 1e-10);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line("[run]\nmode = solve\n[physics]\nz = 0.5\nz = 0.4\n") == 5);
  CHECK(error_text("[run]\nmode = solve\n[physics]\nz = 0.5\nz = 0.4\n").find("line 4") != std::string::npos);
  CHECK(error_line("[run]\nmode = solve\n[physics]\nzz = 0.5\n") == 4);
  CHECK(error_line("[run]\nmode = solve\n[nowhere]\n") == 3);
  CHECK(error_line("[run]\nmode = solve\n[radial]\nnodes = 1.5\n") == 4);
  CHECK(error_line("[run]\nmode = solve\n[physics]\nz = half\n") == 4);
  CHECK(error_line("[run]\nmode = solve\n[scf]\ntol_E = -1\n") == 4);
  CHECK(error_text("[run]\nmode = solve\n[scf]\ntol_E = -1\n").find("tolerance") != std::string::npos);
  CHECK(error_line("[run]\nmode = solve\n[radial]\node_tol = 0\n") == 4);
  CHECK(error_line("[run]\nmode = dance\n") == 2);
  CHECK(error_line("[run]\nmode solve\n") == 2);
  CHECK(error_line("mode = solve\n") == 1);
  CHECK(error_line("[run\n") == 1);
  CHECK(error_line("[run]\nthreads = 0\n") == 2);
  CHECK(error_line("[run]\nmode = solve\n[physics]\nz = 0.5\nq_interior = 3\n") == 5);
  CHECK(error_line("[run]\nmode = sweep\n[sweep]\ne = 0.1, x\n") == 4);
}

TEST_CASE("missing required keys") {
  CHECK(error_line("") == 0);
  CHECK(error_text("").find("run.mode") != std::string::npos);
  CHECK(error_text("[run]\nmode = solve\n").find("physics.q_interior") != std::string::npos);
  CHECK(error_text("[run]\nmode = fit\n").find("fit.input") != std::string::npos);
  CHECK_NOTHROW(cfg::parse_config("[run]\nmode = verify\n"));
  CHECK_NOTHROW(cfg::parse_config("[run]\nmode = report-data\n"));
}

TEST_CASE("comments, blank lines and whitespace") {
  const auto c = cfg::parse_config("# header\n\n[run]   \n  mode=solve   ; trailing\n[physics]\n\tq_interior =  2.5\n");
  CHECK(c.scf.q_interior == 2.5);
  CHECK(c.echo["physics.z"].get<double>() == doctest::Approx(2.5 * c.scf.ch.e));
}

TEST_CASE("subcommand and run.mode must agree") {
  CHECK(cfg::parse_config("", cfg::Mode::verify).mode == cfg::Mode::verify);
  CHECK(cfg::parse_config("[run]\nmode = verify\n", cfg::Mode::verify).mode == cfg::Mode::verify);
  try {
    cfg::parse_config("[run]\nmode = solve\n[physics]\nz = 0.5\n", cfg::Mode::verify);
    FAIL("expected a conflict");
  } catch (const cfg::ConfigError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("physical validation surfaces as a config error") {
  CHECK_THROWS_AS(cfg::parse_config("[run]\nmode = solve\n[physics]\nz = 0.5\nkappa = 2\n"), cfg::ConfigError);
  CHECK_THROWS_AS(cfg::parse_config("[run]\nmode = solve\n[physics]\nz = 0.5\nkappa = 0\n"), cfg::ConfigError);
  CHECK_NOTHROW(cfg::parse_config("[run]\nmode = solve\n[physics]\nz = 0.5\nkappa = 2\nq_psi = 0\n"));
  CHECK_THROWS_AS(cfg::parse_config("[run]\nmode = solve\n[physics]\nz = 0.5\n[scf]\nalpha_mix = 2\n"), cfg::ConfigError);
}

TEST_CASE("sweep cells are the cartesian product") {
  const auto c = cfg::parse_config("[run]\nmode = sweep\n[physics]\nq_interior = 3\n[sweep]\ne = 0.1, 0.2\nq_psi = 0, 1\n");
  const auto cells = c.sweep_cells();
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].e == 0.1);
  CHECK(cells[0].q_psi == 0.0);
  CHECK(cells[3].e == 0.2);
  CHECK(cells[3].q_psi == 1.0);
  for (const auto& cell : cells) CHECK(cell.q_interior == 3.0);
  const auto z = cfg::parse_config("[run]\nmode = sweep\n[sweep]\ne = 0.1, 0.2\nz = 0.5\n").sweep_cells();
  REQUIRE(z.size() == 2);
  CHECK(z[0].q_interior == doctest::Approx(5.0));
  CHECK(z[1].q_interior == doctest::Approx(2.5));
  CHECK_THROWS_AS(cfg::parse_config("[run]\nmode = sweep\n[sweep]\nq_interior=1\nz = 0.5\n"), cfg::ConfigError);
}

TEST_CASE("command-line overrides update the echo") {
  auto c = cfg::parse_config("[run]\nmode = verify\nseed = 3\n");
  cfg::apply_overrides(c, std::string("elsewhere"), 9, 2);
  CHECK(c.out == "elsewhere");
  CHECK(c.seed == 9);
  CHECK(c.threads == 2);
  CHECK(c.echo["run.seed"].get<std::uint64_t>() == 9);
  CHECK(std::find(c.defaulted.begin(), c.defaulted.end(), "run.threads") == c.defaulted.end());
}
