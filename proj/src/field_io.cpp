#include "mdlab/field_io.hpp"

#include <cmath>
#include <sstream>

#include "mdlab/errors.hpp"

namespace mdlab::io {

namespace {

std::string fmt(double x) { return format_double(x); }

void stamp(CsvTable& t, const std::string& hash) {
  t.meta.emplace_back("schema_version", std::to_string(kSchemaVersion));
  if (!hash.empty()) t.meta.emplace_back("manifest_hash", hash);
}

double meta_double(const CsvTable& t, const std::string& k) { return parse_double(t.meta_value(k)); }

int meta_int(const CsvTable& t, const std::string& k) {
  const double x = meta_double(t, k);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw UsageError("csv: metadata '" + k + "' is not an integer");
  return int(x);
}

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& row : t.rows) v.push_back(parse_double(row[c]));
  return v;
}

}  // namespace

CsvTable snapshot_csv(const field::SpinorComponents& psi, const field::PotentialField& A,
                      const std::string& manifest_hash) {
  if (!(psi.grid == A.grid)) throw UsageError("snapshot: spinor and potential grids differ");
  const auto& g = psi.grid;
  CsvTable t;
  stamp(t, manifest_hash);
  t.meta.emplace_back("grid_n", std::to_string(g.nx) + " " + std::to_string(g.ny) + " " + std::to_string(g.nz));
  t.meta.emplace_back("grid_h", fmt(g.h));
  t.meta.emplace_back("grid_origin", fmt(g.origin[0]) + " " + fmt(g.origin[1]) + " " + fmt(g.origin[2]));
  t.meta.emplace_back("E", fmt(A.E));
  t.meta.emplace_back("m", fmt(A.m));
  t.meta.emplace_back("e", fmt(A.e));
  t.header = {"x", "y", "z", "re_U0", "im_U0", "re_U1", "im_U1", "re_V0", "im_V0",
              "re_V1", "im_V1", "A0", "A1", "A2", "A3"};
  t.rows.reserve(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto x = g.point(q);
    t.rows.push_back({fmt(x[0]), fmt(x[1]), fmt(x[2]),
                      fmt(psi.U0[q].real()), fmt(psi.U0[q].imag()), fmt(psi.U1[q].real()), fmt(psi.U1[q].imag()),
                      fmt(psi.V0[q].real()), fmt(psi.V0[q].imag()), fmt(psi.V1[q].real()), fmt(psi.V1[q].imag()),
                      fmt(A.A[0][q]), fmt(A.A[1][q]), fmt(A.A[2][q]), fmt(A.A[3][q])});
  }
  return t;
}

std::pair<field::SpinorComponents, field::PotentialField> read_snapshot(const CsvTable& t) {
  field::Grid g;
  {
    std::istringstream n(t.meta_value("grid_n"));
    if (!(n >> g.nx >> g.ny >> g.nz) || g.nx <= 0 || g.ny <= 0 || g.nz <= 0)
      throw UsageError("snapshot: bad grid_n");
    std::istringstream o(t.meta_value("grid_origin"));
    std::string a, b, c;
    if (!(o >> a >> b >> c)) throw UsageError("snapshot: bad grid_origin");
    g.origin = {parse_double(a), parse_double(b), parse_double(c)};
    g.h = meta_double(t, "grid_h");
  }
  if (t.rows.size() != g.size()) throw UsageError("snapshot: row count does not match grid_n");
  field::SpinorComponents psi(g);
  field::PotentialField A(g, meta_double(t, "E"), meta_double(t, "m"), meta_double(t, "e"));
  std::array<std::size_t, 15> col;
  const char* names[15] = {"x", "y", "z", "re_U0", "im_U0", "re_U1", "im_U1", "re_V0", "im_V0",
                           "re_V1", "im_V1", "A0", "A1", "A2", "A3"};
  for (int i = 0; i < 15; ++i) col[i] = t.column(names[i]);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto& row = t.rows[q];
    auto d = [&](int i) { return parse_double(row[col[i]]); };
    const auto x = g.point(q);
    for (int k = 0; k < 3; ++k)
      if (std::abs(d(k) - x[k]) > 1e-9 * (1.0 + std::abs(x[k])))
        throw UsageError("snapshot: row " + std::to_string(q) + " is not in x-fastest grid order");
    psi.U0[q] = {d(3), d(4)};
    psi.U1[q] = {d(5), d(6)};
    psi.V0[q] = {d(7), d(8)};
    psi.V1[q] = {d(9), d(10)};
    for (int a = 0; a < 4; ++a) A.A[a][q] = d(11 + a);
  }
  return {std::move(psi), std::move(A)};
}

json residual_json(const field::ResidualReport& r) {
  json arr = json::array();
  for (const auto& eq : r.equations)
    arr.push_back({{"equation", eq.equation}, {"max_norm", eq.max_norm}, {"l2_norm", eq.l2_norm},
                   {"grid_h", r.grid_h}});
  return arr;
}

CsvTable radial_state_csv(const radial::RadialState& s, const std::string& manifest_hash) {
  CsvTable t;
  stamp(t, manifest_hash);
  t.meta.emplace_back("E", fmt(s.E));
  t.meta.emplace_back("kappa", std::to_string(s.kappa));
  t.meta.emplace_back("m", fmt(s.m));
  t.meta.emplace_back("e", fmt(s.e));
  t.meta.emplace_back("q_interior", fmt(s.q_interior));
  t.meta.emplace_back("q_psi", fmt(s.q_psi));
  t.header = {"r", "G", "F", "A0", "h"};
  const auto h = s.h();
  for (std::size_t i = 0; i < s.r.size(); ++i)
    t.rows.push_back({fmt(s.r[i]), fmt(s.G[i]), fmt(s.F[i]), fmt(s.A0[i]), fmt(h[i])});
  return t;
}

radial::RadialState read_radial_state(const CsvTable& t) {
  radial::RadialState s;
  s.E = meta_double(t, "E");
  s.kappa = meta_int(t, "kappa");
  s.m = meta_double(t, "m");
  s.e = meta_double(t, "e");
  s.q_interior = meta_double(t, "q_interior");
  s.q_psi = meta_double(t, "q_psi");
  s.r = column_values(t, "r");
  s.G = column_values(t, "G");
  s.F = column_values(t, "F");
  s.A0 = column_values(t, "A0");
  if (s.r.size() < 2) throw InsufficientDataError("radial state: fewer than two rows");
  for (std::size_t i = 0; i < s.r.size(); ++i)
    if (!(s.r[i] > 0.0) || (i && s.r[i] <= s.r[i - 1]))
      throw UsageError("radial state: r must be positive and increasing (row " + std::to_string(i) + ")");
  return s;
}

json shooting_json(const radial::ShootingResult& r) {
  return {{"found", r.found},
          {"converged", r.converged},
          {"E_found", r.E_found},
          {"matching_defect", r.matching_defect},
          {"node_count", r.node_count},
          {"iterations", r.iterations},
          {"r_match", r.r_match},
          {"r_max", r.r_max}};
}

CsvTable scf_trace_csv(const scf::ScfTrace& tr, const std::string& manifest_hash) {
  CsvTable t;
  stamp(t, manifest_hash);
  t.meta.emplace_back("converged", tr.converged ? "true" : "false");
  t.meta.emplace_back("message", tr.message);
  t.header = {"iteration", "E", "dA_inf", "dh_l2"};
  for (std::size_t i = 0; i < tr.iterations.size(); ++i) {
    const auto& it = tr.iterations[i];
    t.rows.push_back({std::to_string(i + 1), fmt(it.E), fmt(it.dA_inf), fmt(it.dh_l2)});
  }
  return t;
}

CsvTable sweep_csv(const std::vector<scf::SweepRow>& rows, double m, const std::string& manifest_hash) {
  CsvTable t;
  stamp(t, manifest_hash);
  t.header = {"index", "e", "q_psi", "q_interior", "converged", "E", "E_over_m", "q0",
              "iterations", "node_count", "message"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = rows[i].cell;
    const auto& r = rows[i].result;
    t.rows.push_back({std::to_string(i), fmt(c.e), fmt(c.q_psi), fmt(c.q_interior),
                      r.trace.converged ? "true" : "false", fmt(r.state.E), fmt(r.state.E / m), fmt(r.q0),
                      std::to_string(r.trace.iterations.size()), std::to_string(r.shooting.node_count),
                      r.trace.message});
  }
  return t;
}

CsvTable figure_csv(const std::vector<double>& r, const std::vector<double>& value,
                    const std::vector<double>& model, const std::string& manifest_hash) {
  if (value.size() != r.size() || model.size() != r.size()) throw UsageError("figure: column lengths differ");
  CsvTable t;
  stamp(t, manifest_hash);
  t.header = {"r", "value", "model_value"};
  for (std::size_t i = 0; i < r.size(); ++i) t.rows.push_back({fmt(r[i]), fmt(value[i]), fmt(model[i])});
  return t;
}

}  // namespace mdlab::io
