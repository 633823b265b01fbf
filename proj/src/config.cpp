#include "mdlab/config.hpp"

#include <charconv>
#include <cmath>
#include <map>

namespace mdlab::cfg {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::solve: return "solve";
    case Mode::sweep: return "sweep";
    case Mode::verify: return "verify";
    case Mode::fit: return "fit";
    case Mode::report_data: return "report-data";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::solve, Mode::sweep, Mode::verify, Mode::fit, Mode::report_data})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

ConfigError::ConfigError(int l, const std::string& msg)
    : UsageError(l > 0 ? "config line " + std::to_string(l) + ": " + msg : "config: " + msg), line(l) {}

namespace {

using io::json;

enum class Type { real, positive, tolerance, integer, count, uint64, text, mode, model, list };

struct Key {
  const char* section;
  const char* name;
  Type type;
  json def;  // null: required or conditional
};

const double kDefaultE = 1.0 / std::sqrt(137.035999084);

const std::vector<Key>& table() {
  static const std::vector<Key> t = {
      {"run", "mode", Type::mode, nullptr},
      {"run", "out", Type::text, "out"},
      {"run", "seed", Type::uint64, 0},
      {"run", "threads", Type::count, 1},
      {"physics", "m", Type::positive, 1.0},
      {"physics", "e", Type::real, kDefaultE},
      {"physics", "kappa", Type::integer, -1},
      {"physics", "q_interior", Type::real, nullptr},
      {"physics", "z", Type::real, nullptr},
      {"physics", "q_psi", Type::real, 1.0},
      {"radial", "nodes", Type::integer, 0},
      {"radial", "r_min", Type::positive, 1e-4},
      {"radial", "r_max", Type::real, 0.0},
      {"radial", "r_cap", Type::positive, 2000.0},
      {"radial", "n_grid", Type::count, 4000},
      {"radial", "defect_tol", Type::tolerance, 1e-10},
      {"radial", "ode_tol", Type::tolerance, 1e-10},
      {"radial", "n_scan", Type::count, 400},
      {"radial", "max_iterations", Type::count, 200},
      {"scf", "alpha_mix", Type::positive, 0.5},
      {"scf", "max_iterations", Type::count, 200},
      {"scf", "tol_E", Type::tolerance, 1e-10},
      {"scf", "tol_A", Type::tolerance, 1e-10},
      {"sweep", "e", Type::list, json::array()},
      {"sweep", "q_psi", Type::list, json::array()},
      {"sweep", "q_interior", Type::list, json::array()},
      {"sweep", "z", Type::list, json::array()},
      {"verify", "n_dyads", Type::count, 1000},
      {"verify", "embed_n", Type::count, 64},
      {"fit", "input", Type::text, nullptr},
      {"fit", "model", Type::model, "all"},
  };
  return t;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

double to_real(const std::string& v, int line, const std::string& key) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(line, key + " expects a finite number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& v, int line, const std::string& key) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(line, key + " expects an integer, got '" + v + "'");
  return x;
}

json convert(const Key& k, const std::string& v, int line) {
  const std::string key = std::string(k.section) + "." + k.name;
  switch (k.type) {
    case Type::real: return to_real(v, line, key);
    case Type::positive: {
      const double x = to_real(v, line, key);
      if (!(x > 0.0)) throw ConfigError(line, key + " must be > 0");
      return x;
    }
    case Type::tolerance: {
      const double x = to_real(v, line, key);
      if (!(x > 0.0)) throw ConfigError(line, "tolerance " + key + " must be > 0, got " + v);
      return x;
    }
    case Type::integer: {
      const long long x = to_integer(v, line, key);
      if (std::llabs(x) > 1000000000) throw ConfigError(line, key + " is out of range");
      return x;
    }
    case Type::count: {
      const long long x = to_integer(v, line, key);
      if (x < 1 || x > 1000000000) throw ConfigError(line, key + " must be a positive integer");
      return x;
    }
    case Type::uint64: {
      std::uint64_t x = 0;
      const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (v.empty() || ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(line, key + " expects a non-negative integer, got '" + v + "'");
      return x;
    }
    case Type::text:
      if (v.empty()) throw ConfigError(line, key + " is empty");
      return v;
    case Type::mode:
      if (!parse_mode(v)) throw ConfigError(line, "unknown mode '" + v + "'");
      return v;
    case Type::model:
      if (v != "all" && v != "exponential" && v != "stretched" && v != "power")
        throw ConfigError(line, "unknown fit model '" + v + "'");
      return v;
    case Type::list: {
      json a = json::array();
      std::size_t pos = 0;
      while (pos <= v.size()) {
        const std::size_t comma = std::min(v.find(',', pos), v.size());
        a.push_back(to_real(trim(std::string_view(v).substr(pos, comma - pos)), line, key));
        pos = comma + 1;
      }
      return a;
    }
  }
  return nullptr;
}

std::vector<double> as_list(const json& j) { return j.get<std::vector<double>>(); }

}  // namespace

std::vector<scf::SweepCell> RunConfig::sweep_cells() const {
  const std::vector<double> es = sweep_e.empty() ? std::vector<double>{scf.ch.e} : sweep_e;
  const std::vector<double> qs = sweep_q_psi.empty() ? std::vector<double>{scf.q_psi} : sweep_q_psi;
  std::vector<scf::SweepCell> cells;
  for (double e : es)
    for (double q : qs) {
      if (!sweep_z.empty()) {
        for (double z : sweep_z) cells.push_back({e, q, z / e});
      } else if (!sweep_q_interior.empty()) {
        for (double qi : sweep_q_interior) cells.push_back({e, q, qi});
      } else {
        cells.push_back({e, q, scf.q_interior});
      }
    }
  return cells;
}

RunConfig parse_config(const std::string& text, std::optional<Mode> mode_override) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> given;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const std::size_t c = line.find_first_of("#;"); c != std::string::npos) line = trim(line.substr(0, c));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      bool known = false;
      for (const auto& k : table()) known = known || section == k.section;
      if (!known) throw ConfigError(line_no, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    if (section.empty()) throw ConfigError(line_no, "key outside any section");
    const std::string name = trim(std::string_view(line).substr(0, eq));
    const std::string full = section + "." + name;
    bool known = false;
    for (const auto& k : table()) known = known || (section == k.section && name == k.name);
    if (!known) throw ConfigError(line_no, "unknown key '" + full + "'");
    if (auto it = given.find(full); it != given.end())
      throw ConfigError(line_no, "duplicate key '" + full + "' (first set on line " +
                                     std::to_string(it->second.line) + ")");
    given[full] = {trim(std::string_view(line).substr(eq + 1)), line_no};
  }

  RunConfig cfg;
  json values = json::object();
  std::map<std::string, int> lines;
  for (const auto& k : table()) {
    const std::string full = std::string(k.section) + "." + k.name;
    if (auto it = given.find(full); it != given.end()) {
      values[full] = convert(k, it->second.value, it->second.line);
      lines[full] = it->second.line;
    } else {
      values[full] = k.def;
      if (!k.def.is_null()) cfg.defaulted.push_back(full);
    }
  }

  // mode
  if (mode_override) {
    if (!values["run.mode"].is_null() && values["run.mode"] != to_string(*mode_override))
      throw ConfigError(lines["run.mode"], "run.mode = " + values["run.mode"].get<std::string>() +
                                               " conflicts with the '" + to_string(*mode_override) +
                                               "' subcommand");
    values["run.mode"] = to_string(*mode_override);
  }
  if (values["run.mode"].is_null()) throw ConfigError(0, "missing required key run.mode");
  cfg.mode = *parse_mode(values["run.mode"].get<std::string>());
  cfg.out = values["run.out"].get<std::string>();
  cfg.seed = values["run.seed"].get<std::uint64_t>();
  cfg.threads = values["run.threads"].get<unsigned>();

  auto& s = cfg.scf;
  s.ch.m = values["physics.m"].get<double>();
  s.ch.e = values["physics.e"].get<double>();
  s.ch.kappa = values["physics.kappa"].get<int>();
  s.q_psi = values["physics.q_psi"].get<double>();
  const bool has_q = !values["physics.q_interior"].is_null(), has_z = !values["physics.z"].is_null();
  if (has_q && has_z)
    throw ConfigError(std::max(lines["physics.q_interior"], lines["physics.z"]),
                      "physics.q_interior and physics.z are mutually exclusive");
  if (has_z) {
    if (s.ch.e == 0.0) throw ConfigError(lines["physics.z"], "physics.z needs e != 0");
    s.q_interior = values["physics.z"].get<double>() / s.ch.e;
    values["physics.q_interior"] = s.q_interior;
  } else if (has_q) {
    s.q_interior = values["physics.q_interior"].get<double>();
    values["physics.z"] = s.ch.e * s.q_interior;
  }

  s.nodes = values["radial.nodes"].get<int>();
  s.shoot.r_min = values["radial.r_min"].get<double>();
  s.shoot.r_max = values["radial.r_max"].get<double>();
  s.shoot.r_cap = values["radial.r_cap"].get<double>();
  s.shoot.n_grid = values["radial.n_grid"].get<std::size_t>();
  s.shoot.defect_tol = values["radial.defect_tol"].get<double>();
  s.shoot.ode_tol = values["radial.ode_tol"].get<double>();
  s.shoot.n_scan = values["radial.n_scan"].get<std::size_t>();
  s.shoot.max_iterations = values["radial.max_iterations"].get<int>();
  if (s.shoot.r_max < 0.0) throw ConfigError(lines["radial.r_max"], "radial.r_max must be >= 0 (0: automatic)");
  if (s.shoot.r_cap <= 100.0 * s.shoot.r_min)
    throw ConfigError(lines["radial.r_cap"], "radial.r_cap must exceed 100 r_min");
  if (s.shoot.n_grid < 16) throw ConfigError(lines["radial.n_grid"], "radial.n_grid must be at least 16");
  if (s.shoot.n_scan < 2) throw ConfigError(lines["radial.n_scan"], "radial.n_scan must be at least 2");

  s.alpha_mix = values["scf.alpha_mix"].get<double>();
  s.max_iterations = values["scf.max_iterations"].get<int>();
  s.tol_E = values["scf.tol_E"].get<double>();
  s.tol_A = values["scf.tol_A"].get<double>();
  if (s.alpha_mix > 1.0) throw ConfigError(lines["scf.alpha_mix"], "scf.alpha_mix must lie in (0, 1]");

  cfg.sweep_e = as_list(values["sweep.e"]);
  cfg.sweep_q_psi = as_list(values["sweep.q_psi"]);
  cfg.sweep_q_interior = as_list(values["sweep.q_interior"]);
  cfg.sweep_z = as_list(values["sweep.z"]);
  if (!cfg.sweep_q_interior.empty() && !cfg.sweep_z.empty())
    throw ConfigError(std::max(lines["sweep.q_interior"], lines["sweep.z"]),
                      "sweep.q_interior and sweep.z are mutually exclusive");
  if (!cfg.sweep_z.empty())
    for (double e : cfg.sweep_e.empty() ? std::vector<double>{s.ch.e} : cfg.sweep_e)
      if (e == 0.0) throw ConfigError(lines["sweep.z"], "sweep.z needs e != 0 in every cell");

  cfg.n_dyads = values["verify.n_dyads"].get<int>();
  cfg.embed_n = values["verify.embed_n"].get<int>();
  if (cfg.embed_n < 8) throw ConfigError(lines["verify.embed_n"], "verify.embed_n must be at least 8");
  if (!values["fit.input"].is_null()) cfg.fit_input = values["fit.input"].get<std::string>();
  cfg.fit_model = values["fit.model"].get<std::string>();

  // mode-specific requirements
  if (cfg.mode == Mode::solve && !has_q && !has_z)
    throw ConfigError(0, "solve mode needs physics.q_interior or physics.z");
  if (cfg.mode == Mode::sweep && !has_q && !has_z && cfg.sweep_q_interior.empty() && cfg.sweep_z.empty())
    throw ConfigError(0, "sweep mode needs physics.q_interior, physics.z, sweep.q_interior or sweep.z");
  if (cfg.mode == Mode::fit && cfg.fit_input.empty()) throw ConfigError(0, "fit mode needs fit.input");
  if (cfg.mode == Mode::solve || cfg.mode == Mode::sweep) {
    try {
      s.validate();
    } catch (const UsageError& e) {
      throw ConfigError(0, e.what());
    }
  }

  cfg.echo = values;
  return cfg;
}

void apply_overrides(RunConfig& c, const std::optional<std::string>& out, std::optional<std::uint64_t> seed,
                     std::optional<unsigned> threads) {
  auto given = [&](const std::string& key) { std::erase(c.defaulted, key); };
  if (out) {
    if (out->empty()) throw ConfigError(0, "--out is empty");
    c.out = *out;
    c.echo["run.out"] = *out;
    given("run.out");
  }
  if (seed) {
    c.seed = *seed;
    c.echo["run.seed"] = *seed;
    given("run.seed");
  }
  if (threads) {
    if (*threads < 1) throw ConfigError(0, "--threads must be positive");
    c.threads = *threads;
    c.echo["run.threads"] = *threads;
    given("run.threads");
  }
}

}  // namespace mdlab::cfg
