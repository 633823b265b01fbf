#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mdlab/errors.hpp"
#include "mdlab/format.hpp"
#include "mdlab/scf.hpp"

namespace mdlab::cfg {

enum class Mode { solve, sweep, verify, fit, report_data };
const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

// Parse or validation failure.  line is 0 when the problem is not tied to
// one line (a missing key, a bad combination).
struct ConfigError : UsageError {
  ConfigError(int line, const std::string& msg);
  int line = 0;
};

struct RunConfig {
  Mode mode = Mode::solve;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  unsigned threads = 1;

  scf::ScfConfig scf;          // physics, radial and scf sections

  // [sweep]: the cartesian product of these lists; empty lists take the
  // single value from [physics].
  // sweep.z gives q_interior = z / e per cell.
  std::vector<double> sweep_e, sweep_q_psi, sweep_q_interior, sweep_z;

  int n_dyads = 1000;          // [verify]
  int embed_n = 64;

  std::filesystem::path fit_input;  // [fit]
  std::string fit_model = "all";

  // Every key as section.name with its resolved value, in table order.
  io::json echo = io::json::object();
  std::vector<std::string> defaulted;

  std::vector<scf::SweepCell> sweep_cells() const;
};

// ini text: [section] headers, key = value lines, '#' or ';' comments.
// Unknown sections and keys, duplicates, type mismatches, missing required
// keys and non-positive tolerances are ConfigErrors.  mode_override (the
// CLI subcommand) supplies run.mode and must agree with it when both exist.
RunConfig parse_config(const std::string& text, std::optional<Mode> mode_override = {});

// Command-line flags take precedence over [run]; the echo follows.
void apply_overrides(RunConfig& c, const std::optional<std::string>& out, std::optional<std::uint64_t> seed,
                     std::optional<unsigned> threads);

}  // namespace mdlab::cfg
