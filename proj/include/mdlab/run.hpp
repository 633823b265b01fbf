#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mdlab/config.hpp"
#include "mdlab/format.hpp"

namespace mdlab::run {

enum Exit { ok = 0, usage = 1, failed = 2 };

// Versions of mdlab and the libraries it was built against.
io::json versions();

// sha256 of the canonical {config, versions} text.
std::string manifest_hash(const cfg::RunConfig& c);

// Collects outputs under one directory.  Every CSV carries a
// manifest_hash metadata line, every JSON a top-level manifest_hash key.
class Output {
 public:
  Output(std::filesystem::path dir, std::string hash);
  const std::string& hash() const { return hash_; }
  const std::filesystem::path& dir() const { return dir_; }
  void csv(const std::string& rel, io::CsvTable t);             // adds the hash if missing
  void json(const std::string& rel, const io::json& body);      // schema_version, manifest_hash, body
  // manifest.json: config echo, defaulted keys, versions, sorted file list with sha256.
  void manifest(const cfg::RunConfig& c, int exit_code, const std::string& summary);

 private:
  void add(const std::string& rel, const std::string& text);
  std::filesystem::path dir_;
  std::string hash_;
  std::vector<std::pair<std::string, std::string>> files_;  // path, sha256
};

// Executes cfg.mode, writing into cfg.out.  Progress goes to log.  Usage
// and I/O failures return 1, failed checks and non-convergence 2.  The wall
// time is written to run.log only, so the other files stay byte-identical.
int execute(const cfg::RunConfig& c, std::ostream& log);

}  // namespace mdlab::run
