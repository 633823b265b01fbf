#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mdlab/config.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/format.hpp"
#include "mdlab/run.hpp"

using namespace mdlab;

int main(int argc, char** argv) {
  CLI::App app{"mdlab: stationary Maxwell-Dirac laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MDLAB_VERSION));

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  const std::pair<const char*, const char*> modes[] = {
      {"solve", "self-consistent (or test-particle) bound state"},
      {"sweep", "independent solves over a parameter grid"},
      {"verify", "spinor identities, canonical dyads, Coulomb benchmark"},
      {"fit", "asymptotic diagnostics on a radial state CSV"},
      {"report-data", "artifacts for the report generator"},
  };
  for (const auto& [name, help] : modes) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "ini configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed for randomized suites");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : run::usage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const std::string text = config_path.empty() ? std::string() : io::read_text(config_path);
    cfg::RunConfig c = cfg::parse_config(text, cfg::parse_mode(name));
    cfg::apply_overrides(c, out, seed, threads);
    return run::execute(c, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "mdlab: " << e.what() << '\n';
    return run::usage;
  } catch (const IoError& e) {
    std::cerr << "mdlab: " << e.what() << '\n';
    return run::usage;
  }
}
