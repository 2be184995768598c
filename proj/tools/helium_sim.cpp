// helium-sim <kind> --config PATH --out DIR [--seed U64] [--workers N] [--set section.key=value ...]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure (results
// that were computed are still written).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "helium/errors.hpp"
#include "helium/harness/config.hpp"
#include "helium/harness/runner.hpp"

namespace hh = helium::harness;

int main(int argc, char** argv) {
  CLI::App app{"Electrons-on-helium Ising chain simulator"};
  std::string kind, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::vector<std::string> overrides;
  app.add_option("kind", kind, "device | spectrum | quench | readout | disorder | sweep")->required();
  app.add_option("--config", config_path, "experiment description (INI)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory for results.csv and run.json")->required();
  app.add_option("--seed", seed, "override [run] seed");
  app.add_option("--workers", workers, "threads for sweeps")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  app.add_option("--set", overrides, "override section.key=value (repeatable)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  hh::ExperimentSpec spec;
  try {
    std::ifstream in(config_path, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    spec = hh::parse_config(text.str());
    spec.kind = hh::kind_from_string(kind);
    if (seed) spec.seed = *seed;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw helium::ConfigError("--set expects section.key=value, got '" + o + "'", 0);
      hh::set_value(spec, o.substr(0, eq), o.substr(eq + 1));
    }
    spec.output = out_dir;
    hh::validate(spec);
  } catch (const helium::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  hh::ResultSet rs;
  int status = 0;
  try {
    rs = hh::run_experiment(spec, workers);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    status = 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    hh::write_outputs(spec, rs, out_dir, wall, workers);
  } catch (const std::exception& e) {
    std::cerr << "could not write results: " << e.what() << '\n';
    return 2;
  }
  const auto failed = hh::failed_rows(rs);
  std::cout << rs.rows.size() << " rows written to " << out_dir << " (" << failed << " failed, " << wall << " s)\n";
  if (failed > 0) status = 2;
  return status;
}
