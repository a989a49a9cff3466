#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Motional response of a vacuum-filled two-mirror cavity"};
  app.set_version_flag("--version", "casimir 1.0.0");

  std::string command;
  std::string config_path;
  app.add_option("command", command, "coeffs | force | spectrum | simulate | rigidbody | verify")
      ->check(CLI::IsMember({"coeffs", "force", "spectrum", "simulate", "rigidbody", "verify"}));
  app.add_option("--config", config_path, "flat key = value file; flags override it");

  // Every other flag is collected as text and applied through the same
  // key parser as the config file.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"q", "mirror separation"},
      {"mirror", "both mirrors: perfect | lorentzian:omega=<val> | file:<path>"},
      {"mirror1", "mirror 1 model"},
      {"mirror2", "mirror 2 model"},
      {"omega", "cutoff for Lorentzian mirrors given without one"},
      {"units", "natural | si"},
      {"tol", "tolerance for every identity check"},
      {"quad-tol", "relative tolerance of the quadratures"},
      {"sweep", "<q|Omega>:<min>:<max>:<steps>[:log]"},
      {"out", "data file"},
      {"format", "csv | json"},
      {"manifest", "run manifest path (default <out>.manifest.json)"},
      {"suite", "verify suite: all | static | spectral | physicality"},
      {"omega-tau-max", "spectrum range in units of 1/tau"},
      {"steps", "spectrum grid intervals"},
      {"threads", "worker threads (0 = all cores)"},
      {"trajectory", "CSV trajectory t,dq1,dq2"},
      {"motion1", "rest | pulse:... | sinusoid:... | poly:..."},
      {"motion2", "rest | pulse:... | sinusoid:... | poly:..."},
      {"t0", "first sample time"},
      {"dt", "sample spacing"},
      {"duration", "length of the run"},
      {"ramp", "switch-on ramp length"},
      {"accel", "acceleration"},
      {"mass1", "mass of mirror 1"},
      {"mass2", "mass of mirror 2"},
      {"cross-check", "compare the force with the spectral route (true | false)"},
  };
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    options.push_back(app.add_option("--" + flags[k].first, values[k], flags[k].second));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    casimir_cli::RunConfig cfg;
    if (!config_path.empty()) {
      for (const auto& [k, v] : casimir_cli::read_config_file(config_path)) casimir_cli::apply_key(cfg, k, v);
    }
    if (!command.empty()) cfg.command = command;
    for (std::size_t k = 0; k < flags.size(); ++k) {
      if (options[k]->count() > 0) casimir_cli::apply_key(cfg, flags[k].first, values[k]);
    }
    if (cfg.command.empty()) throw casimir_cli::UsageError("no command given");
    casimir_cli::validate(cfg);
    return casimir_cli::run(cfg, std::cout, std::cerr);
  } catch (const casimir_cli::UsageError& e) {
    std::cerr << "casimir: " << e.what() << "\n" << "run 'casimir --help' for usage\n";
    return 2;
  }
}
