// Command-line front end; talks to the simulation core exclusively through
// the C API in solsim.h.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solsim.h"

namespace {

struct SpecDeleter {
  void operator()(solsim_spec* s) const { solsim_spec_free(s); }
};

int fail(solsim_spec* spec, int status) {
  std::fprintf(stderr, "solsim: error: %s\n", solsim_error(spec));
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field simulator for cavity-stabilized momentum-state "
               "solitons"};
  app.set_version_flag("--version", solsim_version());

  std::string config_path;
  std::string experiment;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double chiN = 0.0;
  bool chiN_given = false;
  std::vector<std::string> overrides;
  bool validate_only = false;
  bool list = false;

  app.add_option("--config", config_path, "Configuration file (key/value or JSON)");
  app.add_option("--experiment", experiment,
                 "Experiment name (fig2, fig3, fig4, detect, dissipation, "
                 "dispersion)");
  app.add_option("--out", out_dir, "Output directory for the result bundle");
  app.add_option("--seed", seed, "Monte Carlo seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--chiN", chiN,
                 "Shortcut for --set simulation.chiN=<value>")
      ->each([&](const std::string&) { chiN_given = true; });
  app.add_option("--set", overrides,
                 "Override a config key, e.g. simulation.sigma_p=0.05")
      ->take_all();
  app.add_flag("--validate", validate_only,
               "Validate the spec, print the resolved config and exit");
  app.add_flag("--list", list, "List available experiments and exit");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    std::printf("%s\n", solsim_experiments());
    return 0;
  }

  std::unique_ptr<solsim_spec, SpecDeleter> spec(solsim_spec_create());

  if (!config_path.empty()) {
    if (solsim_spec_load_file(spec.get(), config_path.c_str()) != SOLSIM_OK)
      return fail(spec.get(), SOLSIM_ERR_CONFIG);
  }
  if (!experiment.empty() &&
      solsim_spec_set_experiment(spec.get(), experiment.c_str()) != SOLSIM_OK)
    return fail(spec.get(), SOLSIM_ERR_CONFIG);
  if (!out_dir.empty() &&
      solsim_spec_set_output_dir(spec.get(), out_dir.c_str()) != SOLSIM_OK)
    return fail(spec.get(), SOLSIM_ERR_CONFIG);
  if (seed_given && solsim_spec_set_seed(spec.get(), seed) != SOLSIM_OK)
    return fail(spec.get(), SOLSIM_ERR_CONFIG);
  if (chiN_given &&
      solsim_spec_set(spec.get(), "simulation.chiN",
                      std::to_string(chiN).c_str()) != SOLSIM_OK)
    return fail(spec.get(), SOLSIM_ERR_CONFIG);
  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "solsim: error: --set expects key=value, got '%s'\n",
                   kv.c_str());
      return SOLSIM_ERR_CONFIG;
    }
    if (solsim_spec_set(spec.get(), kv.substr(0, eq).c_str(),
                        kv.substr(eq + 1).c_str()) != SOLSIM_OK)
      return fail(spec.get(), SOLSIM_ERR_CONFIG);
  }

  const int vstatus = solsim_spec_validate(spec.get());
  if (vstatus != SOLSIM_OK) return fail(spec.get(), vstatus);

  const char* warnings = solsim_spec_warnings(spec.get());
  if (warnings && warnings[0] != '\0')
    std::fprintf(stderr, "solsim: warning: %s\n", warnings);

  if (validate_only) {
    std::printf("%s\n", solsim_spec_resolved_json(spec.get()));
    return 0;
  }

  const int rstatus = solsim_run(spec.get());
  if (rstatus != SOLSIM_OK) return fail(spec.get(), rstatus);
  return 0;
}
