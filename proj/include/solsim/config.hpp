#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "solsim/dissipation.hpp"
#include "solsim/io.hpp"
#include "solsim/params.hpp"

namespace solsim {

// A fully resolved experiment description: which experiment to run, where
// to write, the shared simulation parameters and the per-experiment knobs.
struct ExperimentSpec {
  std::string name;  // fig2 | fig3 | fig4 | detect | dissipation | dispersion
  std::filesystem::path output_dir;
  SimulationParams params;

  struct Fig3 {
    double chi_start = -3.0;
    double chi_stop = -0.1;
    int chi_points = 59;
    std::vector<double> thetas = {0.25 * kPi, 0.5 * kPi, 0.75 * kPi};
  } fig3;

  struct Fig4 {
    std::vector<double> chi_values = {kChiOptN, 0.0};
    int n_momentum_2d = 41;
    double control_chiN = -2.0 * kRecoilEnergy;  // flattens the k axis of
                                                 // the single-recoil scheme
    double control_sigma_p = 0.08;
  } fig4;

  struct Detect {
    bool echo = true;
  } detect;

  struct Dissipation {
    double gamma1 = 0.01 * 4.0 * kRecoilEnergy;
    double gamma2 = 0.01 * 4.0 * kRecoilEnergy;
    double n_atoms = 1000.0;
  } dissipation;

  bool cavity_enabled = false;  // any cavity.* key present
  CavityParams cavity;

  struct Dispersion {
    std::vector<double> chi_values = {kChiOptN};
    std::vector<double> thetas = {0.5 * kPi};
    double p_max = 0.5;
    int n_p = 201;
  } dispersion;

  std::set<std::string> explicit_keys;  // keys the user actually provided
  std::vector<std::string> warnings;

  bool is_explicit(const std::string& key) const {
    return explicit_keys.count(key) != 0;
  }

  // Full resolved configuration, reloadable as a JSON config.
  Json to_json() const;
  std::string params_hash() const;
};

const std::vector<std::string>& experiment_names();

// Sets one schema field from its string form; throws ConfigError for
// unknown keys or malformed values. Keys are dotted: "simulation.chiN".
void apply_override(ExperimentSpec& spec, const std::string& key,
                    const std::string& value);

// Parses key/value text with [section] headers (or JSON with the same
// section structure; manifests are accepted via their "config" block).
// Unknown keys are a hard error; INI errors carry line numbers.
ExperimentSpec parse_config_text(const std::string& text,
                                 const std::string& source_name);

ExperimentSpec load_config(const std::filesystem::path& path);

// Applies per-experiment defaults for keys the user left implicit, then
// runs all invariant checks. Collects warnings (locked-regime guard).
void finalize_spec(ExperimentSpec& spec);

// load + finalize, the validate_config operation of the CLI.
ExperimentSpec validate_config(const std::filesystem::path& path);

}  // namespace solsim
