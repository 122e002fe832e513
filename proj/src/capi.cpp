#include "solsim.h"

#include <cstring>
#include <string>

#include "solsim/config.hpp"
#include "solsim/dissipation.hpp"
#include "solsim/dynamics1d.hpp"
#include "solsim/errors.hpp"
#include "solsim/experiments.hpp"
#include "solsim/version.hpp"

struct solsim_spec {
  solsim::ExperimentSpec spec;
  bool validated = false;
  std::string error;
  std::string scratch;  // owns strings returned to the caller
};

namespace {

int guarded(solsim_spec* h, const std::function<void()>& fn) {
  if (!h) return SOLSIM_ERR_INVALID;
  h->error.clear();
  try {
    fn();
    return SOLSIM_OK;
  } catch (const solsim::ConfigError& e) {
    h->error = e.what();
    return SOLSIM_ERR_CONFIG;
  } catch (const solsim::NumericError& e) {
    h->error = e.what();
    return SOLSIM_ERR_NUMERIC;
  } catch (const std::exception& e) {
    h->error = e.what();
    return SOLSIM_ERR_INVALID;
  }
}

}  // namespace

extern "C" {

const char* solsim_version(void) { return solsim::kVersionString; }

const char* solsim_experiments(void) {
  static const std::string joined = [] {
    std::string s;
    for (const std::string& n : solsim::experiment_names()) {
      if (!s.empty()) s += ',';
      s += n;
    }
    return s;
  }();
  return joined.c_str();
}

solsim_spec* solsim_spec_create(void) { return new solsim_spec; }

void solsim_spec_free(solsim_spec* spec) { delete spec; }

int solsim_spec_load_file(solsim_spec* spec, const char* path) {
  if (!path) return SOLSIM_ERR_INVALID;
  return guarded(spec, [&] {
    // Loading replaces the spec; apply overrides after the load.
    spec->spec = solsim::load_config(path);
    spec->validated = false;
  });
}

int solsim_spec_set(solsim_spec* spec, const char* key, const char* value) {
  if (!key || !value) return SOLSIM_ERR_INVALID;
  return guarded(spec, [&] {
    solsim::apply_override(spec->spec, key, value);
    spec->validated = false;
  });
}

int solsim_spec_set_experiment(solsim_spec* spec, const char* name) {
  return solsim_spec_set(spec, "experiment.name", name);
}

int solsim_spec_set_output_dir(solsim_spec* spec, const char* dir) {
  return solsim_spec_set(spec, "experiment.output_dir", dir);
}

int solsim_spec_set_seed(solsim_spec* spec, uint64_t seed) {
  return solsim_spec_set(spec, "simulation.seed",
                         std::to_string(seed).c_str());
}

int solsim_spec_validate(solsim_spec* spec) {
  return guarded(spec, [&] {
    solsim::finalize_spec(spec->spec);
    spec->validated = true;
  });
}

const char* solsim_spec_resolved_json(solsim_spec* spec) {
  if (!spec) return "";
  spec->scratch = spec->spec.to_json().dump(2);
  return spec->scratch.c_str();
}

const char* solsim_spec_warnings(solsim_spec* spec) {
  if (!spec) return "";
  std::string joined;
  for (const std::string& w : spec->spec.warnings) {
    if (!joined.empty()) joined += '\n';
    joined += w;
  }
  spec->scratch = joined;
  return spec->scratch.c_str();
}

int solsim_run(solsim_spec* spec) {
  return guarded(spec, [&] {
    if (!spec->validated) {
      solsim::finalize_spec(spec->spec);
      spec->validated = true;
    }
    solsim::run_experiment(spec->spec);
  });
}

const char* solsim_error(const solsim_spec* spec) {
  return spec ? spec->error.c_str() : "invalid handle";
}

double solsim_chi_opt(double theta, double n_atoms) {
  return solsim::chi_opt(theta, n_atoms);
}

int solsim_dispersion(double chiN, double theta, const double* p, size_t n,
                      double* energies, double* m_eff, double* c_s) {
  if (!p || !energies) return SOLSIM_ERR_INVALID;
  const std::vector<double> pv(p, p + n);
  const solsim::DispersionCurve curve = solsim::dispersion(pv, chiN, theta);
  for (size_t i = 0; i < n; ++i) energies[i] = curve.energies[i];
  if (m_eff) *m_eff = curve.effective_mass;
  if (c_s) *c_s = curve.c_s;
  return SOLSIM_OK;
}

int solsim_closed_form(double p, double chiN, double t, double out[4]) {
  if (!out) return SOLSIM_ERR_INVALID;
  const auto [down, up] = solsim::closed_form_solution(p, chiN, t);
  out[0] = down.real();
  out[1] = down.imag();
  out[2] = up.real();
  out[3] = up.imag();
  return SOLSIM_OK;
}

int solsim_gamma_rates(double g, double delta0, double kappa,
                       double alpha_sq_1, double alpha_sq_2, double delta1,
                       double delta2, double* gamma1, double* gamma2) {
  if (!gamma1 || !gamma2) return SOLSIM_ERR_INVALID;
  try {
    solsim::CavityParams c;
    c.g = g;
    c.delta0 = delta0;
    c.kappa = kappa;
    c.alpha_sq_1 = alpha_sq_1;
    c.alpha_sq_2 = alpha_sq_2;
    c.delta1 = delta1;
    c.delta2 = delta2;
    const auto [g1, g2] = solsim::gamma_rates(c);
    *gamma1 = g1;
    *gamma2 = g2;
    return SOLSIM_OK;
  } catch (const solsim::ConfigError&) {
    return SOLSIM_ERR_CONFIG;
  }
}

}  // extern "C"
