/* C interface to the solsim simulation core.
 *
 * Handles are opaque; every fallible call returns a status code and leaves
 * a message retrievable with solsim_error(). The status values double as
 * CLI exit codes. All quantities use natural units (hbar = M = k = 1,
 * E_R = 0.5) with times in units of tau = 2*pi/(|chi_opt| N).
 */
#ifndef SOLSIM_H
#define SOLSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SOLSIM_OK = 0,
  SOLSIM_ERR_CONFIG = 2,  /* schema / range / parse violations */
  SOLSIM_ERR_NUMERIC = 3, /* step guard, NaN aborts */
  SOLSIM_ERR_INVALID = 4  /* bad handle / argument */
} solsim_status;

typedef struct solsim_spec solsim_spec;

const char* solsim_version(void);

/* Comma-separated registry of experiment names. */
const char* solsim_experiments(void);

/* --- experiment spec lifecycle ------------------------------------- */

solsim_spec* solsim_spec_create(void);
void solsim_spec_free(solsim_spec* spec);

/* Loads a key/value or JSON config file (result manifests also work). */
int solsim_spec_load_file(solsim_spec* spec, const char* path);

/* Dotted-key override, e.g. ("simulation.chiN", "-2.0"). Unknown keys
 * are rejected. */
int solsim_spec_set(solsim_spec* spec, const char* key, const char* value);

int solsim_spec_set_experiment(solsim_spec* spec, const char* name);
int solsim_spec_set_output_dir(solsim_spec* spec, const char* dir);
int solsim_spec_set_seed(solsim_spec* spec, uint64_t seed);

/* Applies defaults and runs the full schema validation. */
int solsim_spec_validate(solsim_spec* spec);

/* Resolved configuration as JSON; returns a handle-owned string valid
 * until the next call on the same handle. */
const char* solsim_spec_resolved_json(solsim_spec* spec);

/* Newline-separated validation warnings (empty string if none). */
const char* solsim_spec_warnings(solsim_spec* spec);

/* Validates, runs the experiment and writes the result bundle. */
int solsim_run(solsim_spec* spec);

/* Last error message recorded on this handle (empty if none). */
const char* solsim_error(const solsim_spec* spec);

/* --- stateless numeric entry points --------------------------------- */

/* chi_opt(theta) * N for n_atoms atoms: -4 E_R sin^2(theta) / n_atoms. */
double solsim_chi_opt(double theta, double n_atoms);

/* Locked-band energies for an array of momenta; m_eff/c_s may be NULL. */
int solsim_dispersion(double chiN, double theta, const double* p, size_t n,
                      double* energies, double* m_eff, double* c_s);

/* Closed-form locked-regime amplitudes at momentum p and time t
 * (natural units); out = {Re down, Im down, Re up, Im up}. */
int solsim_closed_form(double p, double chiN, double t, double out[4]);

/* Dual-pump jump rates Gamma_i = (g^2/4 delta0)^2 |alpha_i|^2 kappa /
 * (delta_i^2 + (kappa/2)^2). */
int solsim_gamma_rates(double g, double delta0, double kappa,
                       double alpha_sq_1, double alpha_sq_2, double delta1,
                       double delta2, double* gamma1, double* gamma2);

#ifdef __cplusplus
}
#endif

#endif /* SOLSIM_H */
