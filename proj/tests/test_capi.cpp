// Exercises the shared-library surface exactly as an external C consumer
// would: only solsim.h, opaque handles, status codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "solsim.h"

namespace fs = std::filesystem;

TEST_CASE("version and registry strings") {
  CHECK(std::string(solsim_version()).find("solsim") == 0);
  const std::string names = solsim_experiments();
  for (const char* n :
       {"fig2", "fig3", "fig4", "detect", "dissipation", "dispersion"})
    CHECK(names.find(n) != std::string::npos);
}

TEST_CASE("spec lifecycle, overrides and validation") {
  solsim_spec* spec = solsim_spec_create();
  REQUIRE(spec != nullptr);

  CHECK(solsim_spec_set(spec, "simulation.sigma_p", "0.06") == SOLSIM_OK);
  CHECK(solsim_spec_set(spec, "simulation.sigma_q", "0.06") ==
        SOLSIM_ERR_CONFIG);
  CHECK(std::string(solsim_error(spec)).find("sigma_q") !=
        std::string::npos);

  // Validation without an experiment name fails.
  CHECK(solsim_spec_validate(spec) == SOLSIM_ERR_CONFIG);

  CHECK(solsim_spec_set_experiment(spec, "dispersion") == SOLSIM_OK);
  CHECK(solsim_spec_set_seed(spec, 99) == SOLSIM_OK);
  CHECK(solsim_spec_validate(spec) == SOLSIM_OK);

  const std::string json = solsim_spec_resolved_json(spec);
  CHECK(json.find("\"sigma_p\": 0.06") != std::string::npos);
  CHECK(json.find("\"seed\": 99") != std::string::npos);

  solsim_spec_free(spec);
}

TEST_CASE("warnings surface through the handle") {
  solsim_spec* spec = solsim_spec_create();
  solsim_spec_set_experiment(spec, "dispersion");
  solsim_spec_set(spec, "simulation.sigma_p", "0.2");
  CHECK(solsim_spec_validate(spec) == SOLSIM_OK);
  CHECK(std::string(solsim_spec_warnings(spec)).find("locked-regime") !=
        std::string::npos);
  solsim_spec_free(spec);
}

TEST_CASE("stateless numeric entry points") {
  CHECK(solsim_chi_opt(1.5707963267948966, 1.0) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(solsim_chi_opt(0.0, 1.0) == 0.0);

  double p[3] = {-0.1, 0.0, 0.1};
  double energies[3];
  double m_eff = 0.0, c_s = 0.0;
  REQUIRE(solsim_dispersion(-2.0, 1.5707963267948966, p, 3, energies,
                            &m_eff, &c_s) == SOLSIM_OK);
  CHECK(energies[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::isinf(m_eff));
  CHECK(c_s == 0.0);

  double amps[4];
  REQUIRE(solsim_closed_form(0.0, -2.0, 1.0, amps) == SOLSIM_OK);
  // e^{+i t}/sqrt(2) at p = 0, chiN = -2.
  CHECK(amps[0] == doctest::Approx(std::cos(1.0) / std::sqrt(2.0))
                       .epsilon(1e-12));
  CHECK(amps[1] == doctest::Approx(std::sin(1.0) / std::sqrt(2.0))
                       .epsilon(1e-12));

  double g1 = -1.0, g2 = -1.0;
  REQUIRE(solsim_gamma_rates(0.8, 50.0, 1.0, 4.0, 4.0, 3.0, 3.0, &g1,
                             &g2) == SOLSIM_OK);
  CHECK(g1 == g2);
  CHECK(g1 > 0.0);
  CHECK(solsim_gamma_rates(0.8, 50.0, -1.0, 4.0, 4.0, 3.0, 3.0, &g1, &g2) ==
        SOLSIM_ERR_CONFIG);
}

TEST_CASE("running an experiment through the C API") {
  const fs::path out = fs::path(TEST_OUTPUT_DIR) / "capi_disp";
  fs::remove_all(out);

  solsim_spec* spec = solsim_spec_create();
  solsim_spec_set_experiment(spec, "dispersion");
  solsim_spec_set_output_dir(spec, out.string().c_str());
  solsim_spec_set(spec, "dispersion.n_p", "21");
  REQUIRE(solsim_run(spec) == SOLSIM_OK);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "dispersion_table.csv"));
  solsim_spec_free(spec);
}

TEST_CASE("loading a config file through the C API") {
  solsim_spec* spec = solsim_spec_create();
  const std::string path = std::string(TEST_DATA_DIR) + "/minimal.ini";
  REQUIRE(solsim_spec_load_file(spec, path.c_str()) == SOLSIM_OK);
  CHECK(solsim_spec_validate(spec) == SOLSIM_OK);
  CHECK(solsim_spec_load_file(spec, "/no/such/file.ini") ==
        SOLSIM_ERR_CONFIG);
  solsim_spec_free(spec);
}
