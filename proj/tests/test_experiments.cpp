#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "solsim/config.hpp"
#include "solsim/errors.hpp"
#include "solsim/experiments.hpp"

using namespace solsim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(TEST_OUTPUT_DIR) / name;
  fs::remove_all(dir);
  return dir;
}

ExperimentSpec make_spec(const std::string& name,
                         const std::map<std::string, std::string>& keys,
                         const fs::path& out) {
  ExperimentSpec spec;
  apply_override(spec, "experiment.name", name);
  apply_override(spec, "experiment.output_dir", out.string());
  for (const auto& [k, v] : keys) apply_override(spec, k, v);
  finalize_spec(spec);
  return spec;
}

std::map<std::string, std::string> read_bundle(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    files[entry.path().filename().string()] =
        read_text_file(entry.path());
  return files;
}

}  // namespace

TEST_CASE("dispersion experiment: bundle, checksums and flat curvature") {
  const fs::path out = fresh_dir("disp");
  const ExperimentSpec spec = make_spec(
      "dispersion",
      {{"dispersion.chi_values", "-2.0,-1.0"}, {"dispersion.n_p", "41"},
       {"dispersion.p_max", "0.1"}},
      out);
  const RunResult result = run_experiment(spec);
  CHECK(fs::exists(result.manifest_path));

  const Json manifest = Json::parse(read_text_file(result.manifest_path));
  CHECK(manifest["experiment"] == "dispersion");
  REQUIRE(manifest["files"].is_array());
  for (const auto& f : manifest["files"]) {
    const fs::path p = out / f["path"].get<std::string>();
    REQUIRE(fs::exists(p));
    const std::string content = read_text_file(p);
    CHECK(content.size() == f["bytes"].get<std::size_t>());
    CHECK(fnv1a64_hex(content) == f["fnv1a64"].get<std::string>());
  }

  // The table lists near-zero curvature for chiN = -4 E_R.
  const std::string table = read_text_file(out / "dispersion_table.csv");
  std::istringstream is(table);
  std::string line;
  bool found = false;
  while (std::getline(is, line)) {
    if (line.rfind("-2,", 0) == 0) {
      std::stringstream row(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 7);
      CHECK(std::fabs(std::stod(cells[6])) < 1e-3 * 0.5);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("experiments are byte-identical across reruns") {
  const fs::path out_a = fresh_dir("det_a");
  const fs::path out_b = fresh_dir("det_b");
  const std::map<std::string, std::string> keys = {
      {"simulation.t_final", "2"}, {"simulation.n_momentum", "101"}};
  run_experiment(make_spec("detect", keys, out_a));
  run_experiment(make_spec("detect", keys, out_b));

  const auto a = read_bundle(out_a);
  const auto b = read_bundle(out_b);
  REQUIRE(a.size() == b.size());
  for (const auto& [name, content] : a) {
    if (name == "manifest.json") continue;  // embeds the output_dir
    CHECK(content == b.at(name));
  }
}

TEST_CASE("a bundle can be reproduced from its manifest alone") {
  const fs::path out_a = fresh_dir("rt_a");
  const fs::path out_b = fresh_dir("rt_b");
  run_experiment(make_spec(
      "dispersion", {{"dispersion.chi_values", "-2.0"}}, out_a));

  ExperimentSpec again = load_config(out_a / "manifest.json");
  apply_override(again, "experiment.output_dir", out_b.string());
  finalize_spec(again);
  run_experiment(again);

  const auto a = read_bundle(out_a);
  const auto b = read_bundle(out_b);
  REQUIRE(a.size() == b.size());
  for (const auto& [name, content] : a) {
    if (name == "manifest.json") continue;
    CHECK(content == b.at(name));
  }
}

TEST_CASE("fig2 micro run emits widths, densities and trajectories") {
  const fs::path out = fresh_dir("fig2");
  run_experiment(make_spec("fig2",
                           {{"simulation.t_final", "2"},
                            {"simulation.n_momentum", "101"}},
                           out));
  for (const char* label : {"chi_0", "chi_opt", "chi_opt_neg"}) {
    CHECK(fs::exists(out / (std::string("width_") + label + ".json")));
    CHECK(fs::exists(out / (std::string("density_") + label + ".csv")));
    CHECK(fs::exists(out / (std::string("trajectory_") + label + ".csv")));
  }
  const Json width =
      Json::parse(read_text_file(out / "width_chi_opt.json"));
  CHECK(width["ratio_down"].size() == width["times_tau"].size());
  CHECK(width["sigma0_down"].get<double>() ==
        doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("fig3 micro run reports per-theta optima") {
  const fs::path out = fresh_dir("fig3");
  run_experiment(make_spec("fig3",
                           {{"simulation.t_final", "6"},
                            {"simulation.n_momentum", "101"},
                            {"fig3.chi_points", "9"},
                            {"fig3.chi_start", "-3.0"},
                            {"fig3.chi_stop", "-1.0"},
                            {"fig3.thetas", "1.5707963267948966"}},
                           out));
  const Json optimal = Json::parse(read_text_file(out / "optimal.json"));
  REQUIRE(optimal["optimal"].size() == 1);
  const double argmin = optimal["optimal"][0]["argmin_chiN"].get<double>();
  const double step = optimal["optimal"][0]["grid_step"].get<double>();
  CHECK(std::fabs(argmin - kChiOptN) < std::fabs(step) + 1e-12);
  CHECK(optimal["optimal"][0]["locked_guard_ok"].get<bool>());

  // The manifest itself lists the per-theta optimum.
  const Json manifest = Json::parse(read_text_file(out / "manifest.json"));
  CHECK(manifest["summary"]["optimal"][0]["argmin_chiN"].get<double>() ==
        argmin);
}

TEST_CASE("fig4 micro run covers widths and the negative control") {
  const fs::path out = fresh_dir("fig4");
  run_experiment(make_spec("fig4",
                           {{"simulation.t_final", "2"},
                            {"fig4.n_momentum_2d", "33"},
                            {"fig4.chi_values", "-2.0"}},
                           out));
  CHECK(fs::exists(out / "widths_chi0.json"));
  CHECK(fs::exists(out / "terminal_widths.csv"));
  CHECK(fs::exists(out / "naive_quadratic.csv"));
  CHECK(fs::exists(out / "density2d_chi0_t0.csv"));
  const std::string traj = read_text_file(out / "trajectory_chi0.csv");
  CHECK(traj.find("re_up_sym") != std::string::npos);
  const Json control = Json::parse(read_text_file(out / "control_widths.json"));
  CHECK(control["axis_ratio_final"].get<double>() > 1.0);
}

TEST_CASE("dissipation run fits the input rates") {
  const fs::path out = fresh_dir("diss");
  run_experiment(make_spec("dissipation",
                           {{"simulation.t_final", "20"},
                            {"dissipation.gamma1", "0.02"},
                            {"dissipation.gamma2", "0.02"}},
                           out));
  const Json rates = Json::parse(read_text_file(out / "rates.json"));
  CHECK(rates["fitted_transverse_rate"].get<double>() ==
        doctest::Approx(0.02).epsilon(0.01));
  CHECK(rates["fitted_sz_rate"].get<double>() ==
        doctest::Approx(0.04).epsilon(0.01));
  CHECK(fs::exists(out / "bloch_unbalanced.json"));
  CHECK(fs::exists(out / "unbalanced_scaling.csv"));
}

TEST_CASE("cavity section drives the dissipation rates") {
  const fs::path out = fresh_dir("diss_cavity");
  const ExperimentSpec spec = make_spec("dissipation",
                                        {{"simulation.t_final", "10"},
                                         {"cavity.g", "0.8"},
                                         {"cavity.delta0", "50"},
                                         {"cavity.kappa", "1.0"},
                                         {"cavity.alpha_sq_1", "4"},
                                         {"cavity.alpha_sq_2", "4"},
                                         {"cavity.delta1", "3"},
                                         {"cavity.delta2", "3"}},
                                        out);
  run_experiment(spec);
  const Json rates = Json::parse(read_text_file(out / "rates.json"));
  CHECK(rates["from_cavity"].get<bool>());
  CHECK(rates["gamma1"].get<double>() == rates["gamma2"].get<double>());
}

TEST_CASE("separate experiments never share an output directory by default") {
  ExperimentSpec a;
  apply_override(a, "experiment.name", "fig2");
  finalize_spec(a);
  ExperimentSpec b;
  apply_override(b, "experiment.name", "fig3");
  finalize_spec(b);
  CHECK(a.output_dir != b.output_dir);
}

TEST_CASE("unwritable output directory is a config error") {
  const fs::path blocker = fresh_dir("blocker");
  fs::create_directories(blocker.parent_path());
  write_text_file(blocker, "file, not dir");
  ExperimentSpec spec;
  apply_override(spec, "experiment.name", "dispersion");
  apply_override(spec, "experiment.output_dir",
                 (blocker / "sub").string());
  finalize_spec(spec);
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
}
