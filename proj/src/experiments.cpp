#include "solsim/experiments.hpp"

#include <cmath>
#include <filesystem>

#include "solsim/dynamics_hd.hpp"
#include "solsim/errors.hpp"
#include "solsim/observables.hpp"
#include "solsim/parallel.hpp"
#include "solsim/version.hpp"

namespace solsim {

namespace fs = std::filesystem;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  const double step = n > 1 ? (b - a) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i) v[i] = a + i * step;
  return v;
}

Json units_block() {
  Json u;
  u["hbar"] = 1.0;
  u["mass"] = 1.0;
  u["k"] = 1.0;
  u["recoil_energy"] = kRecoilEnergy;
  u["chi_opt_N"] = kChiOptN;
  u["time_unit"] = "tau = 2*pi/(|chi_opt| N) = pi in natural units";
  u["file_times"] = "tau";
  return u;
}

// Collects bundle files, then writes the manifest with their checksums.
class BundleWriter {
 public:
  BundleWriter(const ExperimentSpec& spec) : spec_(spec) {
    std::error_code ec;
    fs::create_directories(spec.output_dir, ec);
    if (ec || !fs::is_directory(spec.output_dir))
      throw ConfigError("experiment.output_dir: cannot create '" +
                        spec.output_dir.string() + "'");
  }

  void add(const std::string& rel, const std::string& content) {
    write_text_file(spec_.output_dir / rel, content);
    Json f;
    f["path"] = rel;
    f["bytes"] = content.size();
    f["fnv1a64"] = fnv1a64_hex(content);
    files_.push_back(f);
  }

  void add_json(const std::string& rel, const Json& j) {
    add(rel, j.dump(2) + "\n");
  }

  void csv_meta(CsvBuilder& csv) const {
    csv.metadata("generator", kVersionString);
    csv.metadata("experiment", spec_.name);
    csv.metadata("params_hash", spec_.params_hash());
    csv.metadata("units", "natural (hbar = M = k = 1), times in tau");
  }

  Json json_meta() const {
    Json m;
    m["generator"] = kVersionString;
    m["experiment"] = spec_.name;
    m["params_hash"] = spec_.params_hash();
    m["units"] = units_block();
    return m;
  }

  fs::path write_manifest() {
    Json m;
    m["experiment"] = spec_.name;
    m["code_version"] = kVersionString;
    m["params_hash"] = spec_.params_hash();
    m["units"] = units_block();
    m["config"] = spec_.to_json();
    m["warnings"] = spec_.warnings;
    m["summary"] = summary;
    m["files"] = files_;
    const fs::path path = spec_.output_dir / "manifest.json";
    write_text_file(path, m.dump(2) + "\n");
    return path;
  }

  Json summary = Json::object();  // headline results, experiment-specific

 private:
  const ExperimentSpec& spec_;
  std::vector<Json> files_;
};

std::size_t stride_for(double interval_tau, double dt_tau) {
  const auto s = static_cast<std::size_t>(std::llround(interval_tau / dt_tau));
  return s == 0 ? 1 : s;
}

Json width_series_json(const WidthSeries& ws) {
  Json j;
  Json times = Json::array();
  for (double t : ws.times) times.push_back(natural_to_tau(t));
  j["times_tau"] = times;
  j["sigma0_down"] = ws.sigma0_down;
  j["sigma0_up"] = ws.sigma0_up;
  j["ratio_down"] = ws.ratio_down;
  j["ratio_up"] = ws.ratio_up;
  Json rd = Json::array(), ru = Json::array();
  Json cd = Json::array(), cu = Json::array();
  for (std::size_t i = 0; i < ws.down.size(); ++i) {
    rd.push_back(ws.down[i].residual_norm);
    ru.push_back(ws.up[i].residual_norm);
    cd.push_back(ws.down[i].converged);
    cu.push_back(ws.up[i].converged);
  }
  j["residual_down"] = rd;
  j["residual_up"] = ru;
  j["converged_down"] = cd;
  j["converged_up"] = cu;
  return j;
}

// --- fig2: 1D densities and widths for chi in {0, chi_opt, -chi_opt} ----

void run_fig2(const ExperimentSpec& spec, BundleWriter& bundle) {
  SimulationParams p = spec.params;
  p.dimension = 1;
  const MomentumEnsemble ens = build_ensemble(p);
  const SpinorField1D f0 = SpinorField1D::polar(ens.size(), p.theta);
  const ZGrid grid = default_z_grid(p.sigma_p, p.t_final_natural());

  struct Case {
    const char* label;
    double chiN;
  };
  const Case cases[3] = {{"chi_0", 0.0},
                         {"chi_opt", kChiOptN},
                         {"chi_opt_neg", -kChiOptN}};

  Json summary;
  summary["metadata"] = bundle.json_meta();

  for (const Case& c : cases) {
    const Trajectory1D traj =
        evolve(f0, ens, c.chiN, p.t_final_natural(), p.dt_natural(),
               stride_for(0.5, p.dt), p.theta);
    const WidthSeries ws = width_series(traj, ens, grid);

    Json wj = width_series_json(ws);
    wj["chiN"] = c.chiN;
    wj["metadata"] = bundle.json_meta();
    bundle.add_json(std::string("width_") + c.label + ".json", wj);

    CsvBuilder density;
    bundle.csv_meta(density);
    density.metadata("chiN", format_double(c.chiN));
    density.header({"t_tau", "z", "rho_down", "rho_up"});
    const std::size_t every = stride_for(2.0, 0.5);  // profiles every 2 tau
    for (std::size_t i = 0; i < traj.states.size(); i += every) {
      const DensityProfile prof = position_density(traj.states[i], ens, grid);
      const double t_tau = natural_to_tau(traj.times[i]);
      for (std::size_t j = 0; j < prof.z.size(); ++j)
        density.row_values({t_tau, prof.z[j], prof.rho_down[j],
                            prof.rho_up[j]});
    }
    bundle.add(std::string("density_") + c.label + ".csv", density.str());

    // Downsampled raw trajectory.
    Trajectory1D thin;
    const std::size_t traj_every = stride_for(5.0, 0.5);
    for (std::size_t i = 0; i < traj.states.size(); i += traj_every) {
      thin.times.push_back(traj.times[i]);
      thin.states.push_back(traj.states[i]);
    }
    bundle.add(std::string("trajectory_") + c.label + ".csv",
               trajectory_csv(thin, ens,
                              {{"chiN", format_double(c.chiN)}}));

    double max_ratio = 0.0;
    for (double r : ws.ratio_down) max_ratio = std::max(max_ratio, r);
    Json cj;
    cj["chiN"] = c.chiN;
    cj["max_ratio_down"] = max_ratio;
    cj["final_ratio_down"] = ws.ratio_down.back();
    cj["final_residual_down"] = ws.down.back().residual_norm;
    summary["cases"][c.label] = cj;
  }
  bundle.add_json("summary.json", summary);
  bundle.summary["cases"] = summary["cases"];
}

// --- fig3: (theta, chi) width-ratio grid and the optimal curve ----------

void run_fig3(const ExperimentSpec& spec, BundleWriter& bundle) {
  SimulationParams p = spec.params;
  p.dimension = 1;
  const std::vector<double> chi_grid =
      linspace(spec.fig3.chi_start, spec.fig3.chi_stop, spec.fig3.chi_points);
  const double t_d = p.t_final_natural();

  CsvBuilder csv;
  bundle.csv_meta(csv);
  csv.header({"theta", "chiN", "ratio_down", "ratio_up", "ratio_weighted",
              "fit_ok"});

  Json optimal = Json::array();
  for (double theta : spec.fig3.thetas) {
    const SweepResult sweep = sweep_width_vs_chi(p, theta, chi_grid, t_d);
    for (const SweepPoint& pt : sweep.points)
      csv.row({format_double(theta), format_double(pt.chiN),
               format_double(pt.ratio_down), format_double(pt.ratio_up),
               format_double(pt.ratio_weighted), pt.fit_ok ? "1" : "0"});
    Json o;
    o["theta"] = theta;
    o["argmin_chiN"] = sweep.points[sweep.argmin].chiN;
    o["argmin_ratio"] = sweep.points[sweep.argmin].ratio_down;
    o["predicted_chiN"] = chi_opt(theta, 1.0);
    o["grid_step"] = chi_grid.size() > 1 ? chi_grid[1] - chi_grid[0] : 0.0;
    o["locked_guard_ok"] = sweep.locked_guard_ok;
    optimal.push_back(o);
  }
  bundle.add("width_grid.csv", csv.str());

  Json oj;
  oj["metadata"] = bundle.json_meta();
  oj["optimal"] = optimal;
  bundle.add_json("optimal.json", oj);
  bundle.summary["optimal"] = optimal;
}

// --- fig4: 2D soliton widths/densities plus the single-recoil control ---

void run_fig4(const ExperimentSpec& spec, BundleWriter& bundle) {
  SimulationParams p = spec.params;
  p.dimension = 2;
  const MomentumEnsemble ens = build_ensemble(p);
  const SpinorFieldHD f0 =
      SpinorFieldHD::equal_superposition(2, ens.size());
  // Only the carrier-free down branch is fitted and rendered; it does not
  // drift, so the window needs no ballistic margin (and must stay inside
  // the synthesis period of the momentum grid).
  const ZGrid grid = default_z_grid(p.sigma_p, 0.0);

  CsvBuilder terminal;
  bundle.csv_meta(terminal);
  terminal.header({"chiN", "sigma_x_ratio", "sigma_z_ratio"});

  for (std::size_t ci = 0; ci < spec.fig4.chi_values.size(); ++ci) {
    const double chiN = spec.fig4.chi_values[ci];
    const std::string label = "chi" + std::to_string(ci);
    const TrajectoryHD traj =
        evolve_hd(f0, ens, chiN, p.t_final_natural(), p.dt_natural(),
                  stride_for(1.0, p.dt));
    const WidthSeriesHD ws = width_series_hd(traj, ens, grid);

    Json wj;
    wj["metadata"] = bundle.json_meta();
    wj["chiN"] = chiN;
    Json times = Json::array();
    for (double t : ws.times) times.push_back(natural_to_tau(t));
    wj["times_tau"] = times;
    wj["ratio_x"] = ws.ratios[0];
    wj["ratio_z"] = ws.ratios[1];
    wj["sigma0_x"] = ws.sigma0[0];
    wj["sigma0_z"] = ws.sigma0[1];
    bundle.add_json("widths_" + label + ".json", wj);

    terminal.row_values({chiN, ws.ratios[0].back(), ws.ratios[1].back()});
    Json tw;
    tw["chiN"] = chiN;
    tw["sigma_x_ratio"] = ws.ratios[0].back();
    tw["sigma_z_ratio"] = ws.ratios[1].back();
    bundle.summary["terminal_widths"].push_back(tw);

    // Sparse raw trajectory (first, middle, last sample).
    TrajectoryHD thin;
    for (const std::size_t idx :
         {std::size_t{0}, traj.states.size() / 2, traj.states.size() - 1}) {
      thin.times.push_back(traj.times[idx]);
      thin.states.push_back(traj.states[idx]);
    }
    bundle.add("trajectory_" + label + ".csv",
               trajectory_csv_hd(thin, ens, {{"chiN", format_double(chiN)}}));

    // Down-branch density snapshots at t = 0 and t = t_final.
    const ZGrid render = ZGrid::linspace(grid.z.front(), grid.z.back(), 128);
    for (const std::size_t idx :
         {std::size_t{0}, traj.states.size() - 1}) {
      const DensityGrid2D d2 =
          density_grid_2d(traj.states[idx], ens, render, render);
      CsvBuilder csv;
      bundle.csv_meta(csv);
      csv.metadata("chiN", format_double(chiN));
      csv.metadata("t_tau", format_double(natural_to_tau(d2.time)));
      csv.header({"x", "z", "rho_down"});
      for (std::size_t ix = 0; ix < d2.x.size(); ++ix)
        for (std::size_t iz = 0; iz < d2.z.size(); ++iz)
          csv.row_values({d2.x[ix], d2.z[iz], d2.rho[ix * d2.z.size() + iz]});
      bundle.add("density2d_" + label + (idx == 0 ? "_t0" : "_tfinal") +
                     ".csv",
                 csv.str());
    }
  }
  bundle.add("terminal_widths.csv", terminal.str());

  // Negative control, part 1: the uncancelable cross coefficient.
  CsvBuilder naive;
  bundle.csv_meta(naive);
  naive.metadata("k_vec", "(k, k)");
  naive.header({"chiN", "cxx", "czz", "cxz"});
  for (double chiN : {-8.0, -4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0,
                      2.0, 4.0, 8.0}) {
    const NaiveQuadraticForm q =
        naive_2d_quadratic_coeffs(chiN, kWavenumber, kWavenumber);
    naive.row_values({chiN, q.cxx, q.czz, q.cxz});
  }
  bundle.add("naive_quadratic.csv", naive.str());

  // Negative control, part 2: anisotropic widths under the single-recoil
  // scheme, simulated in coordinates aligned with the photon recoil.
  SimulationParams cp = p;
  cp.sigma_p = spec.fig4.control_sigma_p;
  cp.t_final = 30.0;
  const MomentumEnsemble cens = build_ensemble(cp);
  const SpinorField1D cf0 = SpinorField1D::polar(cens.size(), 0.5 * kPi);
  const double k_norm = std::sqrt(2.0) * kWavenumber;
  const Trajectory1D ctraj =
      evolve_naive_control(cf0, cens, spec.fig4.control_chiN, k_norm,
                           cp.t_final_natural(), cp.dt_natural(),
                           stride_for(1.0, cp.dt));
  // Both control axes are drift-free in the rotated frame.
  const ZGrid cgrid = default_z_grid(cp.sigma_p, 0.0);

  Json cj;
  cj["metadata"] = bundle.json_meta();
  cj["chiN"] = spec.fig4.control_chiN;
  cj["sigma_p"] = cp.sigma_p;
  Json ct = Json::array(), ra = Json::array(), rp = Json::array();
  double s0_along = 0.0, s0_perp = 0.0;
  for (std::size_t i = 0; i < ctraj.states.size(); ++i) {
    const std::vector<double> rho_along = marginal_density_two_level(
        ctraj.states[i], cens, 0, cgrid, Branch::Down);
    const std::vector<double> rho_perp = marginal_density_two_level(
        ctraj.states[i], cens, 1, cgrid, Branch::Down);
    const double sa = fit_gaussian(cgrid.z, rho_along).sigma;
    const double sp = fit_gaussian(cgrid.z, rho_perp).sigma;
    if (i == 0) {
      s0_along = sa;
      s0_perp = sp;
    }
    ct.push_back(natural_to_tau(ctraj.times[i]));
    ra.push_back(sa / s0_along);
    rp.push_back(sp / s0_perp);
  }
  cj["times_tau"] = ct;
  cj["ratio_along_k"] = ra;
  cj["ratio_perp_k"] = rp;
  cj["axis_ratio_final"] =
      rp.back().get<double>() / ra.back().get<double>();
  bundle.add_json("control_widths.json", cj);
  bundle.summary["control_axis_ratio"] = cj["axis_ratio_final"];
}

// --- detect: two-arm interferometer contrast ----------------------------

void run_detect(const ExperimentSpec& spec, BundleWriter& bundle) {
  SimulationParams p = spec.params;
  p.dimension = 1;
  const MomentumEnsemble ens = build_ensemble(p);
  const double omega = kChiOptN;

  struct Case {
    const char* label;
    double chiN;
    bool arm_b_driven;
  };
  const Case cases[4] = {{"omega_ref", omega, true},
                         {"chi_opt", kChiOptN, false},
                         {"chi_0", 0.0, false},
                         {"chi_opt_neg", -kChiOptN, false}};

  for (const Case& c : cases) {
    const ContrastSeries cs = interferometer_sequence(
        ens, c.chiN, omega, spec.detect.echo, p.t_final_natural(),
        p.dt_natural(), stride_for(0.1, p.dt), c.arm_b_driven);
    Json j;
    j["metadata"] = bundle.json_meta();
    j["chiN_arm"] = c.chiN;
    j["omega_arm"] = omega;
    j["echo"] = spec.detect.echo;
    j["arm_b_driven"] = c.arm_b_driven;
    Json times = Json::array();
    for (double t : cs.times) times.push_back(natural_to_tau(t));
    j["times_tau"] = times;
    j["contrast"] = cs.contrast;
    j["population"] = cs.population;
    bundle.add_json(std::string("contrast_") + c.label + ".json", j);
    bundle.summary["final_contrast"][c.label] = cs.contrast.back();
  }
}

// --- dissipation: balanced/unbalanced pump Bloch trajectories -----------

Json bloch_json(const BlochTrajectory& traj) {
  Json j;
  Json times = Json::array(), sx = Json::array(), sy = Json::array(),
       sz = Json::array();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    times.push_back(natural_to_tau(traj.times[i]));
    sx.push_back(traj.states[i].sx);
    sy.push_back(traj.states[i].sy);
    sz.push_back(traj.states[i].sz);
  }
  j["times_tau"] = times;
  j["sx"] = sx;
  j["sy"] = sy;
  j["sz"] = sz;
  return j;
}

void run_dissipation(const ExperimentSpec& spec, BundleWriter& bundle) {
  const SimulationParams& p = spec.params;
  double g1 = spec.dissipation.gamma1;
  double g2 = spec.dissipation.gamma2;
  Json rates;
  rates["metadata"] = bundle.json_meta();
  if (spec.cavity_enabled) {
    const auto [c1, c2] = gamma_rates(spec.cavity);
    g1 = c1;
    g2 = c2;
    rates["from_cavity"] = true;
  } else {
    rates["from_cavity"] = false;
  }
  rates["gamma1"] = g1;
  rates["gamma2"] = g2;

  const double n_atoms = spec.dissipation.n_atoms;
  const double t_final = p.t_final_natural();
  const double dt = p.dt_natural();
  const std::size_t stride = stride_for(0.1, p.dt);

  // Balanced pump on the equator: |S_perp| decays at Gamma.
  const double gbal = 0.5 * (g1 + g2);
  const BlochTrajectory eq = evolve_bloch(
      CollectiveBloch::polar(n_atoms, 0.5 * kPi), p.chiN, gbal, gbal,
      t_final, dt, stride);
  Json eq_json = bloch_json(eq);
  eq_json["metadata"] = bundle.json_meta();
  eq_json["gamma"] = gbal;
  eq_json["chiN"] = p.chiN;
  eq_json["n_atoms"] = n_atoms;
  bundle.add_json("bloch_balanced_equator.json", eq_json);

  std::vector<double> sperp(eq.times.size());
  for (std::size_t i = 0; i < eq.times.size(); ++i)
    sperp[i] = std::sqrt(eq.states[i].sx * eq.states[i].sx +
                         eq.states[i].sy * eq.states[i].sy);
  rates["fitted_transverse_rate"] = fit_decay_rate(eq.times, sperp);

  // Balanced pump at theta = pi/3: S_Z decays at 2 Gamma.
  const BlochTrajectory tilted = evolve_bloch(
      CollectiveBloch::polar(n_atoms, kPi / 3.0), p.chiN, gbal, gbal,
      t_final, dt, stride);
  Json tj = bloch_json(tilted);
  tj["metadata"] = bundle.json_meta();
  tj["gamma"] = gbal;
  tj["chiN"] = p.chiN;
  tj["n_atoms"] = n_atoms;
  bundle.add_json("bloch_balanced_tilted.json", tj);

  std::vector<double> szs(tilted.times.size());
  for (std::size_t i = 0; i < tilted.times.size(); ++i)
    szs[i] = tilted.states[i].sz;
  rates["fitted_sz_rate"] = fit_decay_rate(tilted.times, szs);

  // Unbalanced pump from the equator: superradiant drift.
  const BlochTrajectory unbal = evolve_bloch(
      CollectiveBloch::polar(n_atoms, 0.5 * kPi), p.chiN, g1, g2,
      std::min(t_final, 5.0 * kTau), dt, stride);
  Json uj = bloch_json(unbal);
  uj["metadata"] = bundle.json_meta();
  uj["gamma1"] = g1;
  uj["gamma2"] = g2;
  uj["chiN"] = p.chiN;
  uj["n_atoms"] = n_atoms;
  bundle.add_json("bloch_unbalanced.json", uj);

  // Drift scaling with atom number (normalized spins).
  CsvBuilder scaling;
  bundle.csv_meta(scaling);
  scaling.header({"n_atoms", "initial_dszdt_normalized"});
  for (double n : {1e2, 1e3, 1e4}) {
    const CollectiveBloch s0 = CollectiveBloch::polar(n, 0.5 * kPi);
    const CollectiveBloch d = bloch_derivative(s0, p.chiN, 0.0, g2);
    scaling.row_values({n, d.sz / (0.5 * n)});
  }
  bundle.add("unbalanced_scaling.csv", scaling.str());

  bundle.add_json("rates.json", rates);
  bundle.summary["gamma1"] = g1;
  bundle.summary["gamma2"] = g2;
  bundle.summary["fitted_transverse_rate"] = rates["fitted_transverse_rate"];
  bundle.summary["fitted_sz_rate"] = rates["fitted_sz_rate"];
}

// --- dispersion: band curves, effective mass and sound speed ------------

void run_dispersion(const ExperimentSpec& spec, BundleWriter& bundle) {
  const std::vector<double> p_values = linspace(
      -spec.dispersion.p_max, spec.dispersion.p_max, spec.dispersion.n_p);

  CsvBuilder curves;
  bundle.csv_meta(curves);
  curves.header({"chiN", "theta", "p", "energy"});
  CsvBuilder table;
  bundle.csv_meta(table);
  table.header({"chiN", "theta", "m_eff_analytic", "m_eff_fit", "c_s",
                "linear_coeff", "curvature"});

  for (double chiN : spec.dispersion.chi_values) {
    for (double theta : spec.dispersion.thetas) {
      const DispersionCurve curve = dispersion(p_values, chiN, theta);
      for (std::size_t i = 0; i < p_values.size(); ++i)
        curves.row_values({chiN, theta, p_values[i], curve.energies[i]});
      table.row_values({chiN, theta, curve.effective_mass,
                        curve.fit_effective_mass, curve.c_s, curve.c1,
                        curve.c2});
      Json row;
      row["chiN"] = chiN;
      row["theta"] = theta;
      row["effective_mass"] = curve.effective_mass;
      row["c_s"] = curve.c_s;
      row["curvature"] = curve.c2;
      bundle.summary["bands"].push_back(row);
    }
  }
  bundle.add("dispersion_curves.csv", curves.str());
  bundle.add("dispersion_table.csv", table.str());
}

}  // namespace

std::string trajectory_csv(
    const Trajectory1D& traj, const MomentumEnsemble& ens,
    const std::vector<std::pair<std::string, std::string>>& meta) {
  CsvBuilder csv;
  csv.metadata("generator", kVersionString);
  for (const auto& [k, v] : meta) csv.metadata(k, v);
  csv.header({"t_tau", "p", "re_psi_down", "im_psi_down", "re_psi_up",
              "im_psi_up"});
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const SpinorField1D& f = traj.states[i];
    const double t_tau = natural_to_tau(traj.times[i]);
    for (std::size_t n = 0; n < f.size(); ++n)
      csv.row_values({t_tau, ens.p(n, 0), f.down[n].real(), f.down[n].imag(),
                      f.up[n].real(), f.up[n].imag()});
  }
  return csv.str();
}

std::string trajectory_csv_hd(
    const TrajectoryHD& traj, const MomentumEnsemble& ens,
    const std::vector<std::pair<std::string, std::string>>& meta) {
  CsvBuilder csv;
  csv.metadata("generator", kVersionString);
  for (const auto& [k, v] : meta) csv.metadata(k, v);
  std::vector<std::string> cols = {"t_tau", "p_x", "p_z"};
  if (traj.states.front().dimension == 3) cols.push_back("p_y");
  const int ncomp = traj.states.front().ncomp();
  static const char* comp_names[6] = {"down", "up_sym", "up_a1",
                                      "up_a2", "up_a3", "up_rest"};
  for (int c = 0; c < ncomp; ++c) {
    cols.push_back(std::string("re_") + comp_names[std::min(c, 5)]);
    cols.push_back(std::string("im_") + comp_names[std::min(c, 5)]);
  }
  csv.header(cols);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const SpinorFieldHD& f = traj.states[i];
    const double t_tau = natural_to_tau(traj.times[i]);
    for (std::size_t n = 0; n < f.npoints; ++n) {
      std::vector<double> cells = {t_tau, ens.p(n, 0), ens.p(n, 1)};
      if (f.dimension == 3) cells.push_back(ens.p(n, 2));
      for (int c = 0; c < ncomp; ++c) {
        cells.push_back(f.at(c, n).real());
        cells.push_back(f.at(c, n).imag());
      }
      csv.row_values(cells);
    }
  }
  return csv.str();
}

RunResult run_experiment(const ExperimentSpec& spec) {
  BundleWriter bundle(spec);
  if (spec.name == "fig2")
    run_fig2(spec, bundle);
  else if (spec.name == "fig3")
    run_fig3(spec, bundle);
  else if (spec.name == "fig4")
    run_fig4(spec, bundle);
  else if (spec.name == "detect")
    run_detect(spec, bundle);
  else if (spec.name == "dissipation")
    run_dissipation(spec, bundle);
  else if (spec.name == "dispersion")
    run_dispersion(spec, bundle);
  else
    throw ConfigError("unknown experiment '" + spec.name + "'");

  RunResult result;
  result.manifest_path = bundle.write_manifest();
  result.warnings = spec.warnings;
  return result;
}

}  // namespace solsim
