#include "solsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "solsim/errors.hpp"

namespace solsim {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "fig2", "fig3", "fig4", "detect", "dissipation", "dispersion"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (trim(value.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + value + "'");
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (trim(value.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": expected a list of numbers");
  return out;
}

using Setter = std::function<void(ExperimentSpec&, const std::string& key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> table = {
      {"experiment.name",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         const auto& names = experiment_names();
         if (std::find(names.begin(), names.end(), v) == names.end())
           throw ConfigError(k + ": unknown experiment '" + v + "'");
         s.name = v;
       }},
      {"experiment.output_dir",
       [](ExperimentSpec& s, const std::string&, const std::string& v) {
         s.output_dir = v;
       }},
      {"simulation.chiN",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.chiN = parse_double(k, v);
       }},
      {"simulation.sigma_p",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.sigma_p = parse_double(k, v);
       }},
      {"simulation.theta",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.theta = parse_double(k, v);
       }},
      {"simulation.n_momentum",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.n_momentum = static_cast<int>(parse_int(k, v));
       }},
      {"simulation.p_span",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.p_span = parse_double(k, v);
       }},
      {"simulation.dt",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.dt = parse_double(k, v);
       }},
      {"simulation.t_final",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.t_final = parse_double(k, v);
       }},
      {"simulation.dimension",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.dimension = static_cast<int>(parse_int(k, v));
       }},
      {"simulation.seed",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.seed = static_cast<std::uint64_t>(parse_int(k, v));
       }},
      {"simulation.ensemble",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         if (v == "grid")
           s.params.ensemble_mode = EnsembleMode::Grid;
         else if (v == "montecarlo")
           s.params.ensemble_mode = EnsembleMode::MonteCarlo;
         else
           throw ConfigError(k + ": expected 'grid' or 'montecarlo'");
       }},
      {"simulation.locked_analytics",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.params.locked_analytics = parse_bool(k, v);
       }},
      {"fig3.chi_start",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig3.chi_start = parse_double(k, v);
       }},
      {"fig3.chi_stop",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig3.chi_stop = parse_double(k, v);
       }},
      {"fig3.chi_points",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig3.chi_points = static_cast<int>(parse_int(k, v));
       }},
      {"fig3.thetas",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig3.thetas = parse_list(k, v);
       }},
      {"fig4.chi_values",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig4.chi_values = parse_list(k, v);
       }},
      {"fig4.n_momentum_2d",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig4.n_momentum_2d = static_cast<int>(parse_int(k, v));
       }},
      {"fig4.control_chiN",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig4.control_chiN = parse_double(k, v);
       }},
      {"fig4.control_sigma_p",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.fig4.control_sigma_p = parse_double(k, v);
       }},
      {"detect.echo",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.detect.echo = parse_bool(k, v);
       }},
      {"dissipation.gamma1",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dissipation.gamma1 = parse_double(k, v);
       }},
      {"dissipation.gamma2",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dissipation.gamma2 = parse_double(k, v);
       }},
      {"dissipation.n_atoms",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dissipation.n_atoms = parse_double(k, v);
       }},
      {"cavity.g",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.g = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"cavity.delta0",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.delta0 = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"cavity.kappa",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.kappa = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"cavity.alpha_sq_1",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.alpha_sq_1 = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"cavity.alpha_sq_2",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.alpha_sq_2 = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"cavity.delta1",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.delta1 = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"cavity.delta2",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.cavity.delta2 = parse_double(k, v);
         s.cavity_enabled = true;
       }},
      {"dispersion.chi_values",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dispersion.chi_values = parse_list(k, v);
       }},
      {"dispersion.thetas",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dispersion.thetas = parse_list(k, v);
       }},
      {"dispersion.p_max",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dispersion.p_max = parse_double(k, v);
       }},
      {"dispersion.n_p",
       [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.dispersion.n_p = static_cast<int>(parse_int(k, v));
       }},
  };
  return table;
}

}  // namespace

void apply_override(ExperimentSpec& spec, const std::string& key,
                    const std::string& value) {
  const auto it = schema().find(key);
  if (it == schema().end())
    throw ConfigError("unknown key '" + key + "'");
  it->second(spec, key, value);
  spec.explicit_keys.insert(key);
}

namespace {

ExperimentSpec parse_ini(const std::string& text,
                         const std::string& source_name) {
  ExperimentSpec spec;
  std::vector<std::string> errors;
  std::string section;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        errors.push_back(source_name + ":" + std::to_string(lineno) +
                         ": malformed section header '" + t + "'");
        continue;
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      errors.push_back(source_name + ":" + std::to_string(lineno) +
                       ": expected 'key = value', got '" + t + "'");
      continue;
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!value.empty() && value.front() == '"' && value.back() == '"' &&
        value.size() >= 2)
      value = value.substr(1, value.size() - 2);
    if (section.empty()) {
      errors.push_back(source_name + ":" + std::to_string(lineno) +
                       ": key '" + key + "' appears before any [section]");
      continue;
    }
    try {
      apply_override(spec, section + "." + key, value);
    } catch (const ConfigError& e) {
      errors.push_back(source_name + ":" + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
  if (!errors.empty()) {
    std::string all;
    for (const std::string& e : errors) {
      if (!all.empty()) all += '\n';
      all += e;
    }
    throw ConfigError(all);
  }
  return spec;
}

std::string json_scalar_to_string(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer())
    return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!joined.empty()) joined += ',';
      joined += json_scalar_to_string(item, key);
    }
    return joined;
  }
  throw ConfigError(key + ": unsupported JSON value type");
}

ExperimentSpec parse_json_config(const std::string& text,
                                 const std::string& source_name) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(source_name + ": JSON parse error: " + e.what());
  }
  // A result manifest embeds the originating config under "config".
  if (root.is_object() && root.contains("config") && root.contains("files"))
    root = root["config"];
  if (!root.is_object())
    throw ConfigError(source_name + ": top level must be an object");
  ExperimentSpec spec;
  std::vector<std::string> errors;
  for (const auto& [section, body] : root.items()) {
    if (!body.is_object()) {
      errors.push_back(source_name + ": section '" + section +
                       "' must be an object");
      continue;
    }
    for (const auto& [key, value] : body.items()) {
      try {
        apply_override(spec, section + "." + key,
                       json_scalar_to_string(value, section + "." + key));
      } catch (const ConfigError& e) {
        errors.push_back(source_name + ": " + e.what());
      }
    }
  }
  if (!errors.empty()) {
    std::string all;
    for (const std::string& e : errors) {
      if (!all.empty()) all += '\n';
      all += e;
    }
    throw ConfigError(all);
  }
  return spec;
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text,
                                 const std::string& source_name) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_json_config(text, source_name);
    break;
  }
  return parse_ini(text, source_name);
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path), path.filename().string());
}

void finalize_spec(ExperimentSpec& spec) {
  if (spec.name.empty())
    throw ConfigError("experiment.name: required (one of fig2, fig3, fig4, "
                      "detect, dissipation, dispersion)");
  if (spec.output_dir.empty()) spec.output_dir = "out/" + spec.name;

  if (spec.name == "fig4") {
    if (!spec.is_explicit("simulation.t_final")) spec.params.t_final = 100.0;
    if (!spec.is_explicit("simulation.dimension")) spec.params.dimension = 2;
    if (!spec.is_explicit("simulation.n_momentum"))
      spec.params.n_momentum = spec.fig4.n_momentum_2d;
  }
  if (spec.name == "fig3" || spec.name == "dispersion") {
    if (!spec.is_explicit("simulation.locked_analytics"))
      spec.params.locked_analytics = true;
  }

  spec.params.validate();
  if (spec.name == "fig3") {
    if (spec.fig3.chi_points < 2)
      throw ConfigError("fig3.chi_points: must be >= 2");
  }
  if (spec.name == "dispersion" && spec.dispersion.n_p < 5)
    throw ConfigError("dispersion.n_p: must be >= 5");
  if (spec.cavity_enabled) spec.cavity.validate();
  if (spec.dissipation.gamma1 < 0.0 || spec.dissipation.gamma2 < 0.0)
    throw ConfigError("dissipation.gamma: rates must be >= 0");

  spec.warnings = spec.params.warnings();
  if (spec.name == "fig3") {
    // The sweep relies on the locked-regime optimum per theta.
    for (double th : spec.fig3.thetas) {
      SimulationParams probe = spec.params;
      probe.chiN = chi_opt(th, 1.0);
      probe.locked_analytics = true;
      for (const std::string& w : probe.warnings())
        spec.warnings.push_back("fig3 theta=" + format_double(th) + ": " + w);
    }
  }
}

ExperimentSpec validate_config(const std::filesystem::path& path) {
  ExperimentSpec spec = load_config(path);
  finalize_spec(spec);
  return spec;
}

Json ExperimentSpec::to_json() const {
  Json j;
  j["experiment"]["name"] = name;
  j["experiment"]["output_dir"] = output_dir.generic_string();
  Json& sim = j["simulation"];
  sim["chiN"] = params.chiN;
  sim["sigma_p"] = params.sigma_p;
  sim["theta"] = params.theta;
  sim["n_momentum"] = params.n_momentum;
  sim["p_span"] = params.p_span;
  sim["dt"] = params.dt;
  sim["t_final"] = params.t_final;
  sim["dimension"] = params.dimension;
  sim["seed"] = params.seed;
  sim["ensemble"] =
      params.ensemble_mode == EnsembleMode::Grid ? "grid" : "montecarlo";
  sim["locked_analytics"] = params.locked_analytics;
  if (name == "fig3") {
    j["fig3"]["chi_start"] = fig3.chi_start;
    j["fig3"]["chi_stop"] = fig3.chi_stop;
    j["fig3"]["chi_points"] = fig3.chi_points;
    j["fig3"]["thetas"] = fig3.thetas;
  }
  if (name == "fig4") {
    j["fig4"]["chi_values"] = fig4.chi_values;
    j["fig4"]["n_momentum_2d"] = fig4.n_momentum_2d;
    j["fig4"]["control_chiN"] = fig4.control_chiN;
    j["fig4"]["control_sigma_p"] = fig4.control_sigma_p;
  }
  if (name == "detect") j["detect"]["echo"] = detect.echo;
  if (name == "dissipation") {
    j["dissipation"]["gamma1"] = dissipation.gamma1;
    j["dissipation"]["gamma2"] = dissipation.gamma2;
    j["dissipation"]["n_atoms"] = dissipation.n_atoms;
    if (cavity_enabled) {
      j["cavity"]["g"] = cavity.g;
      j["cavity"]["delta0"] = cavity.delta0;
      j["cavity"]["kappa"] = cavity.kappa;
      j["cavity"]["alpha_sq_1"] = cavity.alpha_sq_1;
      j["cavity"]["alpha_sq_2"] = cavity.alpha_sq_2;
      j["cavity"]["delta1"] = cavity.delta1;
      j["cavity"]["delta2"] = cavity.delta2;
    }
  }
  if (name == "dispersion") {
    j["dispersion"]["chi_values"] = dispersion.chi_values;
    j["dispersion"]["thetas"] = dispersion.thetas;
    j["dispersion"]["p_max"] = dispersion.p_max;
    j["dispersion"]["n_p"] = dispersion.n_p;
  }
  return j;
}

std::string ExperimentSpec::params_hash() const {
  // The hash characterizes the computation, not where it lands on disk;
  // identical specs into different directories produce identical bodies.
  Json j = to_json();
  j["experiment"].erase("output_dir");
  return fnv1a64_hex(j.dump());
}

}  // namespace solsim
