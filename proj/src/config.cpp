#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "speclab/experiment.hpp"
#include "speclab/symbols.hpp"

namespace speclab {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error(where + ": expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error(where + ": expected an integer, got '" + v + "'");
  }
}

}  // namespace

std::vector<std::string> all_suite_names() {
  return {"eig",        "heat-fit", "norm-fits",  "wave", "dg",  "cone",
          "commutator", "resolvent-limit", "multiplier", "keylemma", "bmo", "lp"};
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error(where + ": malformed section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section != "domain" && section != "operator" && section != "symbols" &&
          section != "suites" && section != "tolerances" && section != "output")
        throw config_error(where + ": unknown section [" + section + "]");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw config_error(where + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty()) throw config_error(where + ": key outside any section");

    if (section == "domain") {
      if (key == "dim") cfg.dim = parse_int(val, where);
      else if (key == "length") cfg.length_x = cfg.length_y = parse_double(val, where);
      else if (key == "length_x") cfg.length_x = parse_double(val, where);
      else if (key == "length_y") cfg.length_y = parse_double(val, where);
      else if (key == "n") cfg.n = parse_int(val, where);
      else throw config_error(where + ": unknown key '" + key + "' in [domain]");
    } else if (section == "operator") {
      if (key == "bc") {
        const std::string b = lower(val);
        if (b == "dirichlet") cfg.bc = BoundaryCondition::Dirichlet;
        else if (b == "neumann") cfg.bc = BoundaryCondition::Neumann;
        else throw config_error(where + ": bc must be dirichlet or neumann");
      } else if (key == "a") cfg.a_const = parse_double(val, where);
      else if (key == "potential") cfg.potential = lower(val);
      else if (key == "scale") cfg.scale = parse_double(val, where);
      else throw config_error(where + ": unknown key '" + key + "' in [operator]");
    } else if (section == "symbols") {
      if (key == "names") cfg.symbols = split_list(lower(val));
      else throw config_error(where + ": unknown key '" + key + "' in [symbols]");
    } else if (section == "suites") {
      if (key == "run") cfg.suites = split_list(lower(val));
      else throw config_error(where + ": unknown key '" + key + "' in [suites]");
    } else if (section == "output") {
      if (key == "dir") cfg.output_dir = val;
      else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_int(val, where));
      else throw config_error(where + ": unknown key '" + key + "' in [output]");
    } else {  // tolerances
      struct DoubleKey { const char* name; double* slot; };
      struct IntKey { const char* name; int* slot; };
      const DoubleKey dkeys[] = {
          {"eig_rel_tol", &cfg.eig_rel_tol},
          {"ortho_tol", &cfg.ortho_tol},
          {"scaling_tol", &cfg.scaling_tol},
          {"wave_order_tol", &cfg.wave_order_tol},
          {"energy_tol", &cfg.energy_tol},
          {"dg_slack", &cfg.dg_slack},
          {"cone_leapfrog_tol", &cfg.cone_leapfrog_tol},
          {"cone_spectral_tol", &cfg.cone_spectral_tol},
          {"commutator_slack", &cfg.commutator_slack},
          {"gronwall_slack", &cfg.gronwall_slack},
          {"resolvent_decay", &cfg.resolvent_decay},
          {"kappa_lo", &cfg.kappa_lo},
          {"r2_min", &cfg.r2_min},
          {"prefactor_tol", &cfg.prefactor_tol},
          {"prefactor_grad_tol", &cfg.prefactor_grad_tol},
          {"slope_tol", &cfg.slope_tol},
          {"subordination_tol", &cfg.subordination_tol},
          {"route_tol", &cfg.route_tol},
          {"recon_tol", &cfg.recon_tol},
          {"flat_path_tol", &cfg.flat_path_tol},
          {"support_tol", &cfg.support_tol},
          {"psi_stability", &cfg.psi_stability},
          {"keylemma_epsilon", &cfg.keylemma_epsilon},
          {"keylemma_trend", &cfg.keylemma_trend},
          {"bmo_epsilon", &cfg.bmo_epsilon},
          {"bmo_ratio_cap", &cfg.bmo_ratio_cap},
          {"p2_tol", &cfg.p2_tol},
      };
      const IntKey ikeys[] = {
          {"keylemma_levels", &cfg.keylemma_levels},
          {"trials", &cfg.trials},
          {"quad_steps", &cfg.quad_steps},
      };
      bool matched = false;
      for (const auto& dk : dkeys)
        if (key == dk.name) {
          *dk.slot = parse_double(val, where);
          matched = true;
          break;
        }
      if (!matched)
        for (const auto& ik : ikeys)
          if (key == ik.name) {
            *ik.slot = parse_int(val, where);
            matched = true;
            break;
          }
      if (!matched && key == "dump_kernels") {
        cfg.dump_kernels = lower(val) == "true" || val == "1";
        matched = true;
      }
      if (!matched)
        throw config_error(where + ": unknown key '" + key + "' in [tolerances]");
    }
  }

  // Resolve defaults and validate cross-field constraints.
  if (cfg.dim != 1 && cfg.dim != 2) throw config_error(origin + ": dim must be 1 or 2");
  if (cfg.n < 8) throw config_error(origin + ": n must be at least 8");
  if (cfg.symbols.empty())
    for (const auto& s : builtin_symbols()) cfg.symbols.push_back(s.name);
  else {
    const auto known = builtin_symbols();
    for (const auto& name : cfg.symbols) find_symbol(known, name);
  }
  if (cfg.suites.empty()) cfg.suites = all_suite_names();
  else {
    const auto known = all_suite_names();
    for (const auto& s : cfg.suites)
      if (std::find(known.begin(), known.end(), s) == known.end())
        throw config_error(origin + ": unknown suite '" + s + "'");
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string render_config(const ExperimentConfig& cfg) {
  char buf[256];
  std::string out;
  auto kv = [&](const char* k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
  auto kd = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    kv(k, buf);
  };
  auto ki = [&](const char* k, long v) { kv(k, std::to_string(v)); };

  out += "[domain]\n";
  ki("dim", cfg.dim);
  kd("length_x", cfg.length_x);
  kd("length_y", cfg.length_y);
  ki("n", cfg.n);
  out += "\n[operator]\n";
  kv("bc", cfg.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann");
  kd("a", cfg.a_const);
  kv("potential", cfg.potential);
  kd("scale", cfg.scale);
  out += "\n[symbols]\n";
  {
    std::string names;
    for (const auto& s : cfg.symbols) names += (names.empty() ? "" : ",") + s;
    kv("names", names);
  }
  out += "\n[suites]\n";
  {
    std::string names;
    for (const auto& s : cfg.suites) names += (names.empty() ? "" : ",") + s;
    kv("run", names);
  }
  out += "\n[output]\n";
  kv("dir", cfg.output_dir);
  ki("seed", cfg.seed);
  out += "\n[tolerances]\n";
  kd("eig_rel_tol", cfg.eig_rel_tol);
  kd("ortho_tol", cfg.ortho_tol);
  kd("scaling_tol", cfg.scaling_tol);
  kd("wave_order_tol", cfg.wave_order_tol);
  kd("energy_tol", cfg.energy_tol);
  kd("dg_slack", cfg.dg_slack);
  kd("cone_leapfrog_tol", cfg.cone_leapfrog_tol);
  kd("cone_spectral_tol", cfg.cone_spectral_tol);
  kd("commutator_slack", cfg.commutator_slack);
  kd("gronwall_slack", cfg.gronwall_slack);
  kd("resolvent_decay", cfg.resolvent_decay);
  kd("kappa_lo", cfg.kappa_lo);
  kd("r2_min", cfg.r2_min);
  kd("prefactor_tol", cfg.prefactor_tol);
  kd("prefactor_grad_tol", cfg.prefactor_grad_tol);
  kd("slope_tol", cfg.slope_tol);
  kd("subordination_tol", cfg.subordination_tol);
  kd("route_tol", cfg.route_tol);
  kd("recon_tol", cfg.recon_tol);
  kd("flat_path_tol", cfg.flat_path_tol);
  kd("support_tol", cfg.support_tol);
  kd("psi_stability", cfg.psi_stability);
  kd("keylemma_epsilon", cfg.keylemma_epsilon);
  ki("keylemma_levels", cfg.keylemma_levels);
  kd("keylemma_trend", cfg.keylemma_trend);
  kd("bmo_epsilon", cfg.bmo_epsilon);
  kd("bmo_ratio_cap", cfg.bmo_ratio_cap);
  kd("p2_tol", cfg.p2_tol);
  ki("trials", cfg.trials);
  ki("quad_steps", cfg.quad_steps);
  kv("dump_kernels", cfg.dump_kernels ? "true" : "false");
  return out;
}

}  // namespace speclab
