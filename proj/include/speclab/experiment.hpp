#pragma once

#include <map>
#include <string>
#include <vector>

#include "speclab/mesh.hpp"

namespace speclab {

/// Fully resolved run description. Every numeric default can be overridden
/// from the [tolerances] section; unknown keys are rejected at parse time.
struct ExperimentConfig {
  // [domain]
  int dim = 1;
  double length_x = 3.14159265358979323846;
  double length_y = 3.14159265358979323846;
  int n = 201;

  // [operator]
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double a_const = 1.0;
  std::string potential = "none";  // none | const:c | step:amp,x0,x1 | sine:amp,freq
  double scale = 1.0;

  // [symbols] / [suites]
  std::vector<std::string> symbols;  // empty: all builtins
  std::vector<std::string> suites;   // empty: all suites

  // [output]
  std::string output_dir = "out";
  unsigned seed = 12345;

  // [tolerances]
  double eig_rel_tol = 1e-10;
  double ortho_tol = 1e-9;
  double scaling_tol = 1e-12;
  double wave_order_tol = 0.2;
  double energy_tol = 1e-3;
  double dg_slack = 1.05;
  double cone_leapfrog_tol = 1e-8;
  double cone_spectral_tol = 1e-6;
  double commutator_slack = 2.0;  // bound = speed (1 + slack h r/t)
  double gronwall_slack = 0.05;
  double resolvent_decay = 0.1;
  double kappa_lo = 0.0;          // kappa_hat > kappa_lo
  double r2_min = 0.98;
  double prefactor_tol = 0.1;
  double prefactor_grad_tol = 0.15;
  double slope_tol = 0.15;
  double subordination_tol = 1e-6;
  double route_tol = 1e-5;
  double recon_tol = 1e-5;
  double flat_path_tol = 1e-7;
  double support_tol = 1e-6;
  double psi_stability = 0.05;
  double keylemma_epsilon = 0.05;
  int keylemma_levels = 6;
  double keylemma_trend = 1.25;
  double bmo_epsilon = 0.1;
  double bmo_ratio_cap = 10.0;
  double p2_tol = 1e-10;
  int trials = 64;
  int quad_steps = 4096;
  bool dump_kernels = false;
};

/// Parses the plain-text section/key=value format. Throws config_error with
/// a line reference on unknown keys or malformed values.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

/// One pass/fail line of the run summary.
struct SummaryRow {
  std::string suite;
  std::string check;
  std::string criterion;  // AC1..AC15 where applicable, "-" otherwise
  std::string anchor;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunResult {
  std::vector<SummaryRow> rows;
  int exit_code = 0;
};

/// Executes the configured suites, writes per-suite CSV files plus
/// summary.csv and resolved.cfg under output_dir, and returns the rows.
/// Exit code: 0 all checks pass, 1 numeric failure, 2 configuration error.
RunResult run_experiment(const ExperimentConfig& cfg);

std::string list_suites_text();
std::vector<std::string> all_suite_names();

std::string render_config(const ExperimentConfig& cfg);

}  // namespace speclab
