#include <cstdio>

#include <CLI11.hpp>

#include "speclab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"speclab: numerical laboratory for spectral multipliers of generalized Laplacians"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "execute the suites described by a config file");
  run->add_option("config", config_path, "path to the run configuration")->required();
  auto* ls =
      app.add_subcommand("list-suites", "print suite names, anchors and default tolerances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ls->parsed()) {
      std::fputs(speclab::list_suites_text().c_str(), stdout);
      return 0;
    }
    const auto cfg = speclab::parse_config(config_path);
    std::fputs("# resolved configuration\n", stdout);
    std::fputs(speclab::render_config(cfg).c_str(), stdout);
    const auto res = speclab::run_experiment(cfg);
    size_t passed = 0;
    for (const auto& r : res.rows) passed += r.pass ? 1 : 0;
    std::printf("\n%zu/%zu checks passed; outputs in %s/\n", passed, res.rows.size(),
                cfg.output_dir.c_str());
    return res.exit_code;
  } catch (const speclab::config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const speclab::numeric_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 1;
  }
}
