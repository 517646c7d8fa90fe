// Command-line driver for the dispersive-PDE laboratory.
//
//   dlab run <config> --out <dir>              run one experiment
//   dlab validate <config>                     check a config, print errors
//   dlab sweep "<glob>" --out <dir> [-j N]     run every matching config
//   dlab inspect <snapshot>                    describe a binary snapshot
//
// Exit codes: 0 success, 1 validation/input error, 2 runtime abort.
// DLAB_WORKERS sets the default sweep worker count.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dlab/config.hpp"
#include "dlab/lab.hpp"

namespace {

int load_config(const std::string& path, dlab::config::ExperimentConfig& cfg) {
  const auto text = dlab::lab::slurp(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return 1;
  }
  const dlab::config::ParseResult pr = dlab::config::parse_config(*text);
  if (!pr.ok()) {
    for (const auto& e : pr.errors)
      std::cerr << path << ":" << e.line << ": " << e.message << "\n";
    return 1;
  }
  cfg = *pr.config;
  return 0;
}

int cmd_run(const std::string& path, const std::string& out_dir) {
  dlab::config::ExperimentConfig cfg;
  if (int rc = load_config(path, cfg); rc != 0) return rc;
  const dlab::lab::RunOutcome oc = dlab::lab::run(cfg, out_dir);
  if (oc.status == 0) {
    std::cout << "wrote " << oc.records << " records to " << out_dir << "\n";
  } else {
    std::cerr << "error: " << oc.message << " (t = " << oc.t_reached << ")\n";
  }
  return oc.status;
}

int cmd_validate(const std::string& path) {
  dlab::config::ExperimentConfig cfg;
  if (int rc = load_config(path, cfg); rc != 0) return rc;
  std::cout << "OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral laboratory for dispersive PDEs"};
  app.require_subcommand(1);

  std::string config_path, out_dir, pattern, snapshot_path;
  int workers = dlab::lab::default_workers();

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory")->required();

  CLI::App* validate =
      app.add_subcommand("validate", "validate a config without running it");
  validate->add_option("config", config_path, "experiment config file")
      ->required();

  CLI::App* sweep =
      app.add_subcommand("sweep", "run every config matching a glob pattern");
  sweep->add_option("pattern", pattern, "config glob pattern (quote it)")
      ->required();
  sweep->add_option("--out", out_dir, "root output directory")->required();
  sweep->add_option("--workers,-j", workers, "parallel workers");

  CLI::App* inspect =
      app.add_subcommand("inspect", "describe a binary field snapshot");
  inspect->add_option("snapshot", snapshot_path, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (app.got_subcommand(run)) return cmd_run(config_path, out_dir);
  if (app.got_subcommand(validate)) return cmd_validate(config_path);
  if (app.got_subcommand(sweep))
    return dlab::lab::sweep(pattern, out_dir, workers, std::cout);
  if (app.got_subcommand(inspect))
    return dlab::lab::inspect(snapshot_path, std::cout);
  return 1;
}
