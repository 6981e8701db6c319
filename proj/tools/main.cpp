// Command-line frontend. Everything numerical happens behind the shared
// library's C API; this file only parses arguments, forwards them, and
// reports results.
#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "nscert/nscert.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 0;          // 0: leave config value
  long long seed = -1;      // <0: leave config value
};

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required = false) {
  cmd->add_option("--config", args.config_path, "configuration file")
      ->required();
  auto* out = cmd->add_option("--out", args.out_dir,
                              "output directory (overrides config 'out')");
  if (out_required) out->required();
  cmd->add_option("--threads", args.threads, "worker threads (recorded; the "
                                             "solver is deterministic)");
  cmd->add_option("--seed", args.seed, "seed for randomized test utilities");
}

class ConfigHandle {
 public:
  ~ConfigHandle() { nscert_config_destroy(config_); }

  bool load(const CommonArgs& args) {
    if (nscert_config_load(args.config_path.c_str(), &config_) != NSCERT_OK)
      return fail();
    if (args.threads > 0 &&
        nscert_config_set(config_, "threads",
                          std::to_string(args.threads).c_str()) != NSCERT_OK)
      return fail();
    if (args.seed >= 0 &&
        nscert_config_set(config_, "seed",
                          std::to_string(args.seed).c_str()) != NSCERT_OK)
      return fail();
    if (!args.out_dir.empty() &&
        nscert_config_set(config_, "out", args.out_dir.c_str()) != NSCERT_OK)
      return fail();
    return true;
  }

  std::string out_dir() const {
    char* echo = nullptr;
    std::string dir = "out";
    if (nscert_config_echo(config_, &echo) == NSCERT_OK) {
      const std::string text(echo);
      const std::string key = "out = ";
      const auto pos = text.find(key);
      if (pos != std::string::npos) {
        const auto end = text.find('\n', pos);
        dir = text.substr(pos + key.size(), end - pos - key.size());
      }
      nscert_string_free(echo);
    }
    return dir;
  }

  const nscert_config* get() const { return config_; }

 private:
  static bool fail() {
    std::fprintf(stderr, "error: %s\n", nscert_last_error());
    return false;
  }
  nscert_config* config_ = nullptr;
};

int report_failure() {
  std::fprintf(stderr, "error: %s\n", nscert_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nscert: linearized incompressible-flow solver on Taylor-Hood "
      "tetrahedral elements with an a-posteriori regularity certificate"};
  app.require_subcommand(1);

  CommonArgs run_args, certify_args, conv_args, project_args, info_args;
  int levels = 3;

  auto* cmd_run = app.add_subcommand("run", "advance one trajectory and write "
                                            "per-step diagnostics CSV");
  add_common(cmd_run, run_args);

  auto* cmd_certify = app.add_subcommand(
      "certify", "run and evaluate the regularity certificate");
  add_common(cmd_certify, certify_args);

  auto* cmd_conv = app.add_subcommand(
      "convergence",
      "interpolation / projection / manufactured-solution order studies");
  add_common(cmd_conv, conv_args);
  cmd_conv->add_option("--levels", levels, "number of nested meshes (>= 2)");

  auto* cmd_project = app.add_subcommand(
      "project", "Stokes Ritz projection of the catalog pair on the config "
                 "mesh");
  add_common(cmd_project, project_args);

  auto* cmd_info =
      app.add_subcommand("mesh-info", "mesh statistics (writes mesh.vtk when "
                                      "--out is given)");
  add_common(cmd_info, info_args);

  CLI11_PARSE(app, argc, argv);

  if (cmd_run->parsed()) {
    ConfigHandle config;
    if (!config.load(run_args)) return 1;
    if (nscert_run(config.get(), config.out_dir().c_str()) != NSCERT_OK)
      return report_failure();
    std::printf("run complete; diagnostics in %s/diagnostics.csv\n",
                config.out_dir().c_str());
    return 0;
  }

  if (cmd_certify->parsed()) {
    ConfigHandle config;
    if (!config.load(certify_args)) return 1;
    char* verdict = nullptr;
    if (nscert_certify(config.get(), config.out_dir().c_str(), &verdict) !=
        NSCERT_OK)
      return report_failure();
    std::printf("verdict: %s\ncertificate in %s/certificate.txt\n", verdict,
                config.out_dir().c_str());
    nscert_string_free(verdict);
    return 0;  // a negative verdict is a measurement, not a failure
  }

  if (cmd_conv->parsed()) {
    ConfigHandle config;
    if (!config.load(conv_args)) return 1;
    if (nscert_convergence(config.get(), config.out_dir().c_str(), levels) !=
        NSCERT_OK)
      return report_failure();
    std::printf("order tables in %s\n", config.out_dir().c_str());
    return 0;
  }

  if (cmd_project->parsed()) {
    ConfigHandle config;
    if (!config.load(project_args)) return 1;
    if (nscert_project(config.get(), config.out_dir().c_str()) != NSCERT_OK)
      return report_failure();
    std::printf("projection table in %s/projection_single.csv\n",
                config.out_dir().c_str());
    return 0;
  }

  if (cmd_info->parsed()) {
    ConfigHandle config;
    if (!config.load(info_args)) return 1;
    char* report = nullptr;
    const char* dir =
        info_args.out_dir.empty() ? nullptr : info_args.out_dir.c_str();
    if (nscert_mesh_info(config.get(), dir, &report) != NSCERT_OK)
      return report_failure();
    std::printf("%s", report);
    nscert_string_free(report);
    return 0;
  }

  return 1;
}
