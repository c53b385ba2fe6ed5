// Command-line front end. Links only the C API.
#include <cstdio>
#include <deque>
#include <string>

#include <CLI11.hpp>

#include "hillwave/hillwave.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Invocation {
  CLI::App* app = nullptr;
  std::string command;
  std::string config;
  std::string out_dir;
};

Invocation& add_run(std::deque<Invocation>& all, CLI::App& parent, const std::string& name, const std::string& command,
                    const std::string& help) {
  Invocation& inv = all.emplace_back();
  inv.command = command;
  inv.app = parent.add_subcommand(name, help);
  inv.app->add_option("-c,--config", inv.config, "JSON run configuration")->check(CLI::ExistingFile);
  inv.app->add_option("-o,--out", inv.out_dir, "output directory (default: config output_dir)");
  return inv;
}

int run(const Invocation& inv) {
  hw_config* cfg = nullptr;
  hw_status st = hw_config_load(inv.config.c_str(), &cfg);
  if (st != HW_OK) {
    std::fprintf(stderr, "hillwave: %s: %s\n", hw_status_name(st), hw_last_error());
    return st == HW_ERR_CONFIG || st == HW_ERR_INVALID_ARGUMENT ? kExitConfig : kExitFailure;
  }
  hw_result* res = nullptr;
  st = hw_run(cfg, inv.command.c_str(), inv.out_dir.empty() ? nullptr : inv.out_dir.c_str(), &res);
  hw_config_destroy(cfg);
  if (st != HW_OK) {
    std::fprintf(stderr, "hillwave %s: %s: %s\n", inv.command.c_str(), hw_status_name(st), hw_last_error());
    return st == HW_ERR_CONFIG ? kExitConfig : kExitFailure;
  }
  std::printf("%s\n", hw_result_summary(res));
  for (size_t i = 0; i < hw_result_file_count(res); ++i) std::fprintf(stderr, "wrote %s\n", hw_result_file(res, i));
  hw_result_destroy(res);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric resonance and wave-map blow-up experiments"};
  app.set_version_flag("--version", hw_version());
  app.require_subcommand(1);

  std::deque<Invocation> runs;
  add_run(runs, app, "scan", "scan", "Floquet trace scan over lambda (scan.csv, intervals.json)");
  add_run(runs, app, "geodesic", "geodesic", "trace a geodesic of the target (geodesic.csv)");
  add_run(runs, app, "evolve", "evolve", "direct nonlinear wave-map evolution (evolve.csv)");
  add_run(runs, app, "growth", "growth", "resonant L^q growth at integer times (growth.csv)");
  add_run(runs, app, "demo", "demo", "end-to-end blow-up construction (report.json)");
  add_run(runs, app, "crossval", "crossval", "nonlinear evolver vs. linear reduction (crossval.csv)");

  // Grouped spellings: floquet scan, geodesic trace, wavemap evolve, resonance growth|demo|crossval.
  CLI::App* floquet = app.add_subcommand("floquet", "Floquet analysis");
  add_run(runs, *floquet, "scan", "scan", "same as `scan`");
  CLI::App* geodesic = runs[1].app;
  add_run(runs, *geodesic, "trace", "geodesic", "same as `geodesic`");
  CLI::App* wavemap = app.add_subcommand("wavemap", "wave-map evolution");
  add_run(runs, *wavemap, "evolve", "evolve", "same as `evolve`");
  CLI::App* resonance = app.add_subcommand("resonance", "resonance pipeline");
  add_run(runs, *resonance, "growth", "growth", "same as `growth`");
  add_run(runs, *resonance, "demo", "demo", "same as `demo`");
  add_run(runs, *resonance, "crossval", "crossval", "same as `crossval`");
  for (CLI::App* group : {floquet, wavemap, resonance}) group->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  for (const Invocation& inv : runs) {
    if (!inv.app->parsed() || inv.config.empty()) continue;
    return run(inv);
  }
  std::fprintf(stderr, "hillwave: --config is required\n");
  return kExitConfig;
}
