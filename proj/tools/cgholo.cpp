#include <iostream>

#include "CLI11.hpp"
#include "cgholo/jobs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for conformal geodesics and their asymptotic harmonic maps"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute the jobs of a config file");
  std::string config_path, out_dir;
  bool plots = false;
  int ladder_depth = 10;
  unsigned seed = 0;
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--plots", plots, "write SVG plots");
  run->add_option("--ladder-depth", ladder_depth, "deepest dyadic rung s = 2^-K");
  run->add_option("--seed", seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    cgholo::RunOptions opts;
    opts.plots = plots;
    opts.ladder_max_k = ladder_depth;
    opts.seed = seed;
    cgholo::RunResult res = cgholo::run_config_file(config_path, out_dir, opts);
    for (const auto& c : res.claims)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.job << "/" << c.name
                << " value=" << c.value << " threshold=" << c.threshold << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
