// simulate: run a scenario file and write per-run traces plus summary.csv.

#include "mcsim/scenario/config.hpp"
#include "mcsim/scenario/experiment.hpp"
#include "mcsim/sim/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace mcsim;

int
main (int argc, char** argv)
{
  CLI::App app{"Multi-connectivity mmWave/LTE stack simulator"};
  std::string configPath;
  std::string outDir = "out";
  std::string variant;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<double> duration;
  unsigned threads = 0;
  bool listVariants = false;
  app.add_option ("--config", configPath, "scenario file (JSON)")->required ()->check (CLI::ExistingFile);
  app.add_option ("--seed", seed, "master seed; run k uses seed + k");
  app.add_option ("--runs", runs, "number of independent runs");
  app.add_option ("--duration", duration, "simulated seconds per run");
  app.add_option ("--out-dir", outDir, "directory for traces and summary.csv");
  app.add_option ("--variant", variant, "run only this matrix variant");
  app.add_option ("--threads", threads, "worker threads (0: all cores)");
  app.add_flag ("--list-variants", listVariants, "print the variants of the file and exit");
  CLI11_PARSE (app, argc, argv);

  std::vector<scenario::ScenarioVariant> variants;
  try
    {
      variants = scenario::parse_config_variants (configPath);
    }
  catch (const ConfigError& e)
    {
      std::cerr << "invalid configuration " << configPath << ":\n";
      for (const auto& v : e.violations ())
        {
          std::cerr << "  - " << v << '\n';
        }
      return 2;
    }

  if (listVariants)
    {
      for (const auto& v : variants)
        {
          std::cout << v.name << '\n';
        }
      return 0;
    }
  if (!variant.empty ())
    {
      std::erase_if (variants, [&] (const auto& v) { return v.name != variant; });
      if (variants.empty ())
        {
          std::cerr << "no variant named '" << variant << "' in " << configPath << '\n';
          return 2;
        }
    }

  const bool nested = variants.size () > 1;
  for (auto& v : variants)
    {
      auto& cfg = v.config;
      if (seed)
        {
          cfg.master_seed = *seed;
          std::erase_if (cfg.warnings, [] (const std::string& w) { return w.starts_with ("master_seed"); });
        }
      if (runs)
        {
          cfg.n_runs = *runs;
        }
      if (duration)
        {
          cfg.duration_s = *duration;
        }
      const auto violations = scenario::validate (cfg);
      if (!violations.empty ())
        {
          std::cerr << "invalid configuration " << v.name << " after overrides:\n";
          for (const auto& msg : violations)
            {
              std::cerr << "  - " << msg << '\n';
            }
          return 2;
        }
      for (const auto& w : cfg.warnings)
        {
          std::cerr << "warning: " << w << '\n';
        }
      const std::string dir = nested ? (std::filesystem::path (outDir) / v.name).string () : outDir;
      try
        {
          const auto result = scenario::run_experiment (cfg, dir, threads);
          std::cout << v.name << " -> " << dir << '\n';
          for (const auto& row : result.summary)
            {
              std::cout << "  " << row.metric << " = " << row.mean;
              if (row.ci95)
                {
                  std::cout << " +/- " << *row.ci95;
                }
              std::cout << ' ' << row.unit << '\n';
            }
        }
      catch (const std::exception& e)
        {
          std::cerr << "run failed: " << e.what () << '\n';
          return 1;
        }
    }
  return 0;
}
