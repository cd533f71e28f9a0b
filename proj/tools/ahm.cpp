#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ahm/evolution.hpp"
#include "ahm/observables.hpp"
#include "ahm/sweep.hpp"
#include "ahm/verify.hpp"
#include "ahm/version.hpp"

namespace fs = std::filesystem;
using namespace ahm;

namespace {

struct CommonFlags {
  std::string config_path;
  SweepConfig config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--U", config.U, "on-site interaction");
    cmd->add_option("--chi", config.chi_max, "bond dimension cap");
    cmd->add_option("--M", config.window, "correlation window");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--workers", config.workers, "parallel workers");
    cmd->add_option("--output-dir", config.output_dir, "output directory");
  }

  // config file first, then explicit flags override, then environment
  SweepConfig resolve(CLI::App* cmd) {
    SweepConfig out;
    if (!config_path.empty()) out = SweepConfig::load(config_path);
    auto override_if = [&](const char* flag, auto member) {
      if (cmd->count(flag)) out.*member = config.*member;
    };
    override_if("--U", &SweepConfig::U);
    override_if("--chi", &SweepConfig::chi_max);
    override_if("--M", &SweepConfig::window);
    override_if("--seed", &SweepConfig::seed);
    override_if("--workers", &SweepConfig::workers);
    override_if("--output-dir", &SweepConfig::output_dir);
    if (const char* dir = std::getenv("AHM_OUTPUT_DIR")) out.output_dir = dir;
    if (const char* threads = std::getenv("AHM_THREADS"))
      out.workers = std::max(1, std::atoi(threads));
    return out;
  }
};

int cmd_point(const SweepConfig& config, double t_down, double mu, double dmu) {
  const PointResult r = run_point(config, mu, dmu, t_down);
  std::cout << r.to_json() << '\n';
  return r.failed ? 1 : 0;
}

int cmd_spectra(const SweepConfig& config,
                const std::vector<std::string>& point_specs) {
  fs::create_directories(config.output_dir);
  for (const std::string& spec : point_specs) {
    double t_down, mu, dmu;
    if (std::sscanf(spec.c_str(), "%lf,%lf,%lf", &t_down, &mu, &dmu) != 3) {
      std::cerr << "bad --point (expected t_down,mu,dmu): " << spec << '\n';
      return 2;
    }
    HubbardParams params{1.0, t_down, config.U, mu, dmu};
    GroundStateResult gs = find_ground_state(
        params, config.schedule, config.chi_max, InitOptions{config.seed});
    char tag[96];
    std::snprintf(tag, sizeof(tag), "t%.10g_m%.10g_d%.10g", t_down, mu, dmu);

    struct Entry {
      CorrelationSeries series;
    };
    std::vector<CorrelationSeries> all;
    all.push_back(pairing_correlation(gs.state, config.window));
    all.push_back(density_correlation(gs.state, config.window));
    all.push_back(one_body_correlation(gs.state, Species::Up, config.window));
    all.push_back(one_body_correlation(gs.state, Species::Dn, config.window));
    for (const auto& series : all) {
      const std::string base =
          config.output_dir + "/" + tag + "_" + kind_name(series.kind);
      std::ofstream rs(base + "_r.tsv");
      write_series(rs, series, params, config.chi_max);
      std::ofstream ks(base + "_k.tsv");
      write_spectrum(ks, cosine_transform(series), kind_name(series.kind),
                     params, config.chi_max, config.window);
    }
    std::cout << tag << ": E/site=" << gs.energy_density
              << " n_up=" << gs.n_up << " n_dn=" << gs.n_dn << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state phase mapper for the 1D asymmetric Hubbard "
               "model (imaginary-time iTEBD)"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // point
  auto* point = app.add_subcommand("point", "evaluate one (mu, dmu) point");
  CommonFlags point_flags;
  point_flags.attach(point);
  double t_down = 1.0, mu = 0.0, dmu = 0.0;
  point->add_option("--t-down", t_down, "down-species hopping")->required();
  point->add_option("--mu", mu, "chemical potential")->required();
  point->add_option("--dmu", dmu, "effective magnetic field")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a phase-diagram campaign");
  CommonFlags sweep_flags;
  sweep_flags.attach(sweep);
  bool resume = false;
  sweep->add_flag("--resume", resume, "skip completed checkpoint points");
  std::vector<double> t_list;
  sweep->add_option("--t-down-list", t_list, "panel hoppings");
  std::vector<double> mu_range, dmu_range;
  sweep->add_option("--mu-range", mu_range, "lo hi step")->expected(3);
  sweep->add_option("--dmu-range", dmu_range, "lo hi step")->expected(3);

  // spectra
  auto* spectra = app.add_subcommand(
      "spectra", "dump correlation spectra for explicit points");
  CommonFlags spectra_flags;
  spectra_flags.attach(spectra);
  std::vector<std::string> point_specs;
  spectra->add_option("--point", point_specs, "t_down,mu,dmu (repeatable)")
      ->required();

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the oracle-backed acceptance checks");
  std::vector<int> criteria;
  verify_cmd->add_option("--criteria", criteria,
                         "criterion ids (default: quick set 1,2,3,4,7)");
  std::string verify_scratch = "verify-out";
  verify_cmd->add_option("--output-dir", verify_scratch, "scratch directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*point) return cmd_point(point_flags.resolve(point), t_down, mu, dmu);
    if (*sweep) {
      SweepConfig config = sweep_flags.resolve(sweep);
      if (sweep->count("--resume")) config.resume = resume;
      if (!t_list.empty()) config.t_down_list = t_list;
      if (mu_range.size() == 3)
        config.mu_grid = {mu_range[0], mu_range[1], mu_range[2]};
      if (dmu_range.size() == 3)
        config.dmu_grid = {dmu_range[0], dmu_range[1], dmu_range[2]};
      const SweepSummary summary = run_sweep(config);
      std::cout << "points: " << summary.points.size()
                << "\noutput: " << summary.output_dir << '\n';
      return 0;
    }
    if (*spectra) return cmd_spectra(spectra_flags.resolve(spectra), point_specs);
    if (*verify_cmd) {
      if (criteria.empty()) criteria = {1, 2, 3, 4, 7};
      verify::Options options;
      options.scratch_dir = verify_scratch;
      if (const char* dir = std::getenv("AHM_OUTPUT_DIR"))
        options.scratch_dir = dir;
      if (const char* threads = std::getenv("AHM_THREADS"))
        options.threads = std::max(1, std::atoi(threads));
      bool all_pass = true;
      for (int id : criteria) {
        const verify::CriterionResult r = verify::run_criterion(id, options);
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id
                  << ": " << r.name << " — " << r.details << '\n';
        all_pass = all_pass && r.passed;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
