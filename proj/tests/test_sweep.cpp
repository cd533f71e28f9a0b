#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ahm/sweep.hpp"

using namespace ahm;
namespace fs = std::filesystem;

namespace {

SweepConfig tiny_config(const std::string& out_dir) {
  SweepConfig c;
  c.U = -4.0;
  c.t_down_list = {1.0};
  c.mu_grid = {-2.5, -1.5, 1.0};  // 2 points
  c.dmu_grid = {0.0, 1.0, 1.0};   // 2 points
  c.chi_max = 8;
  c.schedule.stages = {{0.1, 120, 1e-8, 1e-7}, {0.05, 80, 1e-8, 1e-7}};
  c.window = 40;
  c.seed = 11;
  c.output_dir = out_dir;
  return c;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("grid ranges") {
  GridRange g{-1.0, 1.0, 0.5};
  const auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == doctest::Approx(-1.0));
  CHECK(v.back() == doctest::Approx(1.0));

  GridRange empty{1.0, -1.0, 0.5};
  CHECK(empty.values().empty());

  GridRange bad{0.0, 1.0, 0.0};
  CHECK_THROWS_AS(bad.values(), std::invalid_argument);
}

TEST_CASE("config JSON round-trip") {
  SweepConfig c = tiny_config("somewhere");
  c.dump = DumpMode::LabeledPoints;
  c.thresholds.min_prominence = 0.07;
  c.workers = 3;
  SweepConfig back = SweepConfig::from_json(c.to_json());
  CHECK(back.U == c.U);
  CHECK(back.t_down_list == c.t_down_list);
  CHECK(back.mu_grid.lo == c.mu_grid.lo);
  CHECK(back.mu_grid.step == c.mu_grid.step);
  CHECK(back.chi_max == c.chi_max);
  CHECK(back.schedule.stages.size() == c.schedule.stages.size());
  CHECK(back.schedule.stages[0].dt == c.schedule.stages[0].dt);
  CHECK(back.window == c.window);
  CHECK(back.seed == c.seed);
  CHECK(back.workers == c.workers);
  CHECK(back.output_dir == c.output_dir);
  CHECK(back.dump == c.dump);
  CHECK(back.thresholds.min_prominence == c.thresholds.min_prominence);
}

TEST_CASE("point result JSON round-trip is lossless") {
  PointResult r;
  r.mu = -1.9000000000000004;
  r.dmu = 1.1;
  r.t_down = 0.15;
  r.U = -4.0;
  r.n_up = 0.5452106315789;
  r.n_dn = 0.5452106315788;
  r.energy_density = -2.4871320001e-1;
  r.label = PhaseLabel::BalancedCdwDominant;
  r.evidence.k_p_predicted = 3.0e-13;
  r.evidence.k_p_measured = 0.0;
  r.evidence.p_peak_height = 1.25;
  r.evidence.p_prominence = 0.31;
  r.evidence.d_peak_k = 2.8274333882308138;
  r.evidence.d_peak_height = 0.9;
  r.chi_used = 60;
  r.max_discarded = 4.2e-9;
  r.converged = true;
  r.wall_seconds = 12.75;
  PointResult back = PointResult::from_json(r.to_json());
  CHECK(back.mu == r.mu);
  CHECK(back.n_up == r.n_up);
  CHECK(back.energy_density == r.energy_density);
  CHECK(back.label == r.label);
  CHECK(back.evidence.d_peak_k == r.evidence.d_peak_k);
  CHECK(back.max_discarded == r.max_discarded);
  CHECK(back.converged == r.converged);
  CHECK(back.failed == r.failed);
}

TEST_CASE("run_point labels a far-below-band point as vacuum") {
  SweepConfig c = tiny_config("unused");
  PointResult r = run_point(c, -10.0, 0.0, 1.0);
  CHECK_FALSE(r.failed);
  CHECK(r.label == PhaseLabel::NormalVacuum);
  CHECK(std::abs(r.n_up) < 1e-3);
}

TEST_CASE("campaigns are deterministic and resumable") {
  TempDir run_a("ahm_sweep_a");
  SweepConfig config = tiny_config((run_a.path / "out").string());
  const SweepSummary summary = run_sweep(config);
  REQUIRE(summary.points.size() == 4);
  const std::string table_a = slurp(run_a.path / "out" / "panel_tdown_1.tsv");

  SUBCASE("identical config and seed give byte-identical tables") {
    TempDir run_b("ahm_sweep_b");
    SweepConfig cfg_b = config;
    cfg_b.output_dir = (run_b.path / "out").string();
    run_sweep(cfg_b);
    CHECK(slurp(run_b.path / "out" / "panel_tdown_1.tsv") == table_a);
  }

  SUBCASE("worker count does not change the output") {
    TempDir run_c("ahm_sweep_c");
    SweepConfig cfg_c = config;
    cfg_c.output_dir = (run_c.path / "out").string();
    cfg_c.workers = 3;
    run_sweep(cfg_c);
    CHECK(slurp(run_c.path / "out" / "panel_tdown_1.tsv") == table_a);
  }

  SUBCASE("resume from a truncated checkpoint reproduces the table") {
    TempDir run_d("ahm_sweep_d");
    SweepConfig cfg_d = config;
    cfg_d.output_dir = (run_d.path / "out").string();
    fs::create_directories(run_d.path / "out" / "states");

    // replay the first half of the finished campaign's checkpoint
    std::ifstream full_log(fs::path(config.output_dir) / "checkpoint.jsonl");
    std::ofstream half_log(run_d.path / "out" / "checkpoint.jsonl");
    std::string line;
    int kept = 0;
    while (kept < 2 && std::getline(full_log, line)) {
      half_log << line << '\n';
      ++kept;
    }
    half_log.close();
    for (const auto& entry :
         fs::directory_iterator(fs::path(config.output_dir) / "states"))
      fs::copy(entry.path(),
               run_d.path / "out" / "states" / entry.path().filename());

    cfg_d.resume = true;
    run_sweep(cfg_d);
    CHECK(slurp(run_d.path / "out" / "panel_tdown_1.tsv") == table_a);
  }

  SUBCASE("manifest and plot artifacts") {
    CHECK(fs::exists(run_a.path / "out" / "manifest.json"));
    CHECK(fs::exists(run_a.path / "out" / "plot" / "legend.tsv"));
    const std::string legend = slurp(run_a.path / "out" / "plot" / "legend.tsv");
    CHECK(legend.find("FFLO") != std::string::npos);
    CHECK(legend.find("UNCLASSIFIED") != std::string::npos);
    CHECK(fs::exists(run_a.path / "out" / "plot" / "panel_tdown_1_grid.tsv"));
  }
}

TEST_CASE("empty grid produces a manifest and an empty table") {
  TempDir dir("ahm_sweep_empty");
  SweepConfig c = tiny_config((dir.path / "out").string());
  c.mu_grid = {1.0, -1.0, 0.5};  // empty
  const SweepSummary summary = run_sweep(c);
  CHECK(summary.points.empty());
  CHECK(fs::exists(dir.path / "out" / "manifest.json"));
  const std::string table = slurp(dir.path / "out" / "panel_tdown_1.tsv");
  CHECK(table.find("# ahm.panel.v1") == 0);
}

TEST_CASE("unwritable output directory aborts before computing") {
  SweepConfig c = tiny_config("/proc/ahm_cannot_write_here/out");
  CHECK_THROWS(run_sweep(c));
}
