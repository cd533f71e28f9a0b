#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ahm/classifier.hpp"
#include "ahm/evolution.hpp"
#include "ahm/imps.hpp"

namespace ahm {

struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  /// Inclusive grid lo, lo+step, ..., hi; empty when hi < lo.
  std::vector<double> values() const;
};

enum class DumpMode { None, LabeledPoints, All };

struct SweepConfig {
  double U = -4.0;
  std::vector<double> t_down_list = {0.1, 0.15, 0.3, 0.5, 0.7, 1.0};
  GridRange mu_grid{-6.0, 2.0, 0.25};
  GridRange dmu_grid{-4.0, 4.0, 0.25};
  int chi_max = 60;
  TrotterSchedule schedule = TrotterSchedule::defaults();
  int window = 100;  // correlation window M
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output_dir = "sweep-out";
  bool resume = false;
  DumpMode dump = DumpMode::None;
  ClassifierThresholds thresholds;
  bool warm_start = true;

  void validate() const;
  std::string to_json() const;
  static SweepConfig from_json(const std::string& text);
  static SweepConfig load(const std::string& path);
};

struct PointResult {
  double mu = 0.0;
  double dmu = 0.0;
  double t_down = 1.0;
  double U = 0.0;
  double n_up = 0.0;
  double n_dn = 0.0;
  double energy_density = 0.0;
  PhaseLabel label = PhaseLabel::Unclassified;
  Evidence evidence;
  int chi_used = 0;
  double max_discarded = 0.0;
  bool converged = false;
  bool failed = false;
  double wall_seconds = 0.0;

  std::string to_json() const;
  static PointResult from_json(const std::string& text);
};

/// Full pipeline for one grid point: ground state, densities, pairing and
/// density spectra, classification. Convergence failures yield a result
/// with failed = true and label UNCLASSIFIED instead of throwing.
PointResult run_point(const SweepConfig& config, double mu, double dmu,
                      double t_down,
                      const CanonicalIMPS* warm_start = nullptr,
                      CanonicalIMPS* state_out = nullptr);

struct SweepSummary {
  std::vector<PointResult> points;  // grid order: t_down, dmu, mu
  std::string output_dir;
};

/// Evaluates the whole campaign with a row-level worker pool (one row =
/// one dmu line swept along mu with warm starts), checkpointing each
/// completed point; resume skips completed points. Emits one table per
/// t_down panel, plot-ready grid files and a campaign manifest.
SweepSummary run_sweep(const SweepConfig& config);

/// (mu, dmu, label-code) grid files plus the label legend.
void emit_plot_data(const SweepSummary& summary);

void write_panel_table(std::ostream& os,
                       const std::vector<PointResult>& points);

}  // namespace ahm
