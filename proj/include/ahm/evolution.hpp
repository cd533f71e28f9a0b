#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ahm/finite_mps.hpp"
#include "ahm/imps.hpp"
#include "ahm/model.hpp"

namespace ahm {

struct TrotterStage {
  double dt = 0.1;
  int max_sweeps = 20000;
  double tol_energy = 1e-9;
  double tol_density = 1e-8;
};

struct TrotterSchedule {
  std::vector<TrotterStage> stages;

  /// dt in {0.1, 0.05, 0.01, 0.005, 0.001}, 20000 sweeps per stage,
  /// tolerances 1e-9 (energy per site) and 1e-8 (density).
  static TrotterSchedule defaults();

  /// Throws unless dt is strictly decreasing and tolerances positive.
  void validate() const;
};

/// One layer of the symmetric 4th-order splitting: which sublattice of
/// bonds it touches and the (possibly negative) imaginary-time substep.
struct SweepLayer {
  bool even = true;
  double tau = 0.0;
};

/// The 11 layers of S4(dt) = S2(p dt)^2 S2((1-4p) dt) S2(p dt)^2 with
/// p = 1/(4 - 4^(1/3)) and adjacent equal-parity half-steps merged.
std::vector<SweepLayer> fourth_order_layers(double dt);

/// Gate cache for one parameter set, keyed by (tau, edge flags).
class GateSet {
 public:
  explicit GateSet(const HubbardParams& params);
  const BondOperator& gate(double tau, EdgeFlags edges = {});
  const BondOperator& hamiltonian(EdgeFlags edges = {});
  const HubbardParams& params() const { return params_; }

 private:
  HubbardParams params_;
  std::map<std::tuple<double, bool, bool>, BondOperator> gates_;
  std::map<std::pair<bool, bool>, BondOperator> hams_;
};

/// One full 4th-order sweep over the unit cell (even layers hit the A-B
/// bond, odd layers B-A).
SweepStats fourth_order_sweep(CanonicalIMPS& state, GateSet& gates, double dt);

/// Same composition over all bonds of an open chain, with edge-weighted
/// gates on the first and last bond.
SweepStats fourth_order_sweep(FiniteMPS& state, GateSet& gates, double dt);

/// Per-site energy: average of the two unit-cell bond expectations.
double energy_density(const CanonicalIMPS& state, const HubbardParams& params);

/// Total energy of the open chain (sum over edge-weighted bonds).
double chain_energy(FiniteMPS& state, const HubbardParams& params);

struct ConvergenceEntry {
  int stage = 0;
  int sweep = 0;
  double energy = 0.0;  // per site
  double n_up = 0.0;
  double n_dn = 0.0;
  double max_discarded = 0.0;
};

struct StageOutcome {
  int stage = 0;
  int sweeps_run = 0;
  bool converged = false;
};

struct GroundStateResult {
  CanonicalIMPS state;
  double energy_density = 0.0;
  double n_up = 0.0;
  double n_dn = 0.0;
  std::vector<ConvergenceEntry> log;
  std::vector<StageOutcome> stage_outcomes;
  SweepStats truncation;
  bool fully_converged = false;
};

struct InitOptions {
  std::uint64_t seed = 1;
  std::optional<std::pair<double, double>> bias;
  std::optional<CanonicalIMPS> warm_start;
};

/// Imaginary-time ground-state search on the infinite lattice. Throws
/// std::runtime_error (with stage and sweep index) on divergence.
GroundStateResult find_ground_state(const HubbardParams& params,
                                    const TrotterSchedule& schedule,
                                    int chi_max, const InitOptions& init = {});

struct FiniteGroundStateResult {
  FiniteMPS state = FiniteMPS::product_state(2, 1, 0, {{0.0, 0.0}});
  double total_energy = 0.0;
  double energy_per_site = 0.0;
  double n_up = 0.0;
  double n_dn = 0.0;
  std::vector<ConvergenceEntry> log;
  std::vector<StageOutcome> stage_outcomes;
  SweepStats truncation;
  bool fully_converged = false;
};

/// Same machinery on an open chain of L sites (L even, 2..12); exact and
/// comparable to the ED oracle once chi_max >= 4^(L/2).
FiniteGroundStateResult finite_chain_ground_state(
    const HubbardParams& params, int sites, const TrotterSchedule& schedule,
    int chi_max, std::uint64_t seed = 1);

/// Convergence log as delimited text (stage, sweep, energy, densities,
/// discarded weight).
void write_convergence_log(const std::vector<ConvergenceEntry>& log,
                           std::ostream& os);

}  // namespace ahm
