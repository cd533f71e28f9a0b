#include "ahm/evolution.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ahm {

TrotterSchedule TrotterSchedule::defaults() {
  TrotterSchedule s;
  for (double dt : {0.1, 0.05, 0.01, 0.005, 0.001})
    s.stages.push_back({dt, 20000, 1e-9, 1e-8});
  return s;
}

void TrotterSchedule::validate() const {
  if (stages.empty()) throw std::invalid_argument("empty schedule");
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& st : stages) {
    if (!(st.dt > 0.0) || !(st.dt < prev))
      throw std::invalid_argument("dt must be positive, strictly decreasing");
    if (!(st.tol_energy > 0.0) || !(st.tol_density > 0.0))
      throw std::invalid_argument("tolerances must be positive");
    if (st.max_sweeps < 1)
      throw std::invalid_argument("max_sweeps must be >= 1");
    prev = st.dt;
  }
}

std::vector<SweepLayer> fourth_order_layers(double dt) {
  const double p = 1.0 / (4.0 - std::cbrt(4.0));
  const double a = p * dt;
  const double b = (1.0 - 4.0 * p) * dt;
  return {
      {true, a / 2}, {false, a}, {true, a},           {false, a},
      {true, (a + b) / 2},       {false, b},          {true, (a + b) / 2},
      {false, a},    {true, a},  {false, a},          {true, a / 2},
  };
}

GateSet::GateSet(const HubbardParams& params) : params_(params) {
  params_.validate();
}

const BondOperator& GateSet::hamiltonian(EdgeFlags edges) {
  const auto key = std::make_pair(edges.left_open, edges.right_open);
  auto it = hams_.find(key);
  if (it == hams_.end())
    it = hams_.emplace(key, build_bond_hamiltonian(params_, edges)).first;
  return it->second;
}

const BondOperator& GateSet::gate(double tau, EdgeFlags edges) {
  const auto key = std::make_tuple(tau, edges.left_open, edges.right_open);
  auto it = gates_.find(key);
  if (it == gates_.end())
    it = gates_.emplace(key, build_gate(hamiltonian(edges), tau)).first;
  return it->second;
}

SweepStats fourth_order_sweep(CanonicalIMPS& state, GateSet& gates,
                              double dt) {
  SweepStats stats;
  for (const SweepLayer& layer : fourth_order_layers(dt)) {
    const UnitCellBond bond =
        layer.even ? UnitCellBond::AB : UnitCellBond::BA;
    stats.absorb(state.apply_two_site_gate(gates.gate(layer.tau), bond));
  }
  return stats;
}

SweepStats fourth_order_sweep(FiniteMPS& state, GateSet& gates, double dt) {
  SweepStats stats;
  const int L = state.size();
  for (const SweepLayer& layer : fourth_order_layers(dt)) {
    for (int b = layer.even ? 0 : 1; b + 1 < L; b += 2) {
      EdgeFlags edges{b == 0, b == L - 2};
      stats.absorb(state.apply_bond_gate(b, gates.gate(layer.tau, edges)));
    }
  }
  return stats;
}

double energy_density(const CanonicalIMPS& state,
                      const HubbardParams& params) {
  const BondOperator h = build_bond_hamiltonian(params);
  return 0.5 * (state.bond_expectation(h, UnitCellBond::AB) +
                state.bond_expectation(h, UnitCellBond::BA));
}

double chain_energy(FiniteMPS& state, const HubbardParams& params) {
  const int L = state.size();
  double total = 0.0;
  for (int b = 0; b + 1 < L; ++b) {
    EdgeFlags edges{b == 0, b == L - 2};
    total += state.bond_expectation(b, build_bond_hamiltonian(params, edges));
  }
  return total;
}

namespace {

struct Measurement {
  double energy_per_site;
  double n_up;
  double n_dn;
};

void check_finite(const Measurement& m, int stage, int sweep) {
  if (!std::isfinite(m.energy_per_site) || !std::isfinite(m.n_up) ||
      !std::isfinite(m.n_dn)) {
    std::ostringstream msg;
    msg << "evolution diverged at stage " << stage << ", sweep " << sweep;
    throw std::runtime_error(msg.str());
  }
}

// Shared stage loop: sweeps until both the energy-per-site and the density
// increments fall below the stage tolerances.
template <class State, class Sweep, class Measure>
void run_schedule(State& state, const TrotterSchedule& schedule, Sweep sweep_fn,
                  Measure measure_fn, std::vector<ConvergenceEntry>& log,
                  std::vector<StageOutcome>& outcomes, SweepStats& truncation,
                  bool& fully_converged) {
  schedule.validate();
  fully_converged = true;
  for (std::size_t is = 0; is < schedule.stages.size(); ++is) {
    const TrotterStage& stage = schedule.stages[is];
    Measurement prev = measure_fn(state);
    StageOutcome outcome{static_cast<int>(is), 0, false};
    for (int sweep = 1; sweep <= stage.max_sweeps; ++sweep) {
      const SweepStats stats = sweep_fn(state, stage.dt);
      truncation.absorb(stats);
      const Measurement cur = measure_fn(state);
      check_finite(cur, static_cast<int>(is), sweep);
      log.push_back({static_cast<int>(is), sweep, cur.energy_per_site,
                     cur.n_up, cur.n_dn, stats.max_discarded});
      outcome.sweeps_run = sweep;
      const double de = std::abs(cur.energy_per_site - prev.energy_per_site);
      const double dn = std::max(std::abs(cur.n_up - prev.n_up),
                                 std::abs(cur.n_dn - prev.n_dn));
      prev = cur;
      if (de < stage.tol_energy && dn < stage.tol_density) {
        outcome.converged = true;
        break;
      }
    }
    if (!outcome.converged) fully_converged = false;
    outcomes.push_back(outcome);
  }
}

}  // namespace

GroundStateResult find_ground_state(const HubbardParams& params,
                                    const TrotterSchedule& schedule,
                                    int chi_max, const InitOptions& init) {
  params.validate();
  GroundStateResult result;
  if (init.warm_start) {
    result.state = *init.warm_start;
    result.state.set_chi_max(chi_max);
  } else {
    result.state = CanonicalIMPS::product_state(chi_max, init.seed, init.bias);
  }

  GateSet gates(params);
  const LocalOperators& op = local_operators();
  auto measure = [&](const CanonicalIMPS& s) {
    return Measurement{energy_density(s, params),
                       s.local_expectation(op.n_up),
                       s.local_expectation(op.n_dn)};
  };
  auto sweep = [&](CanonicalIMPS& s, double dt) {
    return fourth_order_sweep(s, gates, dt);
  };
  run_schedule(result.state, schedule, sweep, measure, result.log,
               result.stage_outcomes, result.truncation,
               result.fully_converged);

  result.state.canonicalize();
  const Measurement m = measure(result.state);
  result.energy_density = m.energy_per_site;
  result.n_up = m.n_up;
  result.n_dn = m.n_dn;
  return result;
}

FiniteGroundStateResult finite_chain_ground_state(
    const HubbardParams& params, int sites, const TrotterSchedule& schedule,
    int chi_max, std::uint64_t seed) {
  params.validate();
  if (sites < 2 || sites > 12 || sites % 2 != 0)
    throw std::domain_error("chain length must be even, 2..12");

  FiniteGroundStateResult result;
  result.state = FiniteMPS::product_state(sites, chi_max, seed);

  GateSet gates(params);
  const LocalOperators& op = local_operators();
  auto measure = [&](FiniteMPS& s) {
    double nu = 0.0, nd = 0.0;
    for (int i = 0; i < sites; ++i) {
      nu += s.local_expectation(i, op.n_up);
      nd += s.local_expectation(i, op.n_dn);
    }
    return Measurement{chain_energy(s, params) / sites, nu / sites,
                       nd / sites};
  };
  auto sweep = [&](FiniteMPS& s, double dt) {
    return fourth_order_sweep(s, gates, dt);
  };
  run_schedule(result.state, schedule, sweep, measure, result.log,
               result.stage_outcomes, result.truncation,
               result.fully_converged);

  const Measurement m = measure(result.state);
  result.energy_per_site = m.energy_per_site;
  result.total_energy = m.energy_per_site * sites;
  result.n_up = m.n_up;
  result.n_dn = m.n_dn;
  return result;
}

void write_convergence_log(const std::vector<ConvergenceEntry>& log,
                           std::ostream& os) {
  os << "# ahm.convergence.v1\n";
  os << "stage\tsweep\tenergy\tn_up\tn_dn\tmax_discarded\n";
  os.precision(15);
  for (const auto& e : log)
    os << e.stage << '\t' << e.sweep << '\t' << e.energy << '\t' << e.n_up
       << '\t' << e.n_dn << '\t' << e.max_discarded << '\n';
}

}  // namespace ahm
