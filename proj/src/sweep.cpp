#include "ahm/sweep.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ahm/observables.hpp"
#include "ahm/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ahm {
namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string point_key(double t_down, double dmu, double mu) {
  return "t" + fmt_g(t_down) + "_d" + fmt_g(dmu) + "_m" + fmt_g(mu);
}

std::uint64_t mix_seed(std::uint64_t seed, double t_down, double dmu,
                       double mu) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = seed;
  h = mix(h, std::bit_cast<std::uint64_t>(t_down));
  h = mix(h, std::bit_cast<std::uint64_t>(dmu));
  h = mix(h, std::bit_cast<std::uint64_t>(mu));
  return h;
}

json schedule_to_json(const TrotterSchedule& s) {
  json stages = json::array();
  for (const auto& st : s.stages)
    stages.push_back({{"dt", st.dt},
                      {"max_sweeps", st.max_sweeps},
                      {"tol_energy", st.tol_energy},
                      {"tol_density", st.tol_density}});
  return stages;
}

TrotterSchedule schedule_from_json(const json& j) {
  TrotterSchedule s;
  s.stages.clear();
  for (const auto& st : j)
    s.stages.push_back({st.at("dt").get<double>(),
                        st.at("max_sweeps").get<int>(),
                        st.at("tol_energy").get<double>(),
                        st.at("tol_density").get<double>()});
  return s;
}

std::string dump_mode_name(DumpMode m) {
  switch (m) {
    case DumpMode::None: return "none";
    case DumpMode::LabeledPoints: return "labeled-points";
    case DumpMode::All: return "all";
  }
  return "none";
}

DumpMode dump_mode_from_name(const std::string& name) {
  if (name == "none") return DumpMode::None;
  if (name == "labeled-points") return DumpMode::LabeledPoints;
  if (name == "all") return DumpMode::All;
  throw std::invalid_argument("unknown dump mode: " + name);
}

}  // namespace

std::vector<double> GridRange::values() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

void SweepConfig::validate() const {
  if (!(mu_grid.step > 0.0) || !(dmu_grid.step > 0.0))
    throw std::invalid_argument("grid steps must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  schedule.validate();
  thresholds.validate();
}

std::string SweepConfig::to_json() const {
  json j;
  j["U"] = U;
  j["t_down_list"] = t_down_list;
  j["mu_grid"] = {{"lo", mu_grid.lo}, {"hi", mu_grid.hi}, {"step", mu_grid.step}};
  j["dmu_grid"] = {{"lo", dmu_grid.lo}, {"hi", dmu_grid.hi}, {"step", dmu_grid.step}};
  j["chi_max"] = chi_max;
  j["schedule"] = schedule_to_json(schedule);
  j["M"] = window;
  j["seed"] = seed;
  j["workers"] = workers;
  j["output_dir"] = output_dir;
  j["resume"] = resume;
  j["dump_correlations"] = dump_mode_name(dump);
  j["thresholds"] = {{"eps_density", thresholds.eps_density},
                     {"eps_polarization", thresholds.eps_polarization},
                     {"k_tolerance", thresholds.k_tolerance},
                     {"min_prominence", thresholds.min_prominence}};
  j["warm_start"] = warm_start;
  return j.dump(2);
}

SweepConfig SweepConfig::from_json(const std::string& text) {
  const json j = json::parse(text);
  SweepConfig c;
  if (j.contains("U")) c.U = j["U"].get<double>();
  if (j.contains("t_down_list"))
    c.t_down_list = j["t_down_list"].get<std::vector<double>>();
  auto grid = [&](const char* name, GridRange& g) {
    if (!j.contains(name)) return;
    g.lo = j[name].at("lo").get<double>();
    g.hi = j[name].at("hi").get<double>();
    g.step = j[name].at("step").get<double>();
  };
  grid("mu_grid", c.mu_grid);
  grid("dmu_grid", c.dmu_grid);
  if (j.contains("chi_max")) c.chi_max = j["chi_max"].get<int>();
  if (j.contains("schedule")) c.schedule = schedule_from_json(j["schedule"]);
  if (j.contains("M")) c.window = j["M"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) c.workers = j["workers"].get<int>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("resume")) c.resume = j["resume"].get<bool>();
  if (j.contains("dump_correlations"))
    c.dump = dump_mode_from_name(j["dump_correlations"].get<std::string>());
  if (j.contains("thresholds")) {
    const json& t = j["thresholds"];
    if (t.contains("eps_density"))
      c.thresholds.eps_density = t["eps_density"].get<double>();
    if (t.contains("eps_polarization"))
      c.thresholds.eps_polarization = t["eps_polarization"].get<double>();
    if (t.contains("k_tolerance"))
      c.thresholds.k_tolerance = t["k_tolerance"].get<double>();
    if (t.contains("min_prominence"))
      c.thresholds.min_prominence = t["min_prominence"].get<double>();
  }
  if (j.contains("warm_start")) c.warm_start = j["warm_start"].get<bool>();
  return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

std::string PointResult::to_json() const {
  json j;
  j["mu"] = mu;
  j["dmu"] = dmu;
  j["t_down"] = t_down;
  j["U"] = U;
  j["n_up"] = n_up;
  j["n_dn"] = n_dn;
  j["energy_density"] = energy_density;
  j["label"] = label_name(label);
  j["evidence"] = {{"k_p_predicted", evidence.k_p_predicted},
                   {"k_p_measured", evidence.k_p_measured},
                   {"p_peak_height", evidence.p_peak_height},
                   {"p_prominence", evidence.p_prominence},
                   {"d_peak_k", evidence.d_peak_k},
                   {"d_peak_height", evidence.d_peak_height}};
  j["chi_used"] = chi_used;
  j["max_discarded"] = max_discarded;
  j["converged"] = converged;
  j["failed"] = failed;
  j["wall_seconds"] = wall_seconds;
  return j.dump();
}

PointResult PointResult::from_json(const std::string& text) {
  const json j = json::parse(text);
  PointResult r;
  r.mu = j.at("mu").get<double>();
  r.dmu = j.at("dmu").get<double>();
  r.t_down = j.at("t_down").get<double>();
  r.U = j.at("U").get<double>();
  r.n_up = j.at("n_up").get<double>();
  r.n_dn = j.at("n_dn").get<double>();
  r.energy_density = j.at("energy_density").get<double>();
  r.label = label_from_name(j.at("label").get<std::string>());
  const json& e = j.at("evidence");
  r.evidence.n_up = r.n_up;
  r.evidence.n_dn = r.n_dn;
  r.evidence.k_p_predicted = e.at("k_p_predicted").get<double>();
  r.evidence.k_p_measured = e.at("k_p_measured").get<double>();
  r.evidence.p_peak_height = e.at("p_peak_height").get<double>();
  r.evidence.p_prominence = e.at("p_prominence").get<double>();
  r.evidence.d_peak_k = e.at("d_peak_k").get<double>();
  r.evidence.d_peak_height = e.at("d_peak_height").get<double>();
  r.chi_used = j.at("chi_used").get<int>();
  r.max_discarded = j.at("max_discarded").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.failed = j.at("failed").get<bool>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

PointResult run_point(const SweepConfig& config, double mu, double dmu,
                      double t_down, const CanonicalIMPS* warm_start,
                      CanonicalIMPS* state_out) {
  PointResult r;
  r.mu = mu;
  r.dmu = dmu;
  r.t_down = t_down;
  r.U = config.U;
  const auto start = std::chrono::steady_clock::now();
  try {
    HubbardParams params{1.0, t_down, config.U, mu, dmu};
    InitOptions init;
    init.seed = mix_seed(config.seed, t_down, dmu, mu);
    if (warm_start) init.warm_start = *warm_start;
    GroundStateResult gs =
        find_ground_state(params, config.schedule, config.chi_max, init);

    r.n_up = gs.n_up;
    r.n_dn = gs.n_dn;
    r.energy_density = gs.energy_density;
    r.chi_used = gs.truncation.max_chi;
    r.max_discarded = gs.truncation.max_discarded;
    r.converged = gs.fully_converged;

    const Spectrum p_k =
        cosine_transform(pairing_correlation(gs.state, config.window));
    const Spectrum d_k =
        cosine_transform(density_correlation(gs.state, config.window));
    Classification cls =
        classify(gs.n_up, gs.n_dn, p_k, d_k, config.thresholds);
    r.label = cls.label;
    r.evidence = cls.evidence;

    if (state_out) *state_out = std::move(gs.state);
  } catch (const std::exception& err) {
    r.failed = true;
    r.label = PhaseLabel::Unclassified;
    std::cerr << "point " << point_key(t_down, dmu, mu)
              << " failed: " << err.what() << '\n';
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return r;
}

void write_panel_table(std::ostream& os,
                       const std::vector<PointResult>& points) {
  os << "# ahm.panel.v1\n";
  os << "mu\tdmu\tt_down\tU\tn_up\tn_dn\tenergy_density\tlabel\t"
        "k_p_predicted\tk_p_measured\tp_peak_height\td_peak_height\t"
        "chi_used\tmax_discarded\tstatus\n";
  os.precision(12);
  for (const auto& p : points) {
    os << p.mu << '\t' << p.dmu << '\t' << p.t_down << '\t' << p.U << '\t'
       << p.n_up << '\t' << p.n_dn << '\t' << p.energy_density << '\t'
       << label_name(p.label) << '\t' << p.evidence.k_p_predicted << '\t'
       << p.evidence.k_p_measured << '\t' << p.evidence.p_peak_height << '\t'
       << p.evidence.d_peak_height << '\t' << p.chi_used << '\t'
       << p.max_discarded << '\t'
       << (p.failed ? "failed" : (p.converged ? "ok" : "exhausted")) << '\n';
  }
}

namespace {

struct CheckpointLog {
  std::map<std::string, PointResult> completed;

  static CheckpointLog load(const fs::path& path) {
    CheckpointLog log;
    std::ifstream is(path);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        log.completed[j.at("key").get<std::string>()] =
            PointResult::from_json(j.at("result").dump());
      } catch (const std::exception&) {
        // partial trailing line from an interrupted run
      }
    }
    return log;
  }
};

void dump_point_correlations(const SweepConfig& config,
                             const HubbardParams& params,
                             const CanonicalIMPS& state,
                             const std::string& key) {
  const fs::path dir = fs::path(config.output_dir) / "dumps";
  fs::create_directories(dir);
  const CorrelationSeries p_r = pairing_correlation(state, config.window);
  const CorrelationSeries d_r = density_correlation(state, config.window);
  for (const auto* series : {&p_r, &d_r}) {
    std::ofstream rs(dir / (key + "_" + kind_name(series->kind) + "_r.tsv"));
    write_series(rs, *series, params, config.chi_max);
    std::ofstream ks(dir / (key + "_" + kind_name(series->kind) + "_k.tsv"));
    write_spectrum(ks, cosine_transform(*series), kind_name(series->kind),
                   params, config.chi_max, config.window);
  }
}

}  // namespace

SweepSummary run_sweep(const SweepConfig& config) {
  config.validate();

  const fs::path out_dir(config.output_dir);
  const fs::path state_dir = out_dir / "states";
  fs::create_directories(state_dir);

  // fail before computing anything if the output directory is unusable
  {
    std::ofstream probe(out_dir / "manifest.json");
    if (!probe) throw std::runtime_error("output directory not writable: " +
                                         config.output_dir);
    json manifest;
    manifest["schema"] = "ahm.manifest.v1";
    manifest["version"] = kVersion;
    manifest["config"] = json::parse(config.to_json());
    manifest["points"] = json::array();
    probe << manifest.dump(2) << '\n';
  }

  const fs::path log_path = out_dir / "checkpoint.jsonl";
  CheckpointLog checkpoint;
  if (config.resume && fs::exists(log_path))
    checkpoint = CheckpointLog::load(log_path);
  else
    std::ofstream(log_path, std::ios::trunc);

  const std::vector<double> mu_values = config.mu_grid.values();
  const std::vector<double> dmu_values = config.dmu_grid.values();

  struct Row {
    double t_down;
    double dmu;
  };
  std::vector<Row> rows;
  for (double t : config.t_down_list)
    for (double dmu : dmu_values) rows.push_back({t, dmu});

  std::map<std::string, PointResult> results;
  for (const auto& [key, result] : checkpoint.completed) results[key] = result;

  std::mutex io_mutex;
  std::ofstream log_stream(log_path, std::ios::app);
  std::atomic<std::size_t> next_row{0};

  auto commit_point = [&](const std::string& key, const PointResult& r,
                          const HubbardParams& params,
                          const CanonicalIMPS* state) {
    std::lock_guard<std::mutex> lock(io_mutex);
    if (state) save_checkpoint(*state, params, (state_dir / (key + ".imps")).string());
    json line;
    line["key"] = key;
    line["result"] = json::parse(r.to_json());
    log_stream << line.dump() << '\n';
    log_stream.flush();
    results[key] = r;
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next_row.fetch_add(1);
      if (idx >= rows.size()) return;
      const Row row = rows[idx];

      std::optional<CanonicalIMPS> warm;
      for (double mu : mu_values) {
        const std::string key = point_key(row.t_down, row.dmu, mu);
        bool have = false;
        {
          std::lock_guard<std::mutex> lock(io_mutex);
          have = results.count(key) > 0;
        }
        const HubbardParams params{1.0, row.t_down, config.U, mu, row.dmu};
        if (have) {
          // reuse the stored state so the rest of the row warm-starts
          // exactly as in the uninterrupted run
          const fs::path state_path = state_dir / (key + ".imps");
          if (config.warm_start && fs::exists(state_path))
            warm = load_checkpoint(state_path.string()).state;
          continue;
        }
        CanonicalIMPS state;
        PointResult r = run_point(config, mu, row.dmu, row.t_down,
                                  (config.warm_start && warm) ? &*warm : nullptr,
                                  &state);
        const bool dump_this =
            config.dump == DumpMode::All ||
            (config.dump == DumpMode::LabeledPoints && !r.failed &&
             r.label != PhaseLabel::Unclassified);
        if (!r.failed) {
          commit_point(key, r, params, &state);
          if (dump_this) dump_point_correlations(config, params, state, key);
          if (config.warm_start) warm = std::move(state);
        } else {
          commit_point(key, r, params, nullptr);
        }
      }
      {
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << "row done: t_down=" << fmt_g(row.t_down)
                  << " dmu=" << fmt_g(row.dmu) << " (" << (idx + 1) << "/"
                  << rows.size() << ")\n";
      }
    }
  };

  if (config.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < config.workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // deterministic merge in grid order
  SweepSummary summary;
  summary.output_dir = config.output_dir;
  for (double t : config.t_down_list) {
    std::vector<PointResult> panel;
    for (double dmu : dmu_values)
      for (double mu : mu_values) {
        auto it = results.find(point_key(t, dmu, mu));
        if (it != results.end()) panel.push_back(it->second);
      }
    std::ofstream table(out_dir / ("panel_tdown_" + fmt_g(t) + ".tsv"));
    write_panel_table(table, panel);
    summary.points.insert(summary.points.end(), panel.begin(), panel.end());
  }

  json manifest;
  manifest["schema"] = "ahm.manifest.v1";
  manifest["version"] = kVersion;
  manifest["config"] = json::parse(config.to_json());
  json points = json::array();
  for (const auto& p : summary.points)
    points.push_back({{"t_down", p.t_down},
                      {"dmu", p.dmu},
                      {"mu", p.mu},
                      {"status", p.failed ? "failed"
                                          : (p.converged ? "ok" : "exhausted")},
                      {"label", label_name(p.label)}});
  manifest["points"] = points;
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';

  emit_plot_data(summary);
  return summary;
}

void emit_plot_data(const SweepSummary& summary) {
  const fs::path dir = fs::path(summary.output_dir) / "plot";
  fs::create_directories(dir);

  std::map<double, std::vector<const PointResult*>> panels;
  for (const auto& p : summary.points) panels[p.t_down].push_back(&p);

  for (const auto& [t, points] : panels) {
    std::ofstream os(dir / ("panel_tdown_" + fmt_g(t) + "_grid.tsv"));
    os << "# ahm.grid.v1 t_down=" << fmt_g(t) << '\n';
    os << "mu\tdmu\tlabel_code\n";
    os.precision(12);
    for (const auto* p : points)
      os << p->mu << '\t' << p->dmu << '\t' << label_code(p->label) << '\n';
  }

  std::ofstream legend(dir / "legend.tsv");
  legend << "# ahm.legend.v1\n";
  legend << "label_code\tlabel\n";
  for (int i = 0; i <= static_cast<int>(PhaseLabel::Unclassified); ++i)
    legend << i << '\t' << label_name(static_cast<PhaseLabel>(i)) << '\n';
}

}  // namespace ahm
