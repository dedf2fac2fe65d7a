#include "spinet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "spinet/constants.hpp"
#include "spinet/exact_oracle.hpp"

namespace spinet {

const char* observable_name(SweepObservable o) {
  switch (o) {
    case SweepObservable::Pt: return "pt";
    case SweepObservable::Ps: return "ps";
    case SweepObservable::Kt: return "kt";
    case SweepObservable::Ks: return "ks";
    case SweepObservable::Pts: return "pts";
    case SweepObservable::PtsMax: return "pts_max";
    case SweepObservable::B0Scan: return "b0_scan";
  }
  return "?";
}

std::optional<SweepObservable> observable_from_name(const std::string& name) {
  for (SweepObservable o :
       {SweepObservable::Pt, SweepObservable::Ps, SweepObservable::Kt,
        SweepObservable::Ks, SweepObservable::Pts, SweepObservable::PtsMax,
        SweepObservable::B0Scan})
    if (name == observable_name(o)) return o;
  return std::nullopt;
}

std::vector<double> AxisSpec::values() const {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < count; ++i)
    v[i] = start + (stop - start) * i / static_cast<double>(count - 1);
  return v;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

bool consumes_time_axis(SweepObservable o) {
  return o == SweepObservable::PtsMax || o == SweepObservable::B0Scan;
}

bool is_rate(SweepObservable o) {
  return o == SweepObservable::Kt || o == SweepObservable::Ks;
}

void validate_spec(const SweepSpec& spec) {
  for (const AxisSpec* a : {&spec.time, &spec.theta, &spec.B0, &spec.temperature}) {
    if (a->count < 1) throw ParamError("grid counts must be at least 1");
    if (a->count > 1 && !(a->stop >= a->start))
      throw ParamError("grid ranges must be ordered (stop >= start)");
  }
  if (spec.workers < 1) throw ParamError("workers must be at least 1");
  if (is_rate(spec.observable) && spec.time.count > 1)
    throw ParamError("rate observables take at most a single observation time");
  if (consumes_time_axis(spec.observable) && spec.time.count < 2)
    throw ParamError("max-over-time observables need a time grid (count >= 2)");
  if (spec.observable == SweepObservable::B0Scan && spec.B0.count < 2)
    throw ParamError("b0_scan needs a B0 grid (count >= 2)");
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec_in, const ModelParams& base) {
  SweepSpec spec = spec_in;
  // axes not explicitly swept pin to the base parameter point
  if (!spec.theta.explicitly_set) spec.theta = {base.theta, base.theta, 1, false};
  if (!spec.B0.explicitly_set) spec.B0 = {base.B0, base.B0, 1, false};
  if (!spec.temperature.explicitly_set)
    spec.temperature = {base.temperature, base.temperature, 1, false};
  validate_spec(spec);
  const std::vector<double> thetas = spec.theta.values();
  const std::vector<double> times = spec.time.values();
  const std::vector<double> fields = spec.B0.values();
  const std::vector<double> temps = spec.temperature.values();

  const bool consume_t = consumes_time_axis(spec.observable);
  const size_t n_time_rows = consume_t ? 1 : times.size();
  const size_t total_rows =
      thetas.size() * n_time_rows * fields.size() * temps.size();

  SweepResult result;
  result.rows.assign(total_rows, SweepRow{});

  // one work unit per (theta, B0, T); the time axis is evaluated inside
  struct Group {
    size_t i_theta, i_field, i_temp;
  };
  std::vector<Group> groups;
  for (size_t a = 0; a < thetas.size(); ++a)
    for (size_t b = 0; b < fields.size(); ++b)
      for (size_t c = 0; c < temps.size(); ++c) groups.push_back({a, b, c});

  auto row_index = [&](size_t i_theta, size_t i_time, size_t i_field,
                       size_t i_temp) {
    return ((i_theta * n_time_rows + i_time) * fields.size() + i_field) *
               temps.size() +
           i_temp;
  };

  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mu;

  auto worker = [&] {
    for (;;) {
      const size_t gi = cursor.fetch_add(1);
      if (gi >= groups.size() || failed.load()) break;
      const Group g = groups[gi];
      try {
        ModelParams p = base;
        p.theta = thetas[g.i_theta];
        p.B0 = fields[g.i_field];
        p.temperature = temps[g.i_temp];
        if (p.phonon_cutoff_auto) p.phonon_cutoff = ModelParams::kAutoCutoff;
        p = validate_params(p);
        PerturbationEngine engine(p);

        auto put = [&](size_t i_time, double t_col, double value,
                       std::string flags) {
          SweepRow& row = result.rows[row_index(g.i_theta, i_time, g.i_field,
                                                g.i_temp)];
          row.theta = p.theta;
          row.time = t_col;
          row.B0 = p.B0;
          row.temperature = p.temperature;
          row.value = value;
          if (p.cutoff_cap_bound)
            flags = flags.empty() ? "cap" : flags + ";cap";
          row.flags = std::move(flags);
        };

        switch (spec.observable) {
          case SweepObservable::Pt:
          case SweepObservable::Ps: {
            const InitialState s = (spec.observable == SweepObservable::Pt)
                                       ? InitialState::Triplet
                                       : InitialState::Singlet;
            for (size_t it = 0; it < times.size(); ++it) {
              const double v =
                  engine.reaction_probability(s, times[it], spec.final_sector);
              put(it, times[it], v, v > 0.5 ? "unreliable" : "");
            }
            break;
          }
          case SweepObservable::Kt:
          case SweepObservable::Ks: {
            const InitialState s = (spec.observable == SweepObservable::Kt)
                                       ? InitialState::Triplet
                                       : InitialState::Singlet;
            const RateResult r = engine.reaction_rate(s);
            const double t_obs = times[0];
            const bool shaky = t_obs > 0.0 && r.rate * t_obs > 0.3;
            put(0, times[0], r.rate, shaky ? "unreliable" : "");
            break;
          }
          case SweepObservable::Pts: {
            const std::vector<double> series =
                engine.triplet_to_singlet_series(times);
            for (size_t it = 0; it < times.size(); ++it)
              put(it, times[it], series[it],
                  series[it] > 0.5 ? "unreliable" : "");
            break;
          }
          case SweepObservable::PtsMax:
          case SweepObservable::B0Scan: {
            const std::vector<double> series =
                engine.triplet_to_singlet_series(times);
            const auto it = std::max_element(series.begin(), series.end());
            const size_t arg =
                static_cast<size_t>(std::distance(series.begin(), it));
            put(0, times[arg], *it, *it > 0.5 ? "unreliable" : "");
            break;
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) error_message = e.what();
      }
    }
  };

  const int nworkers =
      std::min<int>(spec.workers, static_cast<int>(groups.size()));
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw ParamError(error_message);

  ModelParams meta_params = validate_params([&] {
    ModelParams p = base;
    p.theta = thetas[0];
    p.B0 = fields[0];
    p.temperature = temps[0];
    if (p.phonon_cutoff_auto) p.phonon_cutoff = ModelParams::kAutoCutoff;
    return p;
  }());
  double tail = 0.0;
  truncated_thermal_weights(meta_params, &tail);

  auto& md = result.metadata;
  md.emplace_back("code_version", constants::version);
  md.emplace_back("observable", observable_name(spec.observable));
  md.emplace_back("epsilon1_ev", format_g17(base.epsilon1));
  md.emplace_back("epsilon2_ev", format_g17(base.epsilon2));
  md.emplace_back("delta_ev", format_g17(base.delta()));
  md.emplace_back("J_ev", format_g17(base.tunneling_J));
  md.emplace_back("omega_rad_per_s", format_g17(base.omega));
  md.emplace_back("phi", format_g17(base.phi));
  md.emplace_back("g1_ev", format_g17(base.g1));
  md.emplace_back("g2_ev", format_g17(base.g2));
  md.emplace_back("broadening_eta_ev", format_g17(base.broadening_eta));
  md.emplace_back("phonon_cutoff", std::to_string(meta_params.phonon_cutoff));
  md.emplace_back("phonon_cutoff_policy",
                  meta_params.phonon_cutoff_auto ? "auto" : "fixed");
  md.emplace_back("cutoff_cap_bound", meta_params.cutoff_cap_bound ? "1" : "0");
  md.emplace_back("thermal_tail_mass", format_g17(tail));
  md.emplace_back("final_sector",
                  spec.final_sector == FinalSector::Acceptor ? "acceptor" : "all");
  md.emplace_back("time_in_inverse_omega",
                  spec.time_in_inverse_omega ? "1" : "0");
  for (auto [name, axis] :
       std::initializer_list<std::pair<const char*, const AxisSpec*>>{
           {"grid_theta", &spec.theta},
           {"grid_t", &spec.time},
           {"grid_B0", &spec.B0},
           {"grid_T", &spec.temperature}}) {
    md.emplace_back(name, format_g17(axis->start) + ":" + format_g17(axis->stop) +
                              ":" + std::to_string(axis->count));
  }
  if (consume_t)
    md.emplace_back("time_column", "argmax over the time grid");
  result.omega = base.omega;
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const SweepResult& result) {
  for (const auto& [k, v] : result.metadata) os << "# " << k << "=" << v << "\n";
  os << "observable,theta_rad,time_s,B0_tesla,temperature_K,value,flags\n";
  const char* name = observable_name(spec.observable);
  const double tscale = spec.time_in_inverse_omega ? result.omega : 1.0;
  for (const SweepRow& r : result.rows) {
    os << name << ',' << format_g17(r.theta) << ','
       << format_g17(r.time * tscale) << ',' << format_g17(r.B0) << ','
       << format_g17(r.temperature) << ',' << format_g17(r.value) << ','
       << r.flags << "\n";
  }
}

OracleCompareResult oracle_compare(const ModelParams& params,
                                   const std::vector<double>& t_grid,
                                   int dim_cap) {
  if (t_grid.empty()) throw ParamError("oracle compare needs a time grid");
  OracleCompareResult out;

  PerturbationEngine engine(params);
  const EvolvedSeries exact_pt = evolve_probability(
      params, InitialState::Triplet, Observable::AcceptorOccupancy, t_grid,
      dim_cap);
  const EvolvedSeries exact_pts = evolve_probability(
      params, InitialState::Triplet, Observable::SingletProjector, t_grid,
      dim_cap);
  const std::vector<double> pert_pts = engine.triplet_to_singlet_series(t_grid);

  double peak_pt = 0.0, peak_pts = 0.0;
  for (double v : exact_pt.values) peak_pt = std::max(peak_pt, v);
  for (double v : exact_pts.values) peak_pts = std::max(peak_pts, v);

  for (size_t i = 0; i < t_grid.size(); ++i) {
    OracleCompareRow row;
    row.time = t_grid[i];
    row.perturbative =
        engine.reaction_probability(InitialState::Triplet, t_grid[i]);
    row.exact = exact_pt.values[i];
    out.rows.push_back(row);
    if (peak_pt > 0.0)
      out.max_rel_error_pt = std::max(
          out.max_rel_error_pt, std::abs(row.perturbative - row.exact) / peak_pt);

    OracleCompareRow prow;
    prow.time = t_grid[i];
    prow.perturbative = pert_pts[i];
    prow.exact = exact_pts.values[i];
    out.pts_rows.push_back(prow);
    if (peak_pts > 0.0)
      out.max_rel_error_pts =
          std::max(out.max_rel_error_pts,
                   std::abs(prow.perturbative - prow.exact) / peak_pts);
  }

  // J^2 scaling between J and J/2 at the last time point
  ModelParams half = params;
  half.tunneling_J = params.tunneling_J / 2.0;
  PerturbationEngine engine_half(validate_params(half));
  const double p_full =
      engine.reaction_probability(InitialState::Triplet, t_grid.back());
  const double p_half =
      engine_half.reaction_probability(InitialState::Triplet, t_grid.back());
  out.j2_ratio = (p_half > 0.0) ? p_full / p_half : 0.0;

  out.metadata.emplace_back("code_version", constants::version);
  out.metadata.emplace_back("phonon_cutoff",
                            std::to_string(params.phonon_cutoff));
  out.metadata.emplace_back("max_norm_defect",
                            format_g17(exact_pt.max_norm_defect));
  out.metadata.emplace_back("max_energy_drift_ev",
                            format_g17(exact_pt.max_energy_drift));
  out.metadata.emplace_back("max_rel_error_pt", format_g17(out.max_rel_error_pt));
  out.metadata.emplace_back("max_rel_error_pts",
                            format_g17(out.max_rel_error_pts));
  out.metadata.emplace_back("j2_ratio", format_g17(out.j2_ratio));
  return out;
}

void write_oracle_csv(std::ostream& os, const OracleCompareResult& result) {
  for (const auto& [k, v] : result.metadata) os << "# " << k << "=" << v << "\n";
  os << "observable,time_s,perturbative,exact,abs_error\n";
  for (const OracleCompareRow& r : result.rows)
    os << "pt," << format_g17(r.time) << ',' << format_g17(r.perturbative)
       << ',' << format_g17(r.exact) << ','
       << format_g17(std::abs(r.perturbative - r.exact)) << "\n";
  for (const OracleCompareRow& r : result.pts_rows)
    os << "pts," << format_g17(r.time) << ',' << format_g17(r.perturbative)
       << ',' << format_g17(r.exact) << ','
       << format_g17(std::abs(r.perturbative - r.exact)) << "\n";
}

} // namespace spinet
