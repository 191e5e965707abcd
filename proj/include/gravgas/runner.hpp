#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "gravgas/config.hpp"
#include "gravgas/errors.hpp"
#include "gravgas/perturbation.hpp"
#include "gravgas/profile.hpp"
#include "gravgas/sheet_oracle.hpp"
#include "gravgas/shell_oracle.hpp"
#include "gravgas/slab.hpp"
#include "gravgas/snapshot.hpp"
#include "gravgas/spherical.hpp"

namespace gravgas {

// Exit codes of the scenario runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitCollapse = 2;  // collapse/crossing before a requested time

struct ComparisonRow {
  double time;
  std::string field;
  double max_rel;
  double l2_rel;
  double tol;
  bool pass;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double analytic_collapse_time = std::numeric_limits<double>::quiet_NaN();
  double oracle_collapse_time = std::numeric_limits<double>::quiet_NaN();
  bool pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

inline std::vector<double> make_grid(const ScenarioConfig& cfg) {
  if (cfg.geometry == GeometryKind::Spherical) {
    const double lo = std::isnan(cfg.grid_min) ? cfg.grid_max / cfg.grid_n : cfg.grid_min;
    if (!(lo > 0.0)) throw ConfigError("spherical grid must exclude r = 0");
    return linspace(lo, cfg.grid_max, cfg.grid_n);
  }
  const double hi = cfg.grid_max;
  const double lo = std::isnan(cfg.grid_min) ? -hi : cfg.grid_min;
  return linspace(lo, hi, cfg.grid_n);
}

// Deviation of b from a, relative to the largest analytic magnitude of the
// field over the grid (falls back to absolute when the field vanishes).
inline void relative_deviation(const std::vector<double>& a, const std::vector<double>& b,
                               double& max_rel, double& l2_rel) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double mx = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]) / scale;
    mx = std::max(mx, d);
    sq += d * d;
  }
  max_rel = mx;
  l2_rel = std::sqrt(sq / static_cast<double>(a.size()));
}

inline ProfileFunction build_density(const ScenarioConfig& cfg) {
  const double hi = cfg.grid_max;
  const double lo = cfg.geometry == GeometryKind::Spherical ? 0.0 : -hi;
  return cfg.density.build(lo, hi);
}

inline ProfileFunction build_velocity(const ScenarioConfig& cfg) {
  const double hi = cfg.grid_max;
  const double lo = cfg.geometry == GeometryKind::Spherical ? 0.0 : -hi;
  return cfg.velocity.build(lo, hi);
}

// Equal-mass sheet sampling of an arbitrary planar density: sheet k sits
// at the (k + 1/2)/n mass quantile of the initial profile.
inline SheetSystem sample_sheets(const ProfileFunction& rho0, const ProfileFunction& v0,
                                 double gamma, int n) {
  const CumulativeProfile g = planar_g(rho0);
  const double total = g.total_mass();
  if (!(total > 0.0)) throw Error("sample_sheets: zero total mass");
  SheetSystem s;
  s.gamma = gamma;
  s.mass = total / n;
  const double lo = rho0.knots().front();
  const double hi = rho0.knots().back();
  for (int k = 0; k < n; ++k) {
    const double target = ((k + 0.5) / n - 0.5) * total;  // g value at the quantile
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b) + std::abs(a));
         ++it) {
      const double mid = 0.5 * (a + b);
      if (g.value(mid) < target)
        a = mid;
      else
        b = mid;
    }
    s.positions.push_back(0.5 * (a + b));
    s.velocities.push_back(v0(s.positions.back()));
  }
  return s;
}

inline std::vector<double> sheet_density_estimate(const SheetSystem& s) {
  const std::size_t n = s.size();
  std::vector<double> rho(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 < n ? k + 1 : n - 1;
    const double gap = s.positions[hi] - s.positions[lo];
    if (gap > 0.0) rho[k] = s.mass * static_cast<double>(hi - lo) / gap;
  }
  return rho;
}

inline std::vector<double> shell_density_estimate(const std::vector<double>& radii,
                                                  const std::vector<double>& masses) {
  const std::size_t n = radii.size();
  std::vector<double> rho(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j == 0 ? 0 : j - 1;
    const std::size_t hi = j + 1 < n ? j + 1 : n - 1;
    // divide by the exact shell volume factor, not r^2*dr: the latter is
    // strongly biased at the innermost shell
    const double vol = (radii[hi] * radii[hi] * radii[hi] - radii[lo] * radii[lo] * radii[lo]) / 3.0;
    if (vol > 0.0) rho[j] = (masses[hi] - masses[lo]) / vol;
  }
  return rho;
}

}  // namespace detail

class ScenarioRunner {
 public:
  explicit ScenarioRunner(ScenarioConfig cfg) : cfg_(std::move(cfg)) {}

  int run() {
    namespace fs = std::filesystem;
    fs::create_directories(cfg_.output_dir);
    summary_.clear();
    int code = kExitOk;
    switch (cfg_.mode) {
      case RunMode::Analytic:
        code = run_analytic();
        break;
      case RunMode::Oracle:
        code = run_oracle();
        break;
      case RunMode::Compare:
        code = run_compare();
        break;
      case RunMode::Perturbation:
        code = run_perturbation();
        break;
      case RunMode::CollapseTime:
        code = run_collapse_time();
        break;
    }
    write_summary();
    return code;
  }

  const std::string& summary() const { return summary_; }

 private:
  void note(const std::string& line) { summary_ += line + "\n"; }

  void write_summary() const {
    std::ofstream f(std::filesystem::path(cfg_.output_dir) / "summary.txt", std::ios::binary);
    f << summary_;
  }

  std::filesystem::path out_path(const std::string& name) const {
    return std::filesystem::path(cfg_.output_dir) / name;
  }

  SphericalOptions spherical_opts() const {
    SphericalOptions o;
    o.tol = cfg_.solver_tol;
    o.kepler_guard = cfg_.kepler_guard;
    o.collapse_guard = cfg_.collapse_guard;
    return o;
  }

  SlabOptions slab_opts() const {
    SlabOptions o;
    o.tol = cfg_.solver_tol;
    o.collapse_guard = cfg_.collapse_guard;
    return o;
  }

  // Analytic state at time t on the given grid (throws on collapse).
  FieldSnapshot analytic_state(double t, const std::vector<double>& grid) const {
    if (cfg_.geometry == GeometryKind::Spherical) {
      if (cfg_.velocity.kind != ProfileSpec::Kind::Zero)
        throw ConfigError("spherical scenarios support only zero initial velocity");
      if (cfg_.density.kind == ProfileSpec::Kind::Constant)
        return homogeneous_state(cfg_.density.value, cfg_.gamma, t, grid, spherical_opts());
      const CumulativeProfile m = cumulative_mass(detail::build_density(cfg_));
      return cold_collapse_state(m, cfg_.gamma, t, grid, spherical_opts());
    }
    return slab_state(detail::build_density(cfg_), detail::build_velocity(cfg_), cfg_.gamma, t,
                      grid, slab_opts());
  }

  int run_analytic() {
    const auto grid = detail::make_grid(cfg_);
    note("mode: analytic");
    for (std::size_t i = 0; i < cfg_.times.size(); ++i) {
      try {
        const FieldSnapshot st = analytic_state(cfg_.times[i], grid);
        write_snapshot_csv(st, out_path("snapshot_" + std::to_string(i) + ".csv"));
        note("snapshot_" + std::to_string(i) + ": t = " + detail_format(cfg_.times[i]));
      } catch (const CollapseSingularity& e) {
        note("event: collapse at t = " + detail_format(e.event_time) +
             " before requested t = " + detail_format(cfg_.times[i]));
        return kExitCollapse;
      } catch (const ShellCrossing& e) {
        note("event: shell crossing at t = " + detail_format(e.event_time));
        return kExitCollapse;
      } catch (const SheetCrossing& e) {
        note("event: sheet crossing at t = " + detail_format(e.event_time));
        return kExitCollapse;
      }
    }
    return kExitOk;
  }

  int run_oracle() {
    note("mode: oracle");
    if (cfg_.geometry == GeometryKind::Spherical) {
      const auto traj = spherical_oracle_trajectory();
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        FieldSnapshot st;
        st.t = traj.times[i];
        st.coord = traj.radii[i];
        st.velocity = traj.velocities[i];
        st.cumulative = shell_masses_;
        st.density = detail::shell_density_estimate(traj.radii[i], shell_masses_);
        write_snapshot_csv(st, out_path("snapshot_" + std::to_string(i) + ".csv"));
      }
      if (!traj.events.empty() && traj.times.size() < cfg_.times.size()) {
        note("event: oracle stop at t = " + detail_format(traj.events.front().time));
        return kExitCollapse;
      }
      return kExitOk;
    }
    SheetSimulator sim(detail::sample_sheets(detail::build_density(cfg_),
                                             detail::build_velocity(cfg_), cfg_.gamma,
                                             cfg_.oracle_n));
    for (std::size_t i = 0; i < cfg_.times.size(); ++i) {
      sim.advance_to(cfg_.times[i]);
      FieldSnapshot st;
      st.t = cfg_.times[i];
      st.coord = sim.state().positions;
      st.velocity = sim.state().velocities;
      st.density = detail::sheet_density_estimate(sim.state());
      const std::size_t n = sim.state().size();
      for (std::size_t k = 0; k < n; ++k)
        st.cumulative.push_back(sim.state().mass * (2.0 * static_cast<double>(k) -
                                                    static_cast<double>(n) + 1.0) /
                                2.0);
      write_snapshot_csv(st, out_path("snapshot_" + std::to_string(i) + ".csv"));
    }
    if (!sim.events().empty())
      note("first sheet crossing at t = " + detail_format(sim.events().front().time));
    return kExitOk;
  }

  int run_compare() {
    note("mode: compare");
    ComparisonReport report =
        cfg_.geometry == GeometryKind::Spherical ? compare_spherical() : compare_slab();

    std::ofstream f(out_path("report.csv"), std::ios::binary);
    f << "time,field,max_rel,l2_rel,tol,pass\n";
    for (const auto& r : report.rows)
      f << detail_format(r.time) << ',' << r.field << ',' << detail_format(r.max_rel) << ','
        << detail_format(r.l2_rel) << ',' << detail_format(r.tol) << ','
        << (r.pass ? "1" : "0") << '\n';
    note("analytic collapse time: " + detail_format(report.analytic_collapse_time));
    note("oracle collapse time: " + detail_format(report.oracle_collapse_time));
    note(std::string("compare: ") + (report.pass() ? "pass" : "fail"));
    return kExitOk;
  }

  ShellTrajectory spherical_oracle_trajectory() {
    const CumulativeProfile m = cumulative_mass(detail::build_density(cfg_));
    ShellSystem shells = ShellSystem::cold(cfg_.oracle_n, cfg_.grid_max, cfg_.gamma,
                                           [&](double f) { return m.value(f); });
    shell_masses_ = shells.masses;
    shell_labels_ = shells.labels;
    ShellOracleOptions opts;
    opts.rtol = cfg_.oracle_rtol;
    opts.sample_times = cfg_.times;
    const double t_end = cfg_.times.empty() ? 0.0 : cfg_.times.back();
    return shell_integrate(shells, t_end, opts);
  }

  ComparisonReport compare_spherical() {
    ComparisonReport rep;
    const auto traj = spherical_oracle_trajectory();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      FieldSnapshot an;
      try {
        an = analytic_state(t, traj.radii[i]);
      } catch (const Error&) {
        break;
      }
      add_row(rep, t, "velocity", an.velocity, traj.velocities[i], cfg_.compare_velocity_tol);
      add_row(rep, t, "mass", an.cumulative, shell_masses_, cfg_.compare_mass_tol);
      add_row(rep, t, "density", an.density,
              detail::shell_density_estimate(traj.radii[i], shell_masses_),
              cfg_.compare_density_tol);
    }
    // Collapse times: analytic per-label minimum vs first oracle guard event.
    rep.analytic_collapse_time = analytic_collapse_time_spherical();
    rep.oracle_collapse_time = oracle_collapse_time_spherical(rep.analytic_collapse_time);
    return rep;
  }

  double analytic_collapse_time_spherical() const {
    if (cfg_.density.kind == ProfileSpec::Kind::Constant)
      return homogeneous_collapse_time(cfg_.density.value, cfg_.gamma);
    const CumulativeProfile m = cumulative_mass(detail::build_density(cfg_));
    return cold_collapse_time(m, cfg_.gamma, detail::make_grid(cfg_));
  }

  double oracle_collapse_time_spherical(double hint) {
    const CumulativeProfile m = cumulative_mass(detail::build_density(cfg_));
    ShellSystem shells = ShellSystem::cold(cfg_.oracle_n, cfg_.grid_max, cfg_.gamma,
                                           [&](double f) { return m.value(f); });
    ShellOracleOptions opts;
    opts.rtol = cfg_.oracle_rtol;
    const double horizon = std::isfinite(hint) ? 2.0 * hint : 10.0;
    const auto traj = shell_integrate(shells, horizon, opts);
    for (const auto& ev : traj.events)
      if (ev.type == ShellEvent::Type::Collapse) return ev.time;
    return std::numeric_limits<double>::quiet_NaN();
  }

  ComparisonReport compare_slab() {
    ComparisonReport rep;
    const ProfileFunction rho0 = detail::build_density(cfg_);
    const ProfileFunction v0 = detail::build_velocity(cfg_);
    const CumulativeProfile g = planar_g(rho0);
    SheetSimulator sim(detail::sample_sheets(rho0, v0, cfg_.gamma, cfg_.oracle_n));
    const double mu = sim.state().mass;
    const std::size_t n = sim.state().size();
    for (double t : cfg_.times) {
      sim.advance_to(t);
      if (!sim.events().empty()) break;  // crossings: analytic domain ended
      SlabState an;
      try {
        an = slab_state(rho0, v0, cfg_.gamma, t, sim.state().positions, slab_opts());
      } catch (const Error&) {
        break;
      }
      std::vector<double> g_disc(n);
      for (std::size_t k = 0; k < n; ++k)
        g_disc[k] = mu * (2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0) / 2.0;
      add_row(rep, t, "velocity", an.velocity, sim.state().velocities,
              cfg_.compare_velocity_tol);
      add_row(rep, t, "g", an.cumulative, g_disc, cfg_.compare_mass_tol);
      add_row(rep, t, "density", an.density, detail::sheet_density_estimate(sim.state()),
              cfg_.compare_density_tol);
    }
    const auto t_c = collapse_time(rho0, v0, cfg_.gamma);
    rep.analytic_collapse_time =
        t_c ? *t_c : std::numeric_limits<double>::quiet_NaN();
    if (t_c) {
      SheetSimulator probe(detail::sample_sheets(rho0, v0, cfg_.gamma, cfg_.oracle_n));
      probe.advance_to(1.5 * *t_c);
      if (!probe.events().empty()) rep.oracle_collapse_time = probe.events().front().time;
    }
    return rep;
  }

  int run_perturbation() {
    note("mode: perturbation");
    if (cfg_.density.kind != ProfileSpec::Kind::Constant)
      throw ConfigError("perturbation mode needs density.kind = constant");
    const double rho0 = cfg_.density.value;
    const PerturbationMode mode = cfg_.perturbation_mode == "sound"
                                      ? PerturbationMode::Sound
                                      : PerturbationMode::Gravitating;
    const double sigma = std::sqrt(4.0 * std::numbers::pi * cfg_.gamma * rho0);
    PerturbationParams params;
    params.sound_speed = cfg_.perturbation_sound_speed;
    params.wavenumber = cfg_.perturbation_wavenumber;
    const double t_end = cfg_.perturbation_t_end > 0.0 ? cfg_.perturbation_t_end : 10.0 / sigma;
    const auto run = perturbation_growth(rho0, cfg_.gamma, mode, t_end, params);

    std::ofstream f(out_path("perturbation.csv"), std::ios::binary);
    f << "t,value,rate\n";
    for (std::size_t i = 0; i < run.times.size(); ++i)
      f << detail_format(run.times[i]) << ',' << detail_format(run.values[i]) << ','
        << detail_format(run.rates[i]) << '\n';
    note("fitted exponent: " + detail_format(run.fitted_exponent));
    note("free-fall rate sqrt(4*pi*gamma*rho0): " + detail_format(sigma));
    return kExitOk;
  }

  int run_collapse_time() {
    note("mode: collapse-time");
    if (cfg_.geometry == GeometryKind::Slab) {
      const auto t_c = collapse_time(detail::build_density(cfg_), detail::build_velocity(cfg_),
                                     cfg_.gamma);
      note("collapse time: " + (t_c ? detail_format(*t_c) : std::string("none")));
      return kExitOk;
    }
    if (cfg_.velocity.kind != ProfileSpec::Kind::Zero)
      throw ConfigError("spherical scenarios support only zero initial velocity");
    const double t_c = analytic_collapse_time_spherical();
    note("collapse time: " +
         (std::isfinite(t_c) ? detail_format(t_c) : std::string("none")));
    return kExitOk;
  }

  void add_row(ComparisonReport& rep, double t, const std::string& field,
               const std::vector<double>& analytic, const std::vector<double>& oracle,
               double tol) {
    double mx, l2;
    detail::relative_deviation(analytic, oracle, mx, l2);
    rep.rows.push_back({t, field, mx, l2, tol, mx <= tol});
  }

  static std::string detail_format(double v) { return detail::format_full(v); }

  ScenarioConfig cfg_;
  std::string summary_;
  std::vector<double> shell_masses_;
  std::vector<double> shell_labels_;
};

// Parse-and-run convenience used by the CLI: returns the exit status and
// reports config problems on the error stream.
inline int run_scenario(const ScenarioConfig& cfg) { return ScenarioRunner(cfg).run(); }

}  // namespace gravgas
