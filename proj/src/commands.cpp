#include "vortex/commands.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/dispersion.hpp"
#include "vortex/eigen.hpp"
#include "vortex/errors.hpp"
#include "vortex/filament.hpp"
#include "vortex/hydro.hpp"
#include "vortex/kernels.hpp"
#include "vortex/lie.hpp"
#include "vortex/spectral.hpp"
#include "vortex/spectrum.hpp"

#ifndef VORTEX_VERSION
#define VORTEX_VERSION "unknown"
#endif

namespace vortex {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }

  Csv& row(std::initializer_list<double> values) {
    std::vector<std::string> s;
    for (double v : values) s.push_back(format_number(v));
    return row_strings(s);
  }
  Csv& row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += "\n";
    return *this;
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

struct Run {
  std::string command;
  std::string config_path;
  std::string config_hash = "-";
  fs::path dir;
  std::vector<std::string> files;
  std::vector<std::string> notes;
  std::string status = "complete";

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
    if (!f) throw NumericalError("cannot write " + (dir / name).string());
    files.push_back(name);
  }

  void manifest() {
    std::ostringstream m;
    m << "artifact " << VORTEX_VERSION << "\n";
    m << "command " << command << "\n";
    m << "config " << (config_path.empty() ? "-" : config_path) << "\n";
    m << "config_hash fnv1a64:" << config_hash << "\n";
    m << "kernels " << kernels::isa_name(kernels::active_isa()) << "\n";
    m << "eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n";
    m << "fftw " << fftw_version << "\n";
    m << "status " << status << "\n";
    for (const auto& n : notes) m << "note " << n << "\n";
    for (const auto& f : files) m << "file " << f << "\n";
    fs::create_directories(dir);
    std::ofstream f(dir / "MANIFEST", std::ios::binary);
    f << m.str();
  }

  /// After a failure; an unwritable directory must not mask the original error.
  void manifest_failed(const std::string& why) noexcept {
    try {
      status = "failed";
      notes.push_back(why);
      manifest();
    } catch (...) {
    }
  }
};

const RunConfig& need(const std::optional<RunConfig>& cfg, const char* what) {
  if (!cfg) throw ValidationError("config", std::string("--config is required for ") + what);
  return *cfg;
}

template <class T>
const T& need_block(const std::optional<T>& b, const char* name) {
  if (!b) throw ValidationError(name, "block missing from config");
  return *b;
}

// ---------------------------------------------------------------- dispersion

void cmd_dispersion(const std::optional<RunConfig>& cfg, const CliOptions& opt, Run& run, std::ostream& out) {
  int lo = cfg ? cfg->dispersion.n_min : 1;
  int hi = cfg ? cfg->dispersion.n_max : 5;
  if (opt.n_min) lo = *opt.n_min;
  if (opt.n_max) hi = *opt.n_max;
  Csv csv({"n", "omega"});
  for (int n = lo; n <= hi; ++n) csv.row({static_cast<double>(n), dispersion(n)});
  run.write("dispersion.csv", csv.text());
  if (lo > hi) run.notes.push_back("empty range");
  if (lo < 0) run.notes.push_back("negative n: omega_{-n} = -omega_n");
  if (!opt.quiet) out << "dispersion: " << std::max(0, hi - lo + 1) << " rows\n";
}

// ------------------------------------------------------------------ simulate

std::vector<Vec3> tangents_of(const std::vector<Vec3>& pts, double R) {
  const int n = static_cast<int>(pts.size());
  const FourierGrid g(n);
  std::array<std::vector<double>, 3> d;
  std::vector<double> comp(n);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < n; ++i) comp[i] = pts[i][c];
    d[c] = g.derivative(std::span<const double>(comp), 1);
  }
  std::vector<Vec3> t(n);
  for (int i = 0; i < n; ++i) t[i] = Vec3(d[0][i], d[1][i], d[2][i]) / R;
  return t;
}

int simulate_nonlinear(const RunConfig& cfg, const SimulationConfig& sim, const CliOptions& opt, Run& run,
                       std::ostream& out) {
  const FilamentState& s = need_block(cfg.filament, "filament");
  const double R0 = cfg.constants.R0;
  const SampledCurve curve = reconstruct_curve(s, sim.N);
  if (sim.N < 64) throw ValidationError("simulation.N", "nonlinear runs need at least 64 points");
  const double bound = nonlinear_stability_bound(curve.points, R0);
  const double dt = sim.dt > 0.0 ? sim.dt : 0.5 * bound;
  const long steps = static_cast<long>(std::ceil(sim.tau / dt * (1.0 - 1e-12)));
  NonlinearOptions no;
  no.R = s.R;
  no.output_every = sim.output_every > 0 ? sim.output_every : static_cast<int>(std::max(1L, steps / 200));
  no.reparam_every = sim.reparam_every;
  const NonlinearRun r = evolve_nonlinear(curve, sim.tau, sim.dt, R0, no);

  int n_keep = 0;
  for (int n : sim.mode_columns) n_keep = std::max(n_keep, std::abs(n));
  std::vector<std::string> header{"tau", "length", "f_x", "f_y", "f_z"};
  for (int n : sim.mode_columns) header.push_back("re_j" + std::to_string(n)), header.push_back("im_j" + std::to_string(n));
  Csv traj(header);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<std::string> cells{format_number(r.times[i]), format_number(r.length[i]),
                                   format_number(r.impulse[i].x()), format_number(r.impulse[i].y()),
                                   format_number(r.impulse[i].z())};
    if (!sim.mode_columns.empty()) {
      const auto modes = analyze_tangents(tangents_of(r.frames[i], s.R), s.epsilon, n_keep);
      for (int n : sim.mode_columns) {
        const auto it = modes.find(n);
        const Complex v = it == modes.end() ? Complex(0.0) : it->second;
        cells.push_back(format_number(v.real()));
        cells.push_back(format_number(v.imag()));
      }
    }
    traj.row_strings(cells);
  }
  run.write("trajectory.csv", traj.text());

  Csv fin({"i", "xi", "x", "y", "z"});
  const auto& last = r.final_points();
  for (std::size_t i = 0; i < last.size(); ++i)
    fin.row({static_cast<double>(i), kTwoPi * i / last.size(), last[i].x(), last[i].y(), last[i].z()});
  run.write("final_curve.csv", fin.text());

  double drift = 0.0;
  for (double L : r.length) drift = std::max(drift, std::abs(L - r.length.front()) / r.length.front());
  auto mean_z = [](const std::vector<Vec3>& p) {
    double z = 0.0;
    for (const auto& v : p) z += v.z();
    return z / p.size();
  };
  const double t_end = r.times.back();
  const double speed = t_end > 0.0 ? (mean_z(last) - mean_z(r.frames.front())) / t_end : 0.0;

  std::ostringstream sum;
  sum << "mode nonlinear\n";
  sum << "steps " << r.steps << "\n";
  sum << "dt " << format_number(r.dt) << "\n";
  sum << "stability_bound " << format_number(bound) << "\n";
  sum << "tau_reached " << format_number(t_end) << "\n";
  sum << "max_rel_length_drift " << format_number(drift) << "\n";
  sum << "axial_speed " << format_number(speed) << "\n";
  sum << "axial_speed_ring_prediction " << format_number(s.R * s.R / R0) << "\n";
  if (!r.aborted) {
    const auto lin = linear_prediction(s, t_end, R0, sim.N);
    double dev = 0.0;
    for (std::size_t i = 0; i < lin.size(); ++i) dev = std::max(dev, (lin[i] - last[i]).norm());
    sum << "max_deviation_from_linear_theory " << format_number(dev) << "\n";
  }
  if (r.aborted) sum << "aborted " << r.message << "\n";
  run.write("summary.txt", sum.str());
  if (!opt.quiet) out << sum.str();
  if (r.aborted) {
    run.status = "truncated";
    run.notes.push_back(r.message);
    return kExitNumerical;
  }
  return kExitOk;
}

int simulate_linearized(const RunConfig& cfg, const SimulationConfig& sim, const CliOptions& opt, Run& run,
                        std::ostream& out) {
  const FilamentState& s = need_block(cfg.filament, "filament");
  const int N = sim.N;
  std::vector<Complex> field = sample_amplitude(s, N);
  const double bound = linearized_stability_bound(N);
  const double dt = sim.dt > 0.0 ? sim.dt : 0.5 * bound;
  if (dt > bound) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the RK4 stability bound " << bound << " for N = " << N;
    throw StabilityError(msg.str(), bound);
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(sim.tau / dt * (1.0 - 1e-12))));
  const long every = sim.output_every > 0 ? sim.output_every : std::max(1L, steps / 200);
  const long segments = (steps + every - 1) / every;
  const int keep = s.max_mode();
  const FourierGrid g(N);
  double scale = 0.0;
  for (const auto& v : field) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  std::vector<std::string> header{"tau", "length", "f_x", "f_y", "f_z", "deviation_from_exact"};
  for (int n : sim.mode_columns) header.push_back("re_j" + std::to_string(n)), header.push_back("im_j" + std::to_string(n));
  Csv traj(header);
  double max_dev = 0.0;
  FilamentState now = s;
  double t_prev = 0.0;
  for (long seg = 0; seg <= segments; ++seg) {
    const double t = sim.tau * static_cast<double>(seg) / segments;
    if (seg > 0) field = evolve_linearized_pde(field, t - t_prev, dt);
    t_prev = t;
    const auto coeff = g.analyze(std::span<const Complex>(field));
    now.modes.clear();
    for (int i = 0; i < N; ++i) {
      const int k = g.wavenumber(i);
      if (std::abs(k) <= keep && 2 * std::abs(k) < N && s.modes.count(k)) now.modes[k] = coeff[i];
    }
    FilamentState exact = s;
    exact.modes = evolve_modes(s.modes, t);
    const auto ref = sample_amplitude(exact, N);
    double dev = 0.0;
    for (int i = 0; i < N; ++i) dev = std::max(dev, std::abs(field[i] - ref[i]) / scale);
    max_dev = std::max(max_dev, dev);
    const auto curve = reconstruct_curve(now, std::max(N, 4 * std::max(1, keep)));
    const Vec3 f = impulse_f(std::span<const Vec3>(curve.tangents));
    std::vector<std::string> cells{format_number(t), format_number(curve_length(curve.points)), format_number(f.x()),
                                   format_number(f.y()), format_number(f.z()), format_number(dev)};
    for (int n : sim.mode_columns) {
      const Complex v = now.mode(n);
      cells.push_back(format_number(v.real()));
      cells.push_back(format_number(v.imag()));
    }
    traj.row_strings(cells);
  }
  run.write("trajectory.csv", traj.text());
  run.write("final_state.json", to_json(now) + "\n");

  std::ostringstream sum;
  sum << "mode linearized\n";
  sum << "dt " << format_number(dt) << "\n";
  sum << "stability_bound " << format_number(bound) << "\n";
  sum << "max_deviation_from_exact_propagator " << format_number(max_dev) << "\n";
  run.write("summary.txt", sum.str());
  if (!opt.quiet) out << sum.str();
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const CliOptions& opt, Run& run, std::ostream& out) {
  const SimulationConfig& sim = need_block(cfg.simulation, "simulation");
  need_block(cfg.filament, "filament");
  return sim.mode == "nonlinear" ? simulate_nonlinear(cfg, sim, opt, run, out)
                                 : simulate_linearized(cfg, sim, opt, run, out);
}

// --------------------------------------------------------------------- eigen

bool has_closed_form(const DomainSpec& d) {
  return std::holds_alternative<Disk>(d) || std::holds_alternative<Rectangle>(d);
}

double grid_h(const RunConfig& cfg, const CliOptions& opt, const DomainSpec& d) {
  if (opt.grid_h > 0.0) return opt.grid_h;
  if (cfg.grid.h > 0.0) return cfg.grid.h;
  return default_grid_h(d, cfg.grid.cells);
}

std::string eigen_csv(const EigenResult& e) {
  Csv csv({"m", "lambda_sq", "lambda", "error_estimate", "multiplicity"});
  for (std::size_t i = 0; i < e.size(); ++i)
    csv.row({static_cast<double>(i + 1), e.lambda_sq[i], e.lambdas[i], e.error_estimate[i],
             static_cast<double>(e.multiplicity[i])});
  return csv.text();
}

EigenResult solve_domain(const RunConfig& cfg, const CliOptions& opt, int M, Run& run) {
  const DomainSpec& d = need_block(cfg.domain, "domain");
  if (has_closed_form(d) && !opt.force_grid && !cfg.grid.force) {
    run.notes.push_back("eigenvalues: analytic");
    return eigen_analytic(d, M);
  }
  const double h = grid_h(cfg, opt, d);
  run.notes.push_back("eigenvalues: grid, h = " + format_number(h) + " and h/2, Richardson extrapolated");
  return eigen_grid(d, M, h);
}

int cmd_eigen(const RunConfig& cfg, const CliOptions& opt, Run& run, std::ostream& out) {
  const DomainSpec& d = need_block(cfg.domain, "domain");
  for (const auto& w : validate_domain(d, cfg.constants.R0)) run.notes.push_back("warning: " + w);
  const int M = cfg.sweep.M > 0 ? cfg.sweep.M : 16;
  const EigenResult e = solve_domain(cfg, opt, M, run);
  run.write("eigen.csv", eigen_csv(e));
  if (!opt.quiet) {
    out << "eigen: " << e.size() << " eigenvalues (" << (e.method == EigenMethod::analytic ? "analytic" : "grid")
        << "), lambda_1^2 = " << format_number(e.lambda_sq.front()) << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ spectrum

int cmd_spectrum(const RunConfig& cfg, const CliOptions& opt, Run& run, std::ostream& out) {
  const DomainSpec& d = need_block(cfg.domain, "domain");
  const FilamentState& s = need_block(cfg.filament, "filament");
  const PhysicalConstants& c = cfg.constants;
  for (const auto& w : validate_domain(d, c.R0)) run.notes.push_back("warning: " + w);
  for (const auto& w : validate(s, c.R0)) run.notes.push_back("warning: " + w);

  EigenResult eig;
  const bool analytic = has_closed_form(d) && !opt.force_grid && !cfg.grid.force;
  if (analytic && cfg.sweep.M == 0) {
    eig = eigen_analytic_covering(d, kPi * cfg.sweep.n_max / c.L * c.R0);
    run.notes.push_back("eigenvalues: analytic, covering the selection rule");
  } else {
    eig = solve_domain(cfg, opt, cfg.sweep.M > 0 ? cfg.sweep.M : 32, run);
  }
  run.write("eigen.csv", eigen_csv(eig));

  EnumerateOptions eo;
  eo.n_max = cfg.sweep.n_max;
  eo.k_max = cfg.sweep.k_max;
  eo.include_n0 = cfg.sweep.include_n0;
  const auto levels = enumerate_levels(c, s.R, eig, eo);

  Csv lv({"n", "m", "k", "lambda", "gamma_exact", "gamma_series", "base", "form_factor", "fine_structure",
          "residual", "reduced", "sector", "multiplicity"});
  for (const auto& l : levels)
    lv.row_strings({std::to_string(l.qn.n), std::to_string(l.qn.m), std::to_string(l.qn.k), format_number(l.lambda),
                    format_number(l.gamma_exact), format_number(l.gamma_series), format_number(l.base),
                    format_number(l.form_factor), format_number(l.fine_structure), format_number(l.residual),
                    format_number(l.reduced), l.sector(), std::to_string(l.multiplicity)});
  run.write("levels.csv", lv.text());

  Csv hist({"bin_center", "count"});
  std::string dat = "# bin_center count\n";
  const auto scales = derive_scales(c);
  const double e2 = c.epsilon * c.epsilon;
  double max_corr = 0.0, max_res = 0.0, max_off = 0.0, max_rel = 0.0, bound = 0.0;
  int split_ok = 0, split_needed = 0;
  if (!levels.empty()) {
    const auto h = peak_histogram(levels, cfg.sweep.bin_width);
    for (const auto& b : h.bins) {
      hist.row({b.center, static_cast<double>(b.count)});
      dat += format_number(b.center) + " " + std::to_string(b.count) + "\n";
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& l = levels[i];
      max_off = std::max(max_off, std::abs(h.offsets[i]));
      if (l.qn.n == 0) continue;
      max_corr = std::max(max_corr, e2 * std::max(l.form_factor, 4.0 * scales.beta * l.qn.k));
      max_res = std::max(max_res, l.residual / l.base);
    }
    for (const auto& p : peak_clusters(levels, c)) {
      if (p.integer == 0) continue;
      max_rel = std::max(max_rel, p.max_rel_offset);
      bound = std::max(bound, p.bound);
      if (p.levels > 1) {
        ++split_needed;
        if (p.distinct > 1) ++split_ok;
      }
    }
  }
  run.write("histogram.csv", hist.text());
  if (cfg.gnuplot) run.write("histogram.dat", dat);

  std::ostringstream sum;
  sum << "levels " << levels.size() << "\n";
  sum << "eigenvalues_used " << eig.size() << "\n";
  sum << "k_limit " << max_k(c) << "\n";
  sum << "max_correction " << format_number(max_corr) << "\n";
  sum << "max_rel_residual " << format_number(max_res) << "\n";
  sum << "max_integer_offset " << format_number(max_off) << "\n";
  sum << "max_rel_offset " << format_number(max_rel) << "\n";
  sum << "offset_bound " << format_number(bound) << "\n";
  sum << "offsets_within_bound " << (max_rel <= bound * (1.0 + 1e-12) + 1e-15 ? "yes" : "no") << "\n";
  sum << "split_clusters " << split_ok << "/" << split_needed << "\n";
  if (levels.empty()) {
    sum << "note the selection rules admit no level: lambda_1 = "
        << format_number(eig.size() ? eig.lambdas.front() / c.R0 : 0.0) << " exceeds pi n_max / L = "
        << format_number(kPi * cfg.sweep.n_max / c.L) << "\n";
    run.notes.push_back("empty level table: selection rules exclude everything");
  }
  run.write("summary.txt", sum.str());
  if (!opt.quiet) out << sum.str();
  return kExitOk;
}

// ------------------------------------------------------------------ validate

int cmd_validate(const RunConfig& cfg, const CliOptions& opt, std::ostream& out) {
  std::vector<std::string> warnings;
  if (cfg.domain) {
    for (const auto& w : validate_domain(*cfg.domain, cfg.constants.R0)) warnings.push_back(w);
    if (!has_closed_form(*cfg.domain) || cfg.grid.force || opt.force_grid)
      (void)rasterize(*cfg.domain, grid_h(cfg, opt, *cfg.domain));
  }
  if (cfg.filament) {
    for (const auto& w : validate(*cfg.filament, cfg.constants.R0)) warnings.push_back(w);
    const Vec3 res = check_closure(*cfg.filament);
    if (res.norm() > 1e-10) throw ConstraintError("filament violates closure", res);
  }
  if (cfg.simulation) {
    const auto& sim = *cfg.simulation;
    const FilamentState& s = need_block(cfg.filament, "filament");
    const auto curve = reconstruct_curve(s, sim.N);
    if (sim.mode == "nonlinear") {
      if (sim.N < 64) throw ValidationError("simulation.N", "nonlinear runs need at least 64 points");
      const double b = nonlinear_stability_bound(curve.points, cfg.constants.R0);
      if (sim.dt > b) throw StabilityError("simulation.dt exceeds the stability bound " + format_number(b), b);
    } else {
      const double b = linearized_stability_bound(sim.N);
      if (sim.dt > b) throw StabilityError("simulation.dt exceeds the stability bound " + format_number(b), b);
    }
  }
  if (!opt.quiet) {
    out << "config ok\n";
    for (const auto& w : warnings) out << "warning: " << w << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_command(const std::string& name, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> known{"dispersion", "simulate", "eigen", "spectrum", "validate"};
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    err << "error: unknown command '" << name << "'\n";
    return kExitValidation;
  }
  std::optional<RunConfig> cfg;
  Run run;
  run.command = name;
  bool can_write = false;
  try {
    if (!opt.config_path.empty()) {
      cfg = load_config(opt.config_path);
      run.config_path = opt.config_path;
      run.config_hash = fnv1a64_hex(cfg->canonical);
    }
    run.dir = !opt.out_dir.empty() ? opt.out_dir : cfg ? cfg->output_directory : "out";
    if (name == "validate") return cmd_validate(need(cfg, "validate"), opt, out);
    can_write = true;
    int code = kExitOk;
    if (name == "dispersion") cmd_dispersion(cfg, opt, run, out);
    if (name == "simulate") code = cmd_simulate(need(cfg, "simulate"), opt, run, out);
    if (name == "eigen") code = cmd_eigen(need(cfg, "eigen"), opt, run, out);
    if (name == "spectrum") code = cmd_spectrum(need(cfg, "spectrum"), opt, run, out);
    run.manifest();
    return code;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const AliasingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConnectivityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IncompleteSpectrumError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " [iterations " << e.iterations() << "]\n";
    if (can_write) run.manifest_failed(e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (can_write) run.manifest_failed(e.what());
    return kExitNumerical;
  }
}

}  // namespace vortex
