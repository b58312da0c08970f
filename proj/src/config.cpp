#include "vortex/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vortex/dispersion.hpp"

namespace vortex {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
  return s;
}

class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& path, const std::string& msg) { problems.push_back(path + ": " + msg); }

  // Rejects keys outside `allowed`; false when `j` is not an object.
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) fail(path + "." + k, "unknown key");
    return true;
  }

  void number(const json& j, const char* key, const std::string& path, double& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) return fail(path + "." + key, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(path + "." + key, "must be finite");
  }

  void integer(const json& j, const char* key, const std::string& path, int& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) return fail(path + "." + key, "expected an integer");
    out = v.get<int>();
  }

  void boolean(const json& j, const char* key, const std::string& path, bool& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_boolean()) return fail(path + "." + key, "expected true or false");
    out = v.get<bool>();
  }

  void string(const json& j, const char* key, const std::string& path, std::string& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_string()) return fail(path + "." + key, "expected a string");
    out = v.get<std::string>();
  }

  bool require(const json& j, const char* key, const std::string& path) {
    if (j.contains(key)) return true;
    fail(path + "." + key, "missing");
    return false;
  }
};

void read_constants(Reader& rd, const json& j, PhysicalConstants& c) {
  if (!rd.object(j, "constants", {"rho0", "v0", "R0", "L", "mu0", "hbar", "epsilon"})) return;
  rd.number(j, "rho0", "constants", c.rho0);
  rd.number(j, "v0", "constants", c.v0);
  rd.number(j, "R0", "constants", c.R0);
  rd.number(j, "L", "constants", c.L);
  rd.number(j, "mu0", "constants", c.mu0);
  rd.number(j, "hbar", "constants", c.hbar);
  rd.number(j, "epsilon", "constants", c.epsilon);
  for (auto [name, v] : {std::pair{"rho0", c.rho0}, {"v0", c.v0}, {"R0", c.R0}, {"L", c.L}, {"mu0", c.mu0},
                         {"hbar", c.hbar}})
    if (!(v > 0.0)) rd.fail(std::string("constants.") + name, "must be positive");
  if (!(c.epsilon >= 0.0 && c.epsilon < 1.0)) rd.fail("constants.epsilon", "must satisfy 0 <= epsilon < 1");
}

std::optional<DomainSpec> read_domain(Reader& rd, const json& j, const std::string& base_dir) {
  if (!j.is_object()) {
    rd.fail("domain", "expected an object");
    return std::nullopt;
  }
  std::string shape;
  rd.string(j, "shape", "domain", shape);
  const std::size_t before = rd.problems.size();
  std::optional<DomainSpec> out;
  if (shape == "disk") {
    rd.object(j, "domain", {"shape", "radius"});
    Disk d;
    rd.number(j, "radius", "domain", d.radius);
    out = d;
  } else if (shape == "rectangle") {
    rd.object(j, "domain", {"shape", "a", "b"});
    Rectangle r;
    rd.number(j, "a", "domain", r.a);
    rd.number(j, "b", "domain", r.b);
    out = r;
  } else if (shape == "polygon") {
    rd.object(j, "domain", {"shape", "vertices"});
    Polygon p;
    if (rd.require(j, "vertices", "domain")) {
      const auto& v = j.at("vertices");
      if (!v.is_array()) {
        rd.fail("domain.vertices", "expected an array of [x, y]");
      } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
          const auto& e = v[i];
          if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            rd.fail("domain.vertices[" + std::to_string(i) + "]", "expected [x, y]");
            continue;
          }
          p.vertices.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
      }
    }
    out = p;
  } else if (shape == "mask") {
    rd.object(j, "domain", {"shape", "file", "rows", "h"});
    double h = 0.0;
    if (rd.require(j, "h", "domain")) rd.number(j, "h", "domain", h);
    const bool has_file = j.contains("file"), has_rows = j.contains("rows");
    if (has_file == has_rows) {
      rd.fail("domain", "give exactly one of 'file' or 'rows'");
    } else if (rd.problems.size() == before) {
      try {
        if (has_file) {
          std::string f;
          rd.string(j, "file", "domain", f);
          const std::filesystem::path p(f);
          out = load_mask((p.is_absolute() ? p : std::filesystem::path(base_dir) / p).string(), h);
        } else {
          const auto& rows = j.at("rows");
          std::string text;
          if (!rows.is_array()) throw ValidationError("domain.rows", "expected an array of strings");
          for (const auto& r : rows) {
            if (!r.is_string()) throw ValidationError("domain.rows", "expected an array of strings");
            text += r.get<std::string>() + "\n";
          }
          out = parse_mask(text, h);
        }
      } catch (const Error& e) {
        rd.fail("domain", e.what());
      }
    }
  } else {
    rd.fail("domain.shape", shape.empty() ? "missing" : "unknown shape '" + shape + "'");
    return std::nullopt;
  }
  if (out && rd.problems.size() == before) {
    try {
      validate_domain(*out, 0.0);
    } catch (const Error& e) {
      rd.fail("domain", e.what());
    }
  }
  return rd.problems.size() == before ? out : std::nullopt;
}

std::optional<FilamentState> read_filament(Reader& rd, const json& j, double epsilon) {
  if (!rd.object(j, "filament", {"q", "R", "Gamma", "n_max", "modes"})) return std::nullopt;
  const std::size_t before = rd.problems.size();
  FilamentState s;
  s.epsilon = epsilon;
  if (j.contains("q")) {
    const auto& q = j.at("q");
    if (!q.is_array() || q.size() != 3 || !q[0].is_number() || !q[1].is_number() || !q[2].is_number())
      rd.fail("filament.q", "expected [x, y, z]");
    else
      s.q = Vec3(q[0].get<double>(), q[1].get<double>(), q[2].get<double>());
  }
  rd.number(j, "R", "filament", s.R);
  rd.number(j, "Gamma", "filament", s.Gamma);
  rd.integer(j, "n_max", "filament", s.n_max);
  if (!(s.R > 0.0)) rd.fail("filament.R", "must be positive");
  if (s.n_max < 1) rd.fail("filament.n_max", "must be at least 1");

  ModeMap listed;
  if (j.contains("modes")) {
    const auto& m = j.at("modes");
    if (!m.is_array()) {
      rd.fail("filament.modes", "expected an array of [n, re, im]");
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& e = m[i];
        const std::string path = "filament.modes[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() || !e[2].is_number()) {
          rd.fail(path, "expected [n, re, im] with integer n");
          continue;
        }
        const int n = e[0].get<int>();
        if (listed.count(n)) {
          rd.fail(path, "mode " + std::to_string(n) + " listed twice");
          continue;
        }
        if (std::abs(n) > s.n_max) rd.fail(path, "|n| exceeds n_max = " + std::to_string(s.n_max));
        if (n == 0 && e[2].get<double>() != 0.0) rd.fail(path, "j_0 must be real");
        listed[n] = Complex(e[1].get<double>(), e[2].get<double>());
      }
    }
  }
  if (rd.problems.size() != before) return std::nullopt;
  for (const auto& [n, amp] : listed) {
    const auto partner = listed.find(-n);
    if (n != 0 && partner != listed.end()) {
      if (n < 0) continue;
      const double scale = std::max(std::abs(amp), std::abs(partner->second));
      if (std::abs(std::conj(partner->second) - coupling_factor(n) * amp) > 1e-12 * scale) {
        rd.fail("filament.modes", "modes " + std::to_string(n) + " and " + std::to_string(-n) +
                                      " violate conj(j_-n) = g_n j_n; list one of them only");
        continue;
      }
    }
    set_mode(s, n, amp);
  }
  try {
    validate(s);
  } catch (const Error& e) {
    rd.fail("filament", e.what());
  }
  return rd.problems.size() == before ? std::optional(s) : std::nullopt;
}

SimulationConfig read_simulation(Reader& rd, const json& j) {
  SimulationConfig s;
  if (!rd.object(j, "simulation", {"mode", "tau", "dt", "N", "output_every", "reparam_every", "mode_columns"}))
    return s;
  rd.string(j, "mode", "simulation", s.mode);
  rd.number(j, "tau", "simulation", s.tau);
  rd.number(j, "dt", "simulation", s.dt);
  rd.integer(j, "N", "simulation", s.N);
  rd.integer(j, "output_every", "simulation", s.output_every);
  rd.integer(j, "reparam_every", "simulation", s.reparam_every);
  if (j.contains("mode_columns")) {
    const auto& m = j.at("mode_columns");
    if (!m.is_array()) {
      rd.fail("simulation.mode_columns", "expected an array of integers");
    } else {
      for (const auto& e : m) {
        if (!e.is_number_integer()) {
          rd.fail("simulation.mode_columns", "expected an array of integers");
          break;
        }
        s.mode_columns.push_back(e.get<int>());
      }
    }
  }
  if (s.mode != "nonlinear" && s.mode != "linearized")
    rd.fail("simulation.mode", "expected 'nonlinear' or 'linearized'");
  if (!(s.tau >= 0.0)) rd.fail("simulation.tau", "must be nonnegative");
  if (s.dt < 0.0) rd.fail("simulation.dt", "must be nonnegative (0 picks a default)");
  if (s.N < 4) rd.fail("simulation.N", "must be at least 4");
  if (s.output_every < 0) rd.fail("simulation.output_every", "must be nonnegative");
  if (s.reparam_every < 0) rd.fail("simulation.reparam_every", "must be nonnegative");
  return s;
}

void read_sweep(Reader& rd, const json& j, SweepConfig& s) {
  if (!rd.object(j, "sweep", {"n_max", "k_max", "M", "bin_width", "include_n0"})) return;
  rd.integer(j, "n_max", "sweep", s.n_max);
  rd.integer(j, "k_max", "sweep", s.k_max);
  rd.integer(j, "M", "sweep", s.M);
  rd.number(j, "bin_width", "sweep", s.bin_width);
  rd.boolean(j, "include_n0", "sweep", s.include_n0);
  if (s.n_max < 1) rd.fail("sweep.n_max", "must be at least 1");
  if (s.k_max < -1) rd.fail("sweep.k_max", "must be -1 (rule limit) or nonnegative");
  if (s.M < 0) rd.fail("sweep.M", "must be nonnegative");
  if (!(s.bin_width > 0.0)) rd.fail("sweep.bin_width", "must be positive");
}

void read_grid(Reader& rd, const json& j, GridConfig& g) {
  if (!rd.object(j, "grid", {"h", "cells", "force"})) return;
  rd.number(j, "h", "grid", g.h);
  rd.integer(j, "cells", "grid", g.cells);
  rd.boolean(j, "force", "grid", g.force);
  if (g.h < 0.0) rd.fail("grid.h", "must be positive (0 derives it from cells)");
  if (g.cells < 32) rd.fail("grid.cells", "must be at least 32");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : ValidationError("config", join(problems)), problems_(std::move(problems)) {}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: malformed JSON: ") + e.what()});
  }
  Reader rd;
  RunConfig cfg;
  if (!rd.object(j, "config", {"constants", "domain", "filament", "simulation", "sweep", "grid", "dispersion", "output"}))
    throw ConfigError(rd.problems);

  if (j.contains("constants")) read_constants(rd, j.at("constants"), cfg.constants);
  if (j.contains("domain")) cfg.domain = read_domain(rd, j.at("domain"), base_dir);
  if (j.contains("filament")) cfg.filament = read_filament(rd, j.at("filament"), cfg.constants.epsilon);
  if (j.contains("simulation")) cfg.simulation = read_simulation(rd, j.at("simulation"));
  if (j.contains("sweep")) read_sweep(rd, j.at("sweep"), cfg.sweep);
  if (j.contains("grid")) read_grid(rd, j.at("grid"), cfg.grid);
  if (j.contains("dispersion")) {
    const auto& d = j.at("dispersion");
    if (rd.object(d, "dispersion", {"n_min", "n_max"})) {
      rd.integer(d, "n_min", "dispersion", cfg.dispersion.n_min);
      rd.integer(d, "n_max", "dispersion", cfg.dispersion.n_max);
    }
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (rd.object(o, "output", {"directory", "gnuplot"})) {
      rd.string(o, "directory", "output", cfg.output_directory);
      rd.boolean(o, "gnuplot", "output", cfg.gnuplot);
      if (cfg.output_directory.empty()) rd.fail("output.directory", "must not be empty");
    }
  }
  if (!rd.problems.empty()) throw ConfigError(rd.problems);
  cfg.canonical = j.dump();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"config: cannot open " + path});
  std::stringstream ss;
  ss << f.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vortex
