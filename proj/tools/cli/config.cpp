#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "cli.hpp"

namespace casimir_cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(x)) {
    throw UsageError("'" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

double to_positive(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (!(x > 0.0)) throw UsageError("'" + key + "' must be positive, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v, int min) {
  const std::string t = trim(v);
  char* end = nullptr;
  const long x = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || x < min || x > 100000000) {
    throw UsageError("'" + key + "' expects an integer >= " + std::to_string(min) + ", got '" + v + "'");
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw UsageError("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    parts.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return parts;
}

std::string normalise(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

double MotionSpec::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

MirrorSpec parse_mirror(const std::string& text) {
  MirrorSpec m;
  m.text = trim(text);
  if (m.text == "perfect") return m;
  if (m.text.rfind("file:", 0) == 0) {
    m.kind = MirrorSpec::Kind::File;
    m.path = m.text.substr(5);
    if (m.path.empty()) throw UsageError("mirror 'file:' needs a path");
    return m;
  }
  if (m.text == "lorentzian") {
    m.kind = MirrorSpec::Kind::Lorentzian;
    return m;
  }
  if (m.text.rfind("lorentzian:", 0) == 0) {
    m.kind = MirrorSpec::Kind::Lorentzian;
    const std::string rest = m.text.substr(11);
    if (rest.rfind("omega=", 0) != 0) throw UsageError("expected lorentzian:omega=<value>, got '" + text + "'");
    m.omega = to_positive("mirror omega", rest.substr(6));
    return m;
  }
  throw UsageError("unknown mirror '" + text + "' (perfect | lorentzian:omega=<val> | file:<path>)");
}

MotionSpec parse_motion(const std::string& text) {
  MotionSpec m;
  m.text = trim(text);
  const auto colon = m.text.find(':');
  m.kind = m.text.substr(0, colon);
  static const std::map<std::string, std::vector<std::string>> allowed = {
      {"rest", {}},
      {"pulse", {"amplitude", "center", "width"}},
      {"sinusoid", {"amplitude", "omega", "phase", "t_on", "ramp"}},
      {"poly", {"v", "a", "t_on", "ramp"}},
  };
  const auto kind = allowed.find(m.kind);
  if (kind == allowed.end()) throw UsageError("unknown motion '" + text + "' (rest | pulse | sinusoid | poly)");
  if (colon == std::string::npos) return m;
  for (const auto& item : split(m.text.substr(colon + 1), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("motion parameter '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    if (std::find(kind->second.begin(), kind->second.end(), key) == kind->second.end()) {
      throw UsageError("motion '" + m.kind + "' has no parameter '" + key + "'");
    }
    m.params[key] = to_double(key, item.substr(eq + 1));
  }
  return m;
}

std::vector<double> Sweep::values() const {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    v[static_cast<std::size_t>(k)] =
        log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
  }
  if (steps > 1) v.back() = max;
  return v;
}

Sweep parse_sweep(const std::string& text) {
  Sweep s;
  s.text = trim(text);
  const auto parts = split(s.text, ':');
  if (parts.size() != 4 && parts.size() != 5) {
    throw UsageError("sweep expects <param>:<min>:<max>:<steps>[:log], got '" + text + "'");
  }
  s.parameter = parts[0];
  if (s.parameter != "q" && s.parameter != "Omega") throw UsageError("sweep parameter must be q or Omega");
  s.min = to_positive("sweep min", parts[1]);
  s.max = to_positive("sweep max", parts[2]);
  if (s.max < s.min) throw UsageError("sweep max is below sweep min");
  s.steps = to_int("sweep steps", parts[3], 1);
  if (parts.size() == 5) {
    if (parts[4] == "log") {
      s.log = true;
    } else if (parts[4] != "linear") {
      throw UsageError("sweep spacing must be 'log' or 'linear'");
    }
  }
  return s;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "command", "q",        "mirror",   "mirror1", "mirror2", "omega",    "units",         "tol",
      "quad_tol", "sweep",   "out",      "format",  "manifest", "suite",   "omega_tau_max", "steps",
      "threads", "trajectory", "motion1", "motion2", "t0",      "dt",       "duration",      "ramp",
      "accel",   "mass1",    "mass2",    "cross_check"};
  return keys;
}

void apply_key(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = normalise(trim(raw_key));
  const std::string v = trim(value);
  if (key == "command") {
    cfg.command = v;
  } else if (key == "q") {
    cfg.q = to_positive(key, v);
  } else if (key == "mirror") {
    cfg.mirror1 = cfg.mirror2 = parse_mirror(v);
  } else if (key == "mirror1") {
    cfg.mirror1 = parse_mirror(v);
  } else if (key == "mirror2") {
    cfg.mirror2 = parse_mirror(v);
  } else if (key == "omega") {
    cfg.omega = to_positive(key, v);
  } else if (key == "units") {
    if (v != "natural" && v != "si") throw UsageError("units must be natural or si");
    cfg.units = v;
  } else if (key == "tol") {
    cfg.tol = to_positive(key, v);
  } else if (key == "quad_tol") {
    cfg.quad_tol = to_positive(key, v);
  } else if (key == "sweep") {
    cfg.sweep = parse_sweep(v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "format") {
    if (v != "csv" && v != "json") throw UsageError("format must be csv or json");
    cfg.format = v;
  } else if (key == "manifest") {
    cfg.manifest = v;
  } else if (key == "suite") {
    if (v != "all" && v != "static" && v != "spectral" && v != "physicality") {
      throw UsageError("suite must be all, static, spectral or physicality");
    }
    cfg.suite = v;
  } else if (key == "omega_tau_max") {
    cfg.omega_tau_max = to_positive(key, v);
  } else if (key == "steps") {
    cfg.steps = to_int(key, v, 1);
  } else if (key == "threads") {
    cfg.threads = to_int(key, v, 0);
  } else if (key == "trajectory") {
    cfg.trajectory = v;
  } else if (key == "motion1") {
    cfg.motion1 = parse_motion(v);
  } else if (key == "motion2") {
    cfg.motion2 = parse_motion(v);
  } else if (key == "t0") {
    cfg.t0 = to_double(key, v);
  } else if (key == "dt") {
    cfg.dt = to_positive(key, v);
  } else if (key == "duration") {
    cfg.duration = to_positive(key, v);
  } else if (key == "ramp") {
    cfg.ramp = to_positive(key, v);
  } else if (key == "accel") {
    cfg.accel = to_double(key, v);
  } else if (key == "mass1") {
    cfg.mass1 = to_positive(key, v);
  } else if (key == "mass2") {
    cfg.mass2 = to_positive(key, v);
  } else if (key == "cross_check") {
    cfg.cross_check = to_bool(key, v);
  } else {
    throw UsageError("unknown key '" + raw_key + "'");
  }
  cfg.given[key] = v;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands = {"coeffs", "force", "spectrum", "simulate", "rigidbody", "verify"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    throw UsageError("unknown command '" + cfg.command + "'");
  }
  if (cfg.sweep && cfg.command != "coeffs" && cfg.command != "verify") {
    throw UsageError("--sweep applies to coeffs and verify only");
  }
  const bool any_lorentzian =
      cfg.mirror1.kind == MirrorSpec::Kind::Lorentzian || cfg.mirror2.kind == MirrorSpec::Kind::Lorentzian;
  if (cfg.sweep && cfg.sweep->parameter == "Omega" && !any_lorentzian) {
    throw UsageError("sweeping Omega needs at least one Lorentzian mirror");
  }
  for (const MirrorSpec* m : {&cfg.mirror1, &cfg.mirror2}) {
    if (m->kind == MirrorSpec::Kind::Lorentzian && !m->omega && !cfg.omega &&
        !(cfg.sweep && cfg.sweep->parameter == "Omega")) {
      throw UsageError("Lorentzian mirror needs a cutoff: lorentzian:omega=<val> or --omega");
    }
  }
  if (!cfg.trajectory.empty() && (cfg.motion1.kind != "rest" || cfg.motion2.kind != "rest")) {
    throw UsageError("give either --trajectory or --motion1/--motion2, not both");
  }
}

}  // namespace casimir_cli
