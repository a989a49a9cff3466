#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir_cli {

/// Bad flags, unknown keys or values that do not parse. Exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A library call failed while computing. Exit status 1.
struct NumericalError : std::runtime_error {
  NumericalError(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

struct MirrorSpec {
  enum class Kind { Perfect, Lorentzian, File };
  Kind kind = Kind::Perfect;
  std::optional<double> omega;  // Lorentzian cutoff, if given inline
  std::string path;
  std::string text;
};

MirrorSpec parse_mirror(const std::string& text);

/// `rest`, `pulse:amplitude=..,center=..,width=..`,
/// `sinusoid:amplitude=..,omega=..,phase=..,t_on=..,ramp=..` or
/// `poly:v=..,a=..,t_on=..,ramp=..`.
struct MotionSpec {
  std::string kind = "rest";
  std::map<std::string, double> params;
  std::string text = "rest";
  double get(const std::string& key, double fallback) const;
};

MotionSpec parse_motion(const std::string& text);

struct Sweep {
  std::string parameter;  // "q" or "Omega"
  double min = 0.0, max = 0.0;
  int steps = 1;
  bool log = false;
  std::string text;

  std::vector<double> values() const;
};

Sweep parse_sweep(const std::string& text);

struct RunConfig {
  std::string command;
  double q = 1.0;
  MirrorSpec mirror1, mirror2;
  std::optional<double> omega;
  std::string units = "natural";
  std::optional<double> tol;
  double quad_tol = 1e-12;
  std::optional<Sweep> sweep;
  std::string out;
  std::string format = "csv";
  std::string manifest;
  std::string suite = "all";
  double omega_tau_max = 12.0;
  int steps = 2000;
  int threads = 0;
  std::string trajectory;
  MotionSpec motion1, motion2;
  double t0 = 0.0;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<double> ramp;
  std::optional<double> accel;
  double mass1 = 1.0, mass2 = 1.0;
  bool cross_check = false;

  /// Keys as they were set, for the manifest.
  std::map<std::string, std::string> given;
};

/// Every key the config file and the flags understand.
const std::vector<std::string>& known_keys();

/// Sets one key; '-' and '_' are interchangeable. Unknown keys and bad values throw UsageError.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` lines; blank lines and '#' comments are skipped.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Checks that hold across keys (command set, mirrors sensible for the command...).
void validate(const RunConfig& cfg);

struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;  // gap = |lhs − rhs| / scale
  double tol = 0.0;
  double gap() const;
  bool pass() const;
};

/// Formats with 17 significant digits, the fixed form used in every data file.
std::string fmt(double v);

/// Runs one configuration: writes data and manifest files, prints the report
/// to `out`, diagnostics to `err`, and returns the exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace casimir_cli
