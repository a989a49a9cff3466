#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>
#include <variant>

#include <json.hpp>

#include "casimir/casimir_c.h"
#include "cli.hpp"

namespace casimir_cli {

using nlohmann::ordered_json;

std::string fmt(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double Check::gap() const {
  const double s = scale > 0.0 ? scale : std::abs(rhs);
  const double diff = std::abs(lhs - rhs);
  if (s == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / s;
}

bool Check::pass() const { return std::isfinite(lhs) && gap() <= tol; }

namespace {

constexpr double kPi = std::numbers::pi;

// ---- library plumbing

void ok(casimir_status s) {
  if (s == CASIMIR_OK) return;
  const std::string msg = casimir_last_error();
  if (s == CASIMIR_ERR_INVALID_ARGUMENT || s == CASIMIR_ERR_IO) throw UsageError(msg);
  throw NumericalError(s, std::string(casimir_status_string(s)) + ": " + msg);
}

template <class T, void (*Free)(T*)>
class Owned {
 public:
  Owned() = default;
  Owned(Owned&& o) noexcept : p_(std::exchange(o.p_, nullptr)) {}
  Owned& operator=(Owned&& o) noexcept {
    std::swap(p_, o.p_);
    return *this;
  }
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  ~Owned() {
    if (p_ != nullptr) Free(p_);
  }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using Mirror = Owned<casimir_mirror, casimir_mirror_free>;
using Cavity = Owned<casimir_cavity, casimir_cavity_free>;
using Trajectory = Owned<casimir_trajectory, casimir_trajectory_free>;
using Force = Owned<casimir_force, casimir_force_free>;
using Trace = Owned<casimir_trace, casimir_trace_free>;

casimir_units units_of(const RunConfig& cfg) { return cfg.units == "si" ? CASIMIR_UNITS_SI : CASIMIR_UNITS_NATURAL; }

casimir_quadrature_settings settings_of(const RunConfig& cfg) {
  casimir_quadrature_settings s;
  casimir_quadrature_defaults(&s);
  s.rel_tol = cfg.quad_tol;
  return s;
}

double check_tol(const RunConfig& cfg, double fallback) { return cfg.tol.value_or(fallback); }

// One point of a run: the separation and the Lorentzian cutoff in force there.
struct Point {
  double q = 1.0;
  std::optional<double> omega;  // sweep override of every Lorentzian cutoff
  std::string label;            // suffix for check names in sweeps
};

std::optional<double> cutoff_of(const RunConfig& cfg, const MirrorSpec& m, const Point& p) {
  if (m.kind != MirrorSpec::Kind::Lorentzian) return std::nullopt;
  if (p.omega) return p.omega;
  if (m.omega) return m.omega;
  return cfg.omega;
}

Mirror make_mirror(const RunConfig& cfg, const MirrorSpec& m, const Point& p) {
  Mirror out;
  switch (m.kind) {
    case MirrorSpec::Kind::Perfect: ok(casimir_mirror_perfect(out.out())); break;
    case MirrorSpec::Kind::Lorentzian: ok(casimir_mirror_lorentzian(*cutoff_of(cfg, m, p), out.out())); break;
    case MirrorSpec::Kind::File: ok(casimir_mirror_from_csv(m.path.c_str(), out.out())); break;
  }
  return out;
}

struct Setup {
  Cavity cavity;
  double q = 1.0, tau = 1.0, hbar = 1.0, c = 1.0;
  bool both_perfect = false;
  bool both_partial = false;
};

Setup make_setup(const RunConfig& cfg, const Point& p) {
  Setup s;
  const Mirror m1 = make_mirror(cfg, cfg.mirror1, p);
  const Mirror m2 = make_mirror(cfg, cfg.mirror2, p);
  ok(casimir_cavity_create(p.q, m1.get(), m2.get(), units_of(cfg), s.cavity.out()));
  ok(casimir_cavity_info(s.cavity.get(), &s.q, &s.tau, nullptr));
  ok(casimir_cavity_constants(s.cavity.get(), &s.hbar, &s.c));
  const bool p1 = cfg.mirror1.kind == MirrorSpec::Kind::Perfect;
  const bool p2 = cfg.mirror2.kind == MirrorSpec::Kind::Perfect;
  s.both_perfect = p1 && p2;
  s.both_partial = !p1 && !p2;
  return s;
}

std::vector<Point> points_of(const RunConfig& cfg) {
  if (!cfg.sweep) return {Point{cfg.q, std::nullopt, ""}};
  std::vector<Point> pts;
  for (double v : cfg.sweep->values()) {
    Point p{cfg.q, std::nullopt, ""};
    char buf[48];
    std::snprintf(buf, sizeof buf, "[%s=%.6g]", cfg.sweep->parameter.c_str(), v);
    p.label = buf;
    if (cfg.sweep->parameter == "q") {
      p.q = v;
    } else {
      p.omega = v;
    }
    pts.push_back(p);
  }
  return pts;
}

// Runs fn(0..n-1) on a pool of workers. Results are stored by index by the
// caller, so the output order never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// ---- tables, reports and manifests

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      if (const double* d = std::get_if<double>(&row[k])) {
        os << fmt(*d);
      } else {
        os << csv_field(std::get<std::string>(row[k]));
      }
    }
    os << '\n';
  }
}

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void write_json(std::ostream& os, const Table& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (const double* d = std::get_if<double>(&row[k])) {
        obj[t.columns[k]] = number(*d);
      } else {
        obj[t.columns[k]] = std::get<std::string>(row[k]);
      }
    }
    rows.push_back(std::move(obj));
  }
  os << rows.dump(2) << '\n';
}

struct PointInfo {
  std::string label;
  double q = 0.0;
  std::optional<double> omega;
  std::string method;
  double achieved = 0.0;
  int evaluations = 0;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<Check> checks;
  std::vector<std::string> notices;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  std::vector<PointInfo> points;
  Table data;
  ordered_json extra = ordered_json::object();

  void result(const std::string& name, double v) { results.emplace_back(name, fmt(v)); }
  void result(const std::string& name, const std::string& v) { results.emplace_back(name, v); }
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  }
};

std::string method_name(casimir_method m) { return m == CASIMIR_METHOD_CLOSED_FORM ? "closed_form" : "quadrature"; }

ordered_json manifest_of(const RunConfig& cfg, const Report& r, const std::string& data_path) {
  ordered_json m;
  m["tool"] = "casimir";
  m["library_version"] = casimir_version();
  m["command"] = cfg.command;
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : cfg.given) inputs[k] = v;
  inputs["q"] = cfg.q;
  inputs["mirror1"] = cfg.mirror1.text;
  inputs["mirror2"] = cfg.mirror2.text;
  inputs["units"] = cfg.units;
  m["inputs"] = inputs;
  m["requested_tolerances"] = {{"quadrature_rel_tol", cfg.quad_tol},
                               {"check_tol_override", cfg.tol ? ordered_json(*cfg.tol) : ordered_json(nullptr)}};
  ordered_json pts = ordered_json::array();
  double worst = 0.0;
  for (const auto& p : r.points) {
    ordered_json j;
    j["label"] = p.label;
    j["q"] = p.q;
    j["Omega"] = p.omega ? ordered_json(*p.omega) : ordered_json(nullptr);
    j["method"] = p.method;
    j["achieved_tolerance"] = p.achieved;
    j["evaluations"] = p.evaluations;
    worst = std::max(worst, p.achieved);
    pts.push_back(j);
  }
  m["points"] = pts;
  m["achieved_tolerance_max"] = worst;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", number(c.lhs)},
                      {"rhs", number(c.rhs)},
                      {"gap", number(c.gap())},
                      {"tol", c.tol},
                      {"verdict", c.pass() ? "pass" : "fail"}});
  }
  m["checks"] = checks;
  m["all_pass"] = r.all_pass() && r.failures.empty();
  m["warnings"] = r.warnings;
  m["notices"] = r.notices;
  m["failures"] = r.failures;
  for (const auto& [k, v] : r.extra.items()) m[k] = v;
  m["outputs"] = {{"data", data_path}, {"format", cfg.format}, {"rows", r.data.rows.size()}};
  return m;
}

void emit_report(const Report& r, std::ostream& out) {
  out << "command: " << r.command << "  points: " << std::max<std::size_t>(r.points.size(), 1) << '\n';
  if (!r.results.empty()) {
    out << "\nresults\n";
    for (const auto& [k, v] : r.results) out << "  " << std::left << std::setw(22) << k << ' ' << v << '\n';
  }
  for (const auto& n : r.notices) out << "note: " << n << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  out << '\n';
  if (r.checks.empty()) {
    out << "no checks requested\n";
  } else {
    out << "identity checks\n";
    out << "  " << std::left << std::setw(40) << "name" << ' ' << std::setw(24) << "lhs" << ' ' << std::setw(24)
        << "rhs" << ' ' << std::setw(12) << "gap" << ' ' << std::setw(10) << "tol" << " verdict\n";
    for (const auto& c : r.checks) {
      char gap[32], tol[32];
      std::snprintf(gap, sizeof gap, "%.3e", c.gap());
      std::snprintf(tol, sizeof tol, "%.1e", c.tol);
      out << "  " << std::left << std::setw(40) << c.name << ' ' << std::setw(24) << fmt(c.lhs) << ' '
          << std::setw(24) << fmt(c.rhs) << ' ' << std::setw(12) << gap << ' ' << std::setw(10) << tol << ' '
          << (c.pass() ? "pass" : "fail") << '\n';
    }
    for (const auto& c : r.checks) out << c.name << ": " << (c.pass() ? "pass" : "fail") << '\n';
  }
  for (const auto& f : r.failures) out << "error: " << f << '\n';
}

// ---- per-point work shared by coeffs and verify

struct Statics {
  casimir_coefficients co{};
  casimir_statics st{};
};

Statics compute_statics(const RunConfig& cfg, const Setup& s) {
  Statics out;
  const auto settings = settings_of(cfg);
  ok(casimir_coefficients_compute(s.cavity.get(), &settings, &out.co));
  ok(casimir_statics_compute(s.cavity.get(), &settings, &out.st));
  return out;
}

PointInfo info_of(const RunConfig& cfg, const Point& p, const Statics& st) {
  PointInfo info;
  info.label = p.label;
  info.q = p.q;
  info.omega = p.omega ? p.omega : cutoff_of(cfg, cfg.mirror1, p);
  if (!info.omega) info.omega = cutoff_of(cfg, cfg.mirror2, p);
  info.method = method_name(st.co.method);
  info.achieved = std::max(st.co.achieved_tolerance, st.st.achieved_tolerance);
  info.evaluations = st.co.evaluations;
  return info;
}

void mass_checks(const RunConfig& cfg, const Setup& s, const Statics& st, const std::string& label,
                 std::vector<Check>& checks) {
  const double c2 = s.c * s.c;
  const bool closed = st.co.method == CASIMIR_METHOD_CLOSED_FORM;
  const double minus_2Fq = -2.0 * st.st.F * s.q / c2;
  checks.push_back({"mu_eq_minus_2Fq_c2" + label, st.co.mu_sum, minus_2Fq, 0.0, check_tol(cfg, closed ? 1e-12 : 1e-6)});
  if (s.both_perfect && st.st.has_U) {
    checks.push_back({"mu_c2_eq_2U" + label, st.co.mu_sum * c2, 2.0 * st.st.U, 0.0, check_tol(cfg, 1e-12)});
  } else {
    checks.push_back({"mu_dual_route" + label, st.co.mu_sum, st.co.mu_sum_direct, 0.0, check_tol(cfg, 1e-6)});
  }
}

// ---- coeffs

// The leading columns are the fixed coefficient-table layout; the rest
// carry the remaining entries and the bookkeeping.
const std::vector<std::string> kCoeffColumns = {
    "q",        "omega_cutoff", "kappa11",   "kappa12",    "lambda11", "lambda12", "mu11",
    "mu12",     "mu_sum",       "F",         "mu_identity_gap", "omega_cutoff2", "kappa22", "lambda22",
    "mu22",     "kappa_sum",    "lambda_sum", "mu_sum_direct", "U",     "E_f",      "delta_m",
    "method",   "achieved_tolerance", "evaluations"};

std::vector<Cell> coeff_row(const RunConfig& cfg, const Point& p, const Setup& s, const Statics& st) {
  const auto opt = [](std::optional<double> v) -> Cell { return v ? Cell(*v) : Cell(std::string()); };
  const auto& c = st.co;
  const Check identity{"", c.mu_sum, -2.0 * st.st.F * s.q / (s.c * s.c), 0.0, 0.0};
  return {p.q,
          opt(cutoff_of(cfg, cfg.mirror1, p)),
          c.kappa[0][0],
          c.kappa[0][1],
          c.lambda[0][0],
          c.lambda[0][1],
          c.mu[0][0],
          c.mu[0][1],
          c.mu_sum,
          st.st.F,
          identity.gap(),
          opt(cutoff_of(cfg, cfg.mirror2, p)),
          c.kappa[1][1],
          c.lambda[1][1],
          c.mu[1][1],
          c.kappa_sum,
          c.lambda_sum,
          c.mu_sum_direct,
          st.st.has_U ? Cell(st.st.U) : Cell(std::string()),
          st.st.E_f,
          st.st.delta_m,
          method_name(c.method),
          c.achieved_tolerance,
          static_cast<double>(c.evaluations)};
}

struct PointOutcome {
  std::vector<std::vector<Cell>> rows;
  std::vector<Check> checks;
  std::vector<std::string> notices;
  std::optional<PointInfo> info;
  std::string failure;
  std::exception_ptr usage;
};

template <class Body>
std::vector<PointOutcome> run_points(const RunConfig& cfg, const std::vector<Point>& pts, Body body) {
  std::vector<PointOutcome> outcomes(pts.size());
  parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
    try {
      body(pts[i], outcomes[i]);
    } catch (const UsageError&) {
      outcomes[i].usage = std::current_exception();
    } catch (const std::exception& e) {
      outcomes[i].failure = (pts[i].label.empty() ? "" : pts[i].label + " ") + e.what();
    }
  });
  return outcomes;
}

void collect(std::vector<PointOutcome>& outcomes, Report& r) {
  for (auto& o : outcomes) {
    if (o.usage) std::rethrow_exception(o.usage);
  }
  for (auto& o : outcomes) {
    for (auto& row : o.rows) r.data.rows.push_back(std::move(row));
    r.checks.insert(r.checks.end(), o.checks.begin(), o.checks.end());
    for (auto& n : o.notices) {
      if (std::find(r.notices.begin(), r.notices.end(), n) == r.notices.end()) r.notices.push_back(n);
    }
    if (o.info) r.points.push_back(*o.info);
    if (!o.failure.empty()) r.failures.push_back(o.failure);
  }
}

void command_coeffs(const RunConfig& cfg, Report& r) {
  r.data.columns = kCoeffColumns;
  const auto pts = points_of(cfg);
  auto outcomes = run_points(cfg, pts, [&](const Point& p, PointOutcome& o) {
    const Setup s = make_setup(cfg, p);
    const Statics st = compute_statics(cfg, s);
    o.rows.push_back(coeff_row(cfg, p, s, st));
    o.info = info_of(cfg, p, st);
    mass_checks(cfg, s, st, p.label, o.checks);
  });
  collect(outcomes, r);
  if (pts.size() == 1 && !r.data.rows.empty()) {
    const auto& row = r.data.rows.front();
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (const double* d = std::get_if<double>(&row[k])) {
        r.result(r.data.columns[k], *d);
      } else if (!std::get<std::string>(row[k]).empty()) {
        r.result(r.data.columns[k], std::get<std::string>(row[k]));
      }
    }
  }
}

// ---- verify

std::vector<double> file_grid(const std::string& path) {
  std::ifstream in(path);
  std::vector<double> grid;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const double w = std::strtod(line.c_str(), nullptr);
    if (w > 0.0) grid.push_back(w);
  }
  return grid;
}

void physicality_checks(const RunConfig& cfg, const Point& p, const MirrorSpec& spec, const std::string& name,
                        PointOutcome& o) {
  if (spec.kind == MirrorSpec::Kind::Perfect) {
    o.notices.push_back(name + " is perfect: exempt from the physicality checks");
    return;
  }
  std::vector<double> grid;
  if (spec.kind == MirrorSpec::Kind::Lorentzian) {
    const double omega = *cutoff_of(cfg, spec, p);
    const int n = 8000;
    for (int k = 1; k <= n; ++k) grid.push_back(400.0 * omega * k / n);
  } else {
    grid = file_grid(spec.path);
  }
  const Mirror m = make_mirror(cfg, spec, p);
  casimir_physicality_tolerances tol;
  casimir_physicality_defaults(&tol);
  casimir_physicality_report rep{};
  ok(casimir_mirror_verify(m.get(), grid.data(), grid.size(), &tol, &rep));
  const std::string prefix = name + "_";
  o.checks.push_back({prefix + "bound" + p.label, rep.max_bound_excess, 0.0, 1.0, check_tol(cfg, tol.bound)});
  o.checks.push_back(
      {prefix + "reality_symmetry" + p.label, rep.max_symmetry_residual, 0.0, 1.0, check_tol(cfg, tol.symmetry)});
  o.checks.push_back(
      {prefix + "transparency" + p.label, rep.transparency_tail, 0.0, 1.0, check_tol(cfg, tol.transparency)});
  o.checks.push_back(
      {prefix + "kramers_kronig" + p.label, rep.kk_residual, 0.0, 1.0, check_tol(cfg, tol.kramers_kronig)});
}

double compound_at(const Setup& s, double omega_tau, int* pole) {
  double disp = 0.0, diss = 0.0;
  const casimir_status st = casimir_chi_compound_perfect(s.cavity.get(), omega_tau / s.tau, 0.0, &disp, &diss);
  if (st == CASIMIR_ERR_POLE) {
    if (pole) *pole = casimir_last_pole_index();
    return std::numeric_limits<double>::quiet_NaN();
  }
  ok(st);
  if (pole) *pole = 0;
  return disp;
}

void spectral_checks(const RunConfig& cfg, const Setup& s, const Statics& st, const std::string& label,
                     PointOutcome& o) {
  const double kappa11 = std::abs(st.co.kappa[0][0]);
  if (s.both_perfect) {
    auto C = [&](int i, int j, double omega) {
      double v = 0.0;
      ok(casimir_fluctuation_spectrum(s.cavity.get(), i, j, omega, &v));
      return v;
    };
    const double unit = 1.0 / s.tau;
    const double scale = std::abs(C(1, 1, unit));
    double c12 = 0.0, c11_neg = 0.0;
    for (double x : {-7.0, -2.5, -1.0, -0.5, 0.5, 1.0, 2.5, 7.0}) {
      c12 = std::max(c12, std::abs(C(1, 2, x * unit)));
      if (x < 0) c11_neg = std::max(c11_neg, std::abs(C(1, 1, x * unit)));
    }
    o.checks.push_back({"fdt_C12_zero" + label, c12, 0.0, scale, check_tol(cfg, 1e-12)});
    o.checks.push_back({"fdt_C11_zero_below_0" + label, c11_neg, 0.0, scale, check_tol(cfg, 1e-12)});
    casimir_susceptibility chi{};
    ok(casimir_chi_perfect(s.cavity.get(), unit, 0.0, &chi));
    o.checks.push_back({"fdt_C11_eq_2hbar_xi11" + label, C(1, 1, unit), 2.0 * s.hbar * chi.im[0][0], 0.0,
                        check_tol(cfg, 1e-12)});
    const double limit = -2.0 * kPi * s.hbar * s.c / (3.0 * s.q * s.q * s.q);
    o.checks.push_back({"cancelled_pole_limit" + label, compound_at(s, kPi, nullptr), limit, 0.0, check_tol(cfg, 1e-8)});
    int pole = 0;
    compound_at(s, 3.0 * kPi, &pole);
    o.checks.push_back({"compound_pole_at_3pi" + label, static_cast<double>(pole), 3.0, 1.0, 0.0});
  } else if (s.both_partial) {
    const auto settings = settings_of(cfg);
    casimir_susceptibility chi{};
    ok(casimir_chi_a(s.cavity.get(), 0.0, &settings, &chi, nullptr, nullptr));
    o.checks.push_back({"chi_a_static_limit" + label, chi.re[0][0], -st.co.kappa[0][0], kappa11, check_tol(cfg, 1e-6)});
    const double h = 1e-3 / s.tau;
    ok(casimir_chi_a(s.cavity.get(), h, &settings, &chi, nullptr, nullptr));
    o.checks.push_back(
        {"chi_a_viscosity_slope" + label, chi.im[0][0] / h, st.co.lambda[0][0], 0.0, check_tol(cfg, 1e-4)});
  } else {
    o.notices.push_back("spectral suite skipped: needs both mirrors perfect or both partially transmitting");
  }
}

void static_checks(const RunConfig& cfg, const Setup& s, const Statics& st, const std::string& label,
                   PointOutcome& o) {
  const auto& co = st.co;
  const double kappa11 = std::abs(co.kappa[0][0]);
  o.checks.push_back({"kappa_sum_eq_0" + label, co.kappa_sum, 0.0, kappa11, check_tol(cfg, 1e-10)});
  o.checks.push_back({"lambda_sum_eq_0" + label, co.lambda_sum, 0.0, kappa11 * s.tau, check_tol(cfg, 1e-8)});

  const double h = s.q * 1e-4;
  const auto settings = settings_of(cfg);
  auto force_at = [&](double q) {
    Cavity moved;
    ok(casimir_cavity_with_separation(s.cavity.get(), q, moved.out()));
    casimir_statics f{};
    ok(casimir_statics_compute(moved.get(), &settings, &f));
    return f.F;
  };
  const double dFdq = (force_at(s.q + h) - force_at(s.q - h)) / (2.0 * h);
  o.checks.push_back({"kappa11_eq_dF_dq" + label, co.kappa[0][0], dFdq, 0.0, check_tol(cfg, 1e-5)});
  mass_checks(cfg, s, st, label, o.checks);
}

void command_verify(const RunConfig& cfg, Report& r) {
  r.data.columns = {"name", "lhs", "rhs", "gap", "tol", "verdict"};
  const bool want_static = cfg.suite == "all" || cfg.suite == "static";
  const bool want_spectral = cfg.suite == "all" || cfg.suite == "spectral";
  const bool want_phys = cfg.suite == "all" || cfg.suite == "physicality";
  const auto pts = points_of(cfg);
  auto outcomes = run_points(cfg, pts, [&](const Point& p, PointOutcome& o) {
    const Setup s = make_setup(cfg, p);
    const Statics st = compute_statics(cfg, s);
    o.info = info_of(cfg, p, st);
    if (want_static) static_checks(cfg, s, st, p.label, o);
    if (want_spectral) spectral_checks(cfg, s, st, p.label, o);
    if (want_phys) {
      physicality_checks(cfg, p, cfg.mirror1, "mirror1", o);
      physicality_checks(cfg, p, cfg.mirror2, "mirror2", o);
    }
  });
  collect(outcomes, r);
  for (const auto& c : r.checks) {
    r.data.rows.push_back({c.name, c.lhs, c.rhs, c.gap(), c.tol, std::string(c.pass() ? "pass" : "fail")});
  }
}

// ---- spectrum

void command_spectrum(const RunConfig& cfg, Report& r) {
  const Point p{cfg.q, std::nullopt, ""};
  const Setup s = make_setup(cfg, p);
  if (!s.both_perfect && !s.both_partial) {
    throw UsageError("spectrum needs both mirrors perfect or both partially transmitting");
  }
  const int n = cfg.steps;
  const double X = cfg.omega_tau_max;
  auto x_of = [&](int k) { return X * k / n; };
  std::vector<std::string> notes(static_cast<std::size_t>(n) + 1);
  ordered_json annotations = ordered_json::array();
  auto annotate = [&](double x, const std::string& text) {
    const auto k = static_cast<std::size_t>(std::clamp<long>(std::lround(x / X * n), 0, n));
    notes[k] += (notes[k].empty() ? "" : ";") + text;
    annotations.push_back({{"omega_tau", x}, {"omega", x / s.tau}, {"note", text}});
  };
  r.data.columns = {"omega",    "re_chi11",  "im_chi11", "re_chi12", "im_chi12",          "re_chi_sum",
                    "im_chi_sum", "omega_tau", "achieved_tolerance", "annotation"};
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  // chi11, chi12, sum as (re, im) and the achieved tolerance
  struct Row {
    double v[6] = {nan, nan, nan, nan, nan, nan};
    double achieved = 0.0;
    std::string failure;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n) + 1);
  const auto settings = settings_of(cfg);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t k) {
    auto& row = rows[k];
    const double omega = x_of(static_cast<int>(k)) / s.tau;
    casimir_susceptibility chi{};
    if (s.both_perfect) {
      // Poles are expected on the grid; they leave NaN and get annotated.
      if (casimir_chi_perfect(s.cavity.get(), omega, 0.0, &chi) == CASIMIR_OK) {
        row.v[0] = chi.re[0][0];
        row.v[1] = chi.im[0][0];
        row.v[2] = chi.re[0][1];
        row.v[3] = chi.im[0][1];
      }
      if (casimir_chi_compound_perfect(s.cavity.get(), omega, 0.0, &row.v[4], &row.v[5]) != CASIMIR_OK) {
        row.v[4] = row.v[5] = nan;
      }
      return;
    }
    double sum[2];
    if (casimir_chi_a(s.cavity.get(), omega, &settings, &chi, sum, &row.achieved) != CASIMIR_OK) {
      row.failure = casimir_last_error();
      return;
    }
    row.v[0] = chi.re[0][0];
    row.v[1] = chi.im[0][0];
    row.v[2] = chi.re[0][1];
    row.v[3] = chi.im[0][1];
    row.v[4] = sum[0];
    row.v[5] = sum[1];
  });

  double worst = 0.0;
  if (s.both_perfect) {
    auto poles = [&](int compound) {
      std::size_t count = 0;
      ok(casimir_perfect_poles(s.cavity.get(), 0.0, X / s.tau, compound, nullptr, 0, &count));
      std::vector<int> idx(count);
      ok(casimir_perfect_poles(s.cavity.get(), 0.0, X / s.tau, compound, idx.data(), idx.size(), &count));
      return idx;
    };
    const auto compound_poles = poles(1);
    std::string listed;
    for (int m : poles(0)) {
      const bool in_sum = std::find(compound_poles.begin(), compound_poles.end(), m) != compound_poles.end();
      annotate(m * kPi, (in_sum ? "pole m=" : "cancelled in sum m=") + std::to_string(m));
    }
    for (int m : compound_poles) listed += (listed.empty() ? "" : " ") + std::to_string(m);
    if (X >= kPi) annotate(kPi, "cancelled m=1");
    r.result("compound_poles_m", listed.empty() ? "none" : listed);
    if (X >= kPi) {
      const double limit = -2.0 * kPi * s.hbar * s.c / (3.0 * s.q * s.q * s.q);
      const double at_pi = compound_at(s, kPi, nullptr);
      r.result("re_chi_sum_at_pi", at_pi);
      r.checks.push_back({"cancelled_pole_limit", at_pi, limit, 0.0, check_tol(cfg, 1e-8)});
    }
    if (X >= 3.0 * kPi) {
      int pole = 0;
      compound_at(s, 3.0 * kPi, &pole);
      r.checks.push_back({"compound_pole_at_3pi", static_cast<double>(pole), 3.0, 1.0, 0.0});
    }
  } else {
    std::string changes;
    for (int k = 2; k <= n; ++k) {
      const double a = rows[static_cast<std::size_t>(k) - 1].v[4];
      const double b = rows[static_cast<std::size_t>(k)].v[4];
      if (a * b < 0.0) {
        annotate(x_of(k), "sign_change");
        changes += (changes.empty() ? "" : " ") + fmt(x_of(k));
      }
    }
    r.result("re_chi_sum_sign_changes_at_omega_tau", changes.empty() ? "none" : changes);
  }
  for (int k = 0; k <= n; ++k) {
    const auto& row = rows[static_cast<std::size_t>(k)];
    if (!row.failure.empty()) r.failures.push_back("omega_tau=" + fmt(x_of(k)) + ": " + row.failure);
    worst = std::max(worst, row.achieved);
    r.data.rows.push_back({x_of(k) / s.tau, row.v[0], row.v[1], row.v[2], row.v[3], row.v[4], row.v[5], x_of(k),
                           row.achieved, notes[static_cast<std::size_t>(k)]});
  }
  r.extra["annotations"] = annotations;
  r.points.push_back({"", s.q, cutoff_of(cfg, cfg.mirror1, p), s.both_perfect ? "closed_form" : "quadrature", worst, 0});
}

// ---- trajectories and forces

casimir_motion motion_of(const MotionSpec& m, double q, double tau, double duration, double ramp) {
  casimir_motion out{};
  out.ramp = m.get("ramp", ramp);
  out.t_on = m.get("t_on", 0.0);
  if (m.kind == "rest") {
    out.kind = CASIMIR_MOTION_REST;
  } else if (m.kind == "pulse") {
    out.kind = CASIMIR_MOTION_PULSE;
    out.amplitude = m.get("amplitude", 1e-6 * q);
    out.center = m.get("center", 0.5 * duration);
    out.width = m.get("width", 2.0 * tau);
  } else if (m.kind == "sinusoid") {
    out.kind = CASIMIR_MOTION_SINUSOID;
    out.amplitude = m.get("amplitude", 1e-6 * q);
    out.omega = m.get("omega", 0.1 / tau);
    out.phase = m.get("phase", 0.0);
  } else {
    out.kind = CASIMIR_MOTION_POLYNOMIAL;
    out.velocity = m.get("v", 0.0);
    out.acceleration = m.get("a", 0.0);
  }
  return out;
}

struct ForceColumns {
  std::vector<double> t, dq1, dq2, f1, f2, ft;
};

ForceColumns read_force(const casimir_trajectory* traj, const casimir_force* f) {
  ForceColumns c;
  const std::size_t n = casimir_force_size(f);
  const std::size_t m = casimir_trajectory_size(traj);
  c.t.resize(n);
  c.f1.resize(n);
  c.f2.resize(n);
  c.ft.resize(n);
  std::vector<double> tt(m);
  c.dq1.resize(m);
  c.dq2.resize(m);
  ok(casimir_force_data(f, c.t.data(), c.f1.data(), c.f2.data(), c.ft.data()));
  ok(casimir_trajectory_samples(traj, tt.data(), c.dq1.data(), c.dq2.data()));
  c.dq1.resize(n);
  c.dq2.resize(n);
  return c;
}

void force_messages(const casimir_force* f, Report& r) {
  for (std::size_t k = 0; k < casimir_force_message_count(f, 0); ++k) r.warnings.emplace_back(casimir_force_message(f, 0, k));
  for (std::size_t k = 0; k < casimir_force_message_count(f, 1); ++k) r.notices.emplace_back(casimir_force_message(f, 1, k));
}

struct ForceRun {
  Trajectory traj;
  Force force;
  casimir_coefficients co{};
  bool quasistatic = false;
};

ForceRun compute_force(const RunConfig& cfg, const Setup& s, Trajectory traj, Report& r) {
  ForceRun run;
  run.traj = std::move(traj);
  if (s.both_perfect) {
    ok(casimir_force_perfect(run.traj.get(), s.cavity.get(), 0.0, run.force.out()));
    ok(casimir_coefficients_perfect(s.cavity.get(), &run.co));
    r.points.push_back({"", s.q, std::nullopt, "delay_series", 0.0, 0});
  } else {
    const auto settings = settings_of(cfg);
    ok(casimir_coefficients_compute(s.cavity.get(), &settings, &run.co));
    ok(casimir_force_quasistatic(run.traj.get(), &run.co, s.tau, run.force.out()));
    run.quasistatic = true;
    r.points.push_back({"", s.q, cfg.omega, "quasistatic", run.co.achieved_tolerance, run.co.evaluations});
  }
  force_messages(run.force.get(), r);
  return run;
}

Table force_table(const ForceColumns& c, const std::vector<double>* spectral) {
  Table t;
  t.columns = {"t", "dF1", "dF2", "dF_total", "dq1", "dq2"};
  if (spectral) t.columns.push_back("dF_total_spectral");
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    std::vector<Cell> row = {c.t[k], c.f1[k], c.f2[k], c.ft[k], c.dq1[k], c.dq2[k]};
    if (spectral) row.emplace_back((*spectral)[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void command_force(const RunConfig& cfg, Report& r) {
  const Setup s = make_setup(cfg, Point{cfg.q, std::nullopt, ""});
  Trajectory traj;
  double settle = -std::numeric_limits<double>::infinity();
  if (!cfg.trajectory.empty()) {
    ok(casimir_trajectory_from_csv(cfg.trajectory.c_str(), traj.out()));
  } else {
    const double dt = cfg.dt.value_or(s.tau / 8.0);
    const double duration = cfg.duration.value_or(64.0 * s.tau);
    const double ramp = cfg.ramp.value_or(40.0 * s.tau);
    const auto m1 = motion_of(cfg.motion1, s.q, s.tau, duration, ramp);
    const auto m2 = motion_of(cfg.motion2, s.q, s.tau, duration, ramp);
    for (const auto& m : {m1, m2}) {
      if (m.kind == CASIMIR_MOTION_POLYNOMIAL || m.kind == CASIMIR_MOTION_SINUSOID) {
        settle = std::max(settle, m.t_on + m.ramp);
      }
    }
    const auto samples = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
    ok(casimir_trajectory_analytic(cfg.t0, dt, samples, &m1, &m2, traj.out()));
  }
  ForceRun run = compute_force(cfg, s, std::move(traj), r);
  const ForceColumns cols = read_force(run.traj.get(), run.force.get());
  r.result("samples", static_cast<double>(cols.t.size()));
  r.result("route", run.quasistatic ? "quasistatic" : "delay_series");
  if (!cfg.cross_check) {
    r.data = force_table(cols, nullptr);
    return;
  }
  Force spectral;
  if (run.quasistatic) {
    ok(casimir_force_spectral_quasistatic(run.traj.get(), &run.co, spectral.out()));
  } else {
    ok(casimir_force_spectral_perfect(run.traj.get(), s.cavity.get(), 1, spectral.out()));
  }
  force_messages(spectral.get(), r);
  const ForceColumns sc = read_force(run.traj.get(), spectral.get());
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < cols.t.size(); ++k) {
    if (cols.t[k] < settle) continue;
    diff = std::max(diff, std::abs(cols.ft[k] - sc.ft[k]));
    scale = std::max(scale, std::abs(cols.ft[k]));
  }
  r.checks.push_back({"time_frequency_agreement", diff, 0.0, scale, check_tol(cfg, 1e-4)});
  r.data = force_table(cols, &sc.ft);
}

// ---- simulate: the whole cavity accelerated uniformly

void command_simulate(const RunConfig& cfg, Report& r) {
  const Setup s = make_setup(cfg, Point{cfg.q, std::nullopt, ""});
  const double ramp = cfg.ramp.value_or(80.0 * s.tau);
  const double duration = cfg.duration.value_or(ramp + 40.0 * s.tau);
  if (!(duration > ramp)) throw UsageError("duration must exceed the switch-on ramp");
  const double dt = cfg.dt.value_or(s.tau / 8.0);
  const double a = cfg.accel.value_or(2e-4 * s.q / (duration * duration));
  casimir_motion m{};
  m.kind = CASIMIR_MOTION_POLYNOMIAL;
  m.acceleration = a;
  m.t_on = cfg.t0;
  m.ramp = ramp;
  Trajectory traj;
  const auto samples = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  ok(casimir_trajectory_analytic(cfg.t0, dt, samples, &m, &m, traj.out()));
  ForceRun run = compute_force(cfg, s, std::move(traj), r);
  const ForceColumns cols = read_force(run.traj.get(), run.force.get());
  const double steady = cols.ft.back();
  const double expected = -run.co.mu_sum * a;
  r.result("acceleration", a);
  r.result("mu_sum", run.co.mu_sum);
  r.result("steady_dF_total", steady);
  r.result("minus_mu_sum_a", expected);
  r.checks.push_back({"steady_force_eq_minus_mu_a", steady, expected, 0.0, check_tol(cfg, 1e-6)});
  r.data = force_table(cols, nullptr);
}

// ---- rigidbody

void command_rigidbody(const RunConfig& cfg, Report& r) {
  const Setup s = make_setup(cfg, Point{cfg.q, std::nullopt, ""});
  const Statics st = compute_statics(cfg, s);
  r.points.push_back(info_of(cfg, Point{cfg.q, std::nullopt, ""}, st));
  casimir_rigid_state initial{};
  ok(casimir_rigid_cavity_at_rest(s.q, cfg.mass1, cfg.mass2, st.st.F, st.st.E_f, units_of(cfg), &initial));
  const double duration = cfg.duration.value_or(10.0 * s.tau);
  const double dt = cfg.dt.value_or(s.tau / 100.0);
  const double a = cfg.accel.value_or(1e-4 * s.c / duration);
  Trace trace;
  ok(casimir_simulate_accelerated_cavity(&initial, a, duration, dt, 0.0, 0.0, trace.out()));
  casimir_trace_summary sum{};
  ok(casimir_trace_summary_of(trace.get(), &sum));
  std::vector<casimir_trace_row> rows(casimir_trace_size(trace.get()));
  ok(casimir_trace_rows(trace.get(), rows.data()));

  const double c2 = s.c * s.c;
  const double dm = casimir_mass_correction_of(st.st.E_f, st.st.F, s.q, s.c);
  r.result("acceleration", a);
  r.result("F", st.st.F);
  r.result("E_f", st.st.E_f);
  r.result("delta_m", dm);
  r.result("inertial_mass", sum.inertial_mass);
  r.result("expected_mass", sum.expected_mass);
  r.result("max_energy_drift", sum.max_energy_drift);
  r.checks.push_back({"momentum_residual", sum.max_relative_residual, 0.0, 1.0, check_tol(cfg, 1e-9)});
  r.checks.push_back({"inertial_mass", sum.inertial_mass, sum.expected_mass, 0.0, check_tol(cfg, 1e-6)});
  r.checks.push_back({"delta_m_eq_minus_2Fq_c2", dm, -2.0 * st.st.F * s.q / c2, 0.0, check_tol(cfg, 1e-12)});

  r.data.columns = {"t", "q1", "q2", "v", "e1", "e2", "E", "P", "Q", "residual_c2P_minus_EQprime"};
  for (const auto& row : rows) {
    r.data.rows.push_back({row.t, row.q1, row.q2, row.v, row.e1, row.e2, row.E, row.P, row.Q, row.residual});
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report r;
  r.command = cfg.command;
  try {
    if (cfg.command == "coeffs") {
      command_coeffs(cfg, r);
    } else if (cfg.command == "verify") {
      command_verify(cfg, r);
    } else if (cfg.command == "spectrum") {
      command_spectrum(cfg, r);
    } else if (cfg.command == "force") {
      command_force(cfg, r);
    } else if (cfg.command == "simulate") {
      command_simulate(cfg, r);
    } else {
      command_rigidbody(cfg, r);
    }
  } catch (const NumericalError& e) {
    r.failures.push_back(e.what());
  }

  if (!cfg.out.empty()) {
    std::ofstream data(cfg.out, std::ios::binary);
    if (!data) throw UsageError("cannot write '" + cfg.out + "'");
    if (cfg.format == "json") {
      write_json(data, r.data);
    } else {
      write_csv(data, r.data);
    }
  }
  const std::string manifest_path = !cfg.manifest.empty() ? cfg.manifest
                                    : cfg.out.empty()     ? std::string()
                                                          : cfg.out + ".manifest.json";
  if (!manifest_path.empty()) {
    std::ofstream m(manifest_path, std::ios::binary);
    if (!m) throw UsageError("cannot write '" + manifest_path + "'");
    m << manifest_of(cfg, r, cfg.out).dump(2) << '\n';
  }

  emit_report(r, out);
  for (const auto& f : r.failures) err << "casimir: " << f << '\n';
  if (!r.failures.empty()) return 1;
  return r.all_pass() ? 0 : 1;
}

}  // namespace casimir_cli
