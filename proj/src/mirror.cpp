#include "casimir/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "casimir/error.hpp"

namespace casimir {

namespace {

constexpr cd kI{0.0, 1.0};

std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

MirrorModel MirrorModel::perfect(std::string label) {
  MirrorModel m;
  m.kind_ = MirrorKind::Perfect;
  m.label_ = std::move(label);
  return m;
}

MirrorModel MirrorModel::lorentzian(double cutoff, std::string label) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw Error(ErrorCode::InvalidArgument, "lorentzian cutoff must be positive and finite");
  }
  MirrorModel m;
  m.kind_ = MirrorKind::Lorentzian;
  m.cutoff_ = cutoff;
  m.label_ = label.empty() ? "lorentzian" : std::move(label);
  return m;
}

MirrorModel MirrorModel::tabulated(std::vector<double> omega, std::vector<cd> r, std::string label) {
  if (omega.size() != r.size()) {
    throw Error(ErrorCode::InvalidArgument, "tabulated mirror: omega and r differ in length");
  }
  if (omega.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "tabulated mirror: need at least 3 samples");
  }
  if (omega.front() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "tabulated mirror: omega must be >= 0");
  }
  for (std::size_t k = 1; k < omega.size(); ++k) {
    if (!(omega[k] > omega[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "tabulated mirror: omega must be strictly increasing");
    }
  }
  for (const cd& v : r) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::InvalidArgument, "tabulated mirror: non-finite amplitude");
    }
  }
  if (omega.front() == 0.0) {
    if (std::abs(r.front().imag()) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument,
                  "tabulated mirror: r[0] must be real (reality symmetry)");
    }
    r.front() = r.front().real();
  }

  MirrorModel m;
  m.kind_ = MirrorKind::Tabulated;
  m.label_ = std::move(label);
  m.omega_ = std::move(omega);
  m.r_ = std::move(r);

  // centered differences at interior nodes, one-sided at the ends; at ω = 0
  // the mirrored neighbour conj(r[ω₁]) is used so the derivative stays odd-consistent
  const auto n = m.omega_.size();
  m.dr_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0) {
      if (m.omega_[0] == 0.0) {
        m.dr_[0] = (m.r_[1] - std::conj(m.r_[1])) / (2.0 * m.omega_[1]);
      } else {
        m.dr_[0] = (m.r_[1] - m.r_[0]) / (m.omega_[1] - m.omega_[0]);
      }
    } else if (k == n - 1) {
      m.dr_[k] = (m.r_[k] - m.r_[k - 1]) / (m.omega_[k] - m.omega_[k - 1]);
    } else {
      m.dr_[k] = (m.r_[k + 1] - m.r_[k - 1]) / (m.omega_[k + 1] - m.omega_[k - 1]);
    }
  }
  return m;
}

MirrorModel MirrorModel::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open mirror table '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "omega,re_r,im_r") {
    throw Error(ErrorCode::InvalidArgument,
                "mirror table '" + path + "': expected header 'omega,re_r,im_r'");
  }
  std::vector<double> omega;
  std::vector<cd> r;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
      throw Error(ErrorCode::InvalidArgument,
                  path + ":" + std::to_string(lineno) + ": expected three columns");
    }
    try {
      omega.push_back(std::stod(a));
      r.emplace_back(std::stod(b), std::stod(c));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return tabulated(std::move(omega), std::move(r), path);
}

double MirrorModel::support_max() const noexcept {
  if (kind_ == MirrorKind::Tabulated) return omega_.back();
  return std::numeric_limits<double>::infinity();
}

void MirrorModel::require_in_grid(double abs_omega) const {
  if (abs_omega < omega_.front() || abs_omega > omega_.back() || std::isnan(abs_omega)) {
    std::ostringstream os;
    os << "frequency " << abs_omega << " outside tabulated span [" << omega_.front() << ", "
       << omega_.back() << "] of mirror '" << label_ << "'";
    throw Error(ErrorCode::Range, os.str());
  }
}

cd MirrorModel::interpolate(double w) const {
  require_in_grid(w);
  auto it = std::upper_bound(omega_.begin(), omega_.end(), w);
  std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - omega_.begin()), omega_.size() - 1);
  std::size_t lo = hi - 1;
  double t = (w - omega_[lo]) / (omega_[hi] - omega_[lo]);
  return {(1.0 - t) * r_[lo].real() + t * r_[hi].real(), (1.0 - t) * r_[lo].imag() + t * r_[hi].imag()};
}

cd MirrorModel::interpolate_derivative(double w) const {
  require_in_grid(w);
  auto it = std::upper_bound(omega_.begin(), omega_.end(), w);
  std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - omega_.begin()), omega_.size() - 1);
  std::size_t lo = hi - 1;
  double t = (w - omega_[lo]) / (omega_[hi] - omega_[lo]);
  return (1.0 - t) * dr_[lo] + t * dr_[hi];
}

cd MirrorModel::reflectivity(double omega) const {
  switch (kind_) {
    case MirrorKind::Perfect:
      return -1.0;
    case MirrorKind::Lorentzian:
      return -1.0 / (1.0 - kI * (omega / cutoff_));
    case MirrorKind::Tabulated: {
      cd v = interpolate(std::abs(omega));
      return omega < 0.0 ? std::conj(v) : v;
    }
  }
  return 0.0;
}

cd MirrorModel::reflectivity(cd omega) const {
  switch (kind_) {
    case MirrorKind::Perfect:
      return -1.0;
    case MirrorKind::Lorentzian:
      return -1.0 / (1.0 - kI * (omega / cutoff_));
    case MirrorKind::Tabulated:
      if (omega.imag() == 0.0) return reflectivity(omega.real());
      throw Error(ErrorCode::UnsupportedModel,
                  "tabulated mirror '" + label_ + "' has no analytic continuation");
  }
  return 0.0;
}

cd MirrorModel::derivative(double omega) const {
  switch (kind_) {
    case MirrorKind::Perfect:
      return 0.0;
    case MirrorKind::Lorentzian: {
      cd den = 1.0 - kI * (omega / cutoff_);
      return -(kI / cutoff_) / (den * den);
    }
    case MirrorKind::Tabulated: {
      cd v = interpolate_derivative(std::abs(omega));
      // r[−ω] = conj r[ω]  ⇒  r'[−ω] = −conj r'[ω]
      return omega < 0.0 ? -std::conj(v) : v;
    }
  }
  return 0.0;
}

cd MirrorModel::derivative(cd omega) const {
  switch (kind_) {
    case MirrorKind::Perfect:
      return 0.0;
    case MirrorKind::Lorentzian: {
      cd den = 1.0 - kI * (omega / cutoff_);
      return -(kI / cutoff_) / (den * den);
    }
    case MirrorKind::Tabulated:
      if (omega.imag() == 0.0) return derivative(omega.real());
      throw Error(ErrorCode::UnsupportedModel,
                  "tabulated mirror '" + label_ + "' has no analytic continuation");
  }
  return 0.0;
}

cd MirrorModel::deficit(double omega) const { return deficit(cd(omega, 0.0)); }

cd MirrorModel::deficit(cd omega) const {
  switch (kind_) {
    case MirrorKind::Perfect:
      return 0.0;
    case MirrorKind::Lorentzian: {
      // −r − 1 = (iω/Ω)/(1 − iω/Ω)
      cd x = kI * (omega / cutoff_);
      return x / (1.0 - x);
    }
    case MirrorKind::Tabulated:
      return -reflectivity(omega) - 1.0;
  }
  return 0.0;
}

MirrorModel::Transmission MirrorModel::transmission(double omega) const {
  if (kind_ == MirrorKind::Perfect) return {0.0, false};
  return {1.0 + reflectivity(omega), true};
}

MirrorModel MirrorModel::rescaled(double factor) const {
  MirrorModel m = *this;
  if (factor == 1.0) return m;
  m.cutoff_ *= factor;
  for (double& w : m.omega_) w *= factor;
  for (cd& d : m.dr_) d /= factor;
  return m;
}

std::string MirrorModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case MirrorKind::Perfect:
      return "perfect";
    case MirrorKind::Lorentzian:
      os << "lorentzian:omega=" << cutoff_;
      return os.str();
    case MirrorKind::Tabulated:
      return "file:" + label_;
  }
  return {};
}

// ---------------------------------------------------------------------------

namespace {

/// Discrete principal-value Hilbert transform on a positive grid, returning
/// the Im r predicted from Re r (even) for every interior node in `nodes`.
/// Uses Im r(ω) = −(2ω/π) P∫₀^∞ Re r(ω')/(ω'² − ω²) dω' with the singular
/// part subtracted and integrated in closed form.
double kk_max_residual(std::span<const double> grid, std::span<const double> re,
                       std::span<const double> im) {
  const std::size_t n = grid.size();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::hypot(re[k], im[k]));
  if (scale == 0.0) return 0.0;
  const double wmax = grid.back();

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double w = grid[k];
    if (w <= 0.0) continue;
    auto g = [&](std::size_t j) {
      if (j == k) {
        double slope = (re[k + 1] - re[k - 1]) / (grid[k + 1] - grid[k - 1]);
        return slope / (2.0 * w);
      }
      return (re[j] - re[k]) / (grid[j] * grid[j] - w * w);
    };
    double integral = 0.0;
    // segment [0, grid[0]]: Re r is even, so take it flat at its first value
    if (grid[0] > 0.0) {
      double g0 = (re[0] - re[k]) / (0.0 - w * w);
      integral += 0.5 * grid[0] * (g0 + g(0));
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      integral += 0.5 * (grid[j + 1] - grid[j]) * (g(j) + g(j + 1));
    }
    // P∫₀^{ωmax} dω'/(ω'² − ω²) = (1/2ω) ln((ωmax − ω)/(ωmax + ω))
    integral += re[k] * std::log((wmax - w) / (wmax + w)) / (2.0 * w);
    double predicted = -(2.0 * w / std::numbers::pi) * integral;
    worst = std::max(worst, std::abs(predicted - im[k]));
  }
  return worst / scale;
}

}  // namespace

PhysicalityReport verify_physicality(const MirrorModel& model, std::span<const double> grid,
                                     const PhysicalityTolerances& tol) {
  if (grid.size() < 4) throw Error(ErrorCode::InvalidArgument, "physicality grid needs >= 4 points");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0) || (k > 0 && !(grid[k] > grid[k - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "physicality grid must be positive and increasing");
    }
  }

  PhysicalityReport rep;
  if (model.is_perfect()) {
    rep.exempt = true;
    rep.transparent = false;
    rep.transparency_tail = 1.0;
    rep.passes = true;
    return rep;
  }

  std::vector<double> re(grid.size()), im(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    cd r = model.reflectivity(grid[k]);
    cd rm = model.reflectivity(-grid[k]);
    re[k] = r.real();
    im[k] = r.imag();
    rep.max_bound_excess = std::max(rep.max_bound_excess, std::abs(r) - 1.0);
    rep.max_symmetry_residual = std::max(rep.max_symmetry_residual, std::abs(rm - std::conj(r)));
  }
  rep.max_bound_excess = std::max(rep.max_bound_excess, 0.0);
  rep.transparency_tail = std::abs(model.reflectivity(grid.back()));
  rep.transparent = rep.transparency_tail <= tol.transparency;

  rep.kk_residual = kk_max_residual(grid, re, im);
  std::vector<double> g2, re2, im2;
  for (std::size_t k = 0; k < grid.size(); k += 2) {
    g2.push_back(grid[k]);
    re2.push_back(re[k]);
    im2.push_back(im[k]);
  }
  rep.kk_residual_coarse = g2.size() >= 4 ? kk_max_residual(g2, re2, im2) : rep.kk_residual;

  rep.passes = rep.max_bound_excess <= tol.bound && rep.max_symmetry_residual <= tol.symmetry &&
               rep.transparent && rep.kk_residual <= tol.kramers_kronig;
  return rep;
}

}  // namespace casimir
