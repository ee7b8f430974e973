#include "oss/nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "oss/quadrature.hpp"
#include "oss/rootfind.hpp"

namespace oss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^u - u - 1 without cancellation near 0.
double exp_phi_value(double u) {
  u = std::abs(u);
  if (u < 1e-3) {
    return u * u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u / 120.0)));
  }
  return std::expm1(u) - u;
}

// (1+v) log(1+v) - v without cancellation near 0.
double exp_psi_value(double v) {
  v = std::abs(v);
  if (v < 1e-3) {
    return v * v * (0.5 - v * (1.0 / 6.0 - v * (1.0 / 12.0 - v / 20.0)));
  }
  return (1.0 + v) * std::log1p(v) - v;
}

}  // namespace

NFunction NFunction::exp_phi() {
  NFunction f;
  f.kind_ = Kind::exp_phi;
  f.shape_ = DerivativeShape::convex;  // p(t) = e^t - 1
  f.name_ = "exp_phi";
  return f;
}

NFunction NFunction::exp_psi() {
  NFunction f;
  f.kind_ = Kind::exp_psi;
  f.shape_ = DerivativeShape::concave;  // q(s) = log(1+s)
  f.name_ = "exp_psi";
  return f;
}

NFunction NFunction::power(double alpha) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("NFunction::power: alpha must exceed 1");
  }
  NFunction f;
  f.kind_ = Kind::power;
  f.alpha_ = alpha;
  if (alpha == 2.0) {
    f.shape_ = DerivativeShape::linear;
  } else {
    f.shape_ = alpha > 2.0 ? DerivativeShape::convex : DerivativeShape::concave;
  }
  f.name_ = "power(" + std::to_string(alpha) + ")";
  return f;
}

NFunction NFunction::from_derivative(std::function<double(double)> p,
                                     std::string name,
                                     DerivativeShape shape) {
  NFunction f;
  f.kind_ = Kind::from_derivative;
  f.shape_ = shape;
  f.p_ = std::move(p);
  f.name_ = std::move(name);
  return f;
}

NFunction NFunction::from_table(std::vector<double> t, std::vector<double> p,
                                std::string name) {
  if (t.size() != p.size() || t.size() < 2) {
    throw std::invalid_argument("NFunction::from_table: need matched samples");
  }
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    if (!(t[i + 1] > t[i])) {
      throw std::invalid_argument("NFunction::from_table: t must increase");
    }
  }
  NFunction f;
  f.kind_ = Kind::from_derivative;
  f.shape_ = DerivativeShape::unknown;
  f.tabulated_ = true;
  f.name_ = std::move(name);
  // Prepend the origin: an N-function derivative starts at p(0) = 0.
  if (t.front() > 0.0) {
    t.insert(t.begin(), 0.0);
    p.insert(p.begin(), 0.0);
  }
  // Exact prefix integral of the piecewise-linear derivative.
  f.tab_prefix_.assign(t.size(), 0.0);
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    f.tab_prefix_[i + 1] = f.tab_prefix_[i] +
        0.5 * (p[i] + p[i + 1]) * (t[i + 1] - t[i]);
  }
  f.tab_t_ = std::move(t);
  f.tab_p_ = std::move(p);
  return f;
}

double NFunction::derivative(double t) const {
  t = std::abs(t);
  switch (kind_) {
    case Kind::exp_phi:
      return std::expm1(t);
    case Kind::exp_psi:
      return std::log1p(t);
    case Kind::power:
      return t == 0.0 ? 0.0 : alpha_ * std::pow(t, alpha_ - 1.0);
    case Kind::from_derivative: {
      if (!tabulated_) return t == 0.0 ? 0.0 : p_(t);
      if (t <= tab_t_.front()) return tab_p_.front();
      if (t >= tab_t_.back()) {
        // extend with the final segment slope
        const size_t n = tab_t_.size();
        const double slope = (tab_p_[n - 1] - tab_p_[n - 2]) /
                             (tab_t_[n - 1] - tab_t_[n - 2]);
        return tab_p_[n - 1] + slope * (t - tab_t_[n - 1]);
      }
      const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
      const size_t i = static_cast<size_t>(it - tab_t_.begin()) - 1;
      const double w = (t - tab_t_[i]) / (tab_t_[i + 1] - tab_t_[i]);
      return tab_p_[i] + w * (tab_p_[i + 1] - tab_p_[i]);
    }
  }
  return 0.0;
}

double NFunction::integral_of_derivative(double u) const {
  if (tabulated_) {
    if (u <= tab_t_.back()) {
      const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), u);
      const size_t i = std::min(static_cast<size_t>(it - tab_t_.begin()),
                                tab_t_.size() - 1) - 1;
      const double pa = tab_p_[i];
      const double pu = derivative(u);
      return tab_prefix_[i] + 0.5 * (pa + pu) * (u - tab_t_[i]);
    }
    const double pu = derivative(u);
    return tab_prefix_.back() +
           0.5 * (tab_p_.back() + pu) * (u - tab_t_.back());
  }
  return integrate_simpson([this](double t) { return derivative(t); }, 0.0, u);
}

double NFunction::eval(double u) const {
  u = std::abs(u);
  switch (kind_) {
    case Kind::exp_phi:
      if (u > 709.0) return kInf;
      return exp_phi_value(u);
    case Kind::exp_psi:
      return exp_psi_value(u);
    case Kind::power:
      return std::pow(u, alpha_);
    case Kind::from_derivative:
      return u == 0.0 ? 0.0 : integral_of_derivative(u);
  }
  return 0.0;
}

PhiValue NFunction::eval_checked(double u) const {
  u = std::abs(u);
  if (kind_ == Kind::exp_phi && u > domain_cap_) {
    const double v = eval(u);
    return {std::isfinite(v) ? v : std::numeric_limits<double>::max(), true};
  }
  const double v = eval(u);
  if (!std::isfinite(v)) {
    return {std::numeric_limits<double>::max(), true};
  }
  return {v, false};
}

double NFunction::log_eval(double u) const {
  u = std::abs(u);
  if (kind_ == Kind::exp_phi && u > domain_cap_) {
    // log(e^u - u - 1) = u + log(1 - (u+1) e^-u); the correction underflows
    // well before u reaches the cap region boundary at 709.
    const double corr = (u + 1.0) * std::exp(-u);
    return u + std::log1p(-corr);
  }
  return std::log(eval(u));
}

double NFunction::inverse(double y) const {
  if (y < 0.0) throw std::domain_error("NFunction::inverse: negative input");
  if (y == 0.0) return 0.0;
  if (kind_ == Kind::power) return std::pow(y, 1.0 / alpha_);
  double hint = 1.0;
  if (kind_ == Kind::exp_phi && y > 1.0) hint = std::log1p(y);
  if (kind_ == Kind::exp_psi && y > 1.0) hint = y;
  return invert_increasing([this](double u) { return eval(u); }, y, hint);
}

double NFunction::inverse_from_log(double log_y) const {
  if (kind_ == Kind::exp_phi && log_y > domain_cap_) {
    // solve u + log1p(-(u+1)e^-u) = log_y; the correction is negligible here
    double u = log_y;
    for (int i = 0; i < 4; ++i) {
      const double corr = (u + 1.0) * std::exp(-u);
      u = log_y - std::log1p(-corr);
    }
    return u;
  }
  return inverse(std::exp(log_y));
}

ComplementaryPair::ComplementaryPair(std::string id, NFunction phi,
                                     NFunction psi,
                                     std::function<double(double)> q_left)
    : id_(std::move(id)),
      phi_(std::move(phi)),
      psi_(std::move(psi)),
      q_left_(std::move(q_left)) {}

ComplementaryPair ComplementaryPair::exp_pair() {
  return ComplementaryPair("exp", NFunction::exp_phi(), NFunction::exp_psi(),
                           [](double s) { return std::log1p(s); });
}

ComplementaryPair ComplementaryPair::power_pair(double alpha) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("power pair: alpha must exceed 1");
  }
  const double beta = alpha / (alpha - 1.0);
  std::ostringstream id;
  id << "power:" << alpha;
  return ComplementaryPair(
      id.str(), NFunction::power(alpha), NFunction::power(beta),
      [alpha](double s) {
        return s == 0.0 ? 0.0 : std::pow(s / alpha, 1.0 / (alpha - 1.0));
      });
}

ComplementaryPair ComplementaryPair::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open derivative table: " + path);
  std::vector<double> t, p;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double ti, pi;
    if (row >> ti >> pi) {
      t.push_back(ti);
      p.push_back(pi);
    }
  }
  if (t.size() < 2) {
    throw std::runtime_error("derivative table needs at least two rows: " + path);
  }
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    if (!(p[i + 1] > p[i])) {
      throw std::runtime_error("derivative table must strictly increase: " + path);
    }
  }
  NFunction phi = NFunction::from_table(t, p, "phi[" + path + "]");
  // q is the reflected table: swap roles of t and p.
  NFunction psi = NFunction::from_table(p, t, "psi[" + path + "]");
  auto tt = t;
  auto pp = p;
  if (pp.front() > 0.0) {
    pp.insert(pp.begin(), 0.0);
    tt.insert(tt.begin(), 0.0);
  }
  auto q = [tt, pp](double s) {
    s = std::abs(s);
    if (s >= pp.back()) {
      const size_t n = pp.size();
      const double slope = (tt[n - 1] - tt[n - 2]) / (pp[n - 1] - pp[n - 2]);
      return tt[n - 1] + slope * (s - pp[n - 1]);
    }
    const auto it = std::upper_bound(pp.begin(), pp.end(), s);
    const size_t i = static_cast<size_t>(it - pp.begin()) - 1;
    const double w = (s - pp[i]) / (pp[i + 1] - pp[i]);
    return tt[i] + w * (tt[i + 1] - tt[i]);
  };
  return ComplementaryPair("file:" + path, std::move(phi), std::move(psi),
                           std::move(q));
}

ComplementaryPair ComplementaryPair::parse(const std::string& id) {
  if (id == "exp") return exp_pair();
  if (id.rfind("power:", 0) == 0) {
    const double alpha = std::stod(id.substr(6));
    return power_pair(alpha);
  }
  if (id.rfind("file:", 0) == 0) return from_file(id.substr(5));
  throw std::invalid_argument("unknown pair id: " + id);
}

double ComplementaryPair::q_left(double s) const { return q_left_(std::abs(s)); }

double legendre_conjugate(const NFunction& nf, double v, double u_max) {
  v = std::abs(v);
  if (v == 0.0) return 0.0;
  if (!(u_max > 0.0) || nf.derivative(u_max) <= v) {
    throw std::invalid_argument(
        "legendre_conjugate: p(u_max) must exceed |v|; enlarge u_max");
  }
  // The objective u*v - Phi(u) is concave; its maximiser solves p(u) = v.
  double lo = 0.0, hi = u_max;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) break;
    (nf.derivative(mid) < v ? lo : hi) = mid;
  }
  const double u = 0.5 * (lo + hi);
  return u * v - nf.eval(u);
}

double ComplementaryPair::legendre_conjugate(double v, double u_max) const {
  return oss::legendre_conjugate(phi_, v, u_max);
}

double ComplementaryPair::young_gap(double u, double v) const {
  return phi_.eval(u) + psi_.eval(v) - std::abs(u * v);
}

double ComplementaryPair::lemma1_ratio(double u, long n) const {
  if (!(u > 0.0)) throw std::domain_error("lemma1_ratio: u must be positive");
  const double m = static_cast<double>(n) + 1.0;
  return psi_.eval(u / m) / (psi_.eval(1.0 / m) * psi_.eval(u));
}

namespace {

std::vector<double> geometric_grid(double lo, double hi, int per_octave) {
  std::vector<double> g;
  const double step = std::pow(2.0, 1.0 / per_octave);
  for (double u = lo; u <= hi * (1.0 + 1e-12); u *= step) g.push_back(u);
  return g;
}

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ConditionFlags ComplementaryPair::check_conditions(
    const GridSpec& grid, ConditionDiagnostics* diag) const {
  ConditionFlags flags;
  const auto g = geometric_grid(grid.u_min, grid.u_max, grid.points_per_octave);
  const double rtol = grid.monotone_rtol;

  flags.psi_over_x_nondecreasing = true;
  flags.psi_over_x2_nonincreasing = true;
  double prev1 = -kInf, prev2 = kInf;
  for (double u : g) {
    const double r1 = psi_.eval(u) / u;
    const double r2 = r1 / u;
    if (r1 < prev1 * (1.0 - rtol)) flags.psi_over_x_nondecreasing = false;
    if (r2 > prev2 * (1.0 + rtol)) flags.psi_over_x2_nonincreasing = false;
    prev1 = r1;
    prev2 = r2;
  }

  // convexity of p on a uniform grid (midpoint test)
  flags.p_convex = true;
  {
    const int pts = 257;
    const double hi = std::min(grid.u_max, 16.0);
    std::vector<double> pv(pts);
    for (int i = 0; i < pts; ++i) {
      pv[i] = phi_.derivative(hi * (i + 1) / pts);
    }
    for (int i = 1; i + 1 < pts; ++i) {
      const double mid2 = pv[i - 1] + pv[i + 1] - 2.0 * pv[i];
      if (mid2 < -1e-9 * std::max(1.0, std::abs(pv[i]))) {
        flags.p_convex = false;
        break;
      }
    }
  }

  flags.q_over_s_nonincreasing = true;
  {
    double prev = kInf;
    double max_step = 0.0;
    for (double s : g) {
      const double r = psi_.derivative(s) / s;
      if (r > prev * (1.0 + rtol)) flags.q_over_s_nonincreasing = false;
      prev = r;
    }
    // continuity probe: relative jumps of q between adjacent grid points
    for (size_t i = 0; i + 1 < g.size(); ++i) {
      const double q0 = psi_.derivative(g[i]);
      const double q1 = psi_.derivative(g[i + 1]);
      const double scale = std::max({std::abs(q0), std::abs(q1), 1e-300});
      max_step = std::max(max_step, std::abs(q1 - q0) / scale);
    }
    if (diag) diag->q_continuity_max_step = max_step;
  }

  // series sum_k q(1/(k+1)) / (k+1)^(1/2): partial sums plus a log-log slope
  // test on the last decade of terms
  {
    const int K = grid.series_terms;
    std::vector<double> ks, terms;
    double partial = 0.0;
    for (int k = 0; k < K; ++k) {
      const double m = k + 1.0;
      const double term = psi_.derivative(1.0 / m) / std::sqrt(m);
      partial += term;
      if (m >= K / 10.0) {
        ks.push_back(m);
        terms.push_back(term);
      }
    }
    const double slope = loglog_slope(ks, terms);
    flags.series_converges_heuristic =
        slope <= -(1.0 + grid.series_slope_margin);
    if (grid.series_override) {
      flags.series_converges_heuristic = *grid.series_override;
    }
    if (diag) {
      diag->series_partial_sum = partial;
      diag->series_tail_slope = slope;
    }
  }

  // Psi(u) ~ u^2 near 0: ratio must stay flat (bounded both ways)
  {
    std::vector<double> us, ratios;
    for (double u = grid.u_small; u >= 1.0 / 1024.0; u /= 2.0) {
      us.push_back(u);
      ratios.push_back(psi_.eval(u) / (u * u));
    }
    const double slope = loglog_slope(us, ratios);
    double c1 = kInf, c2 = 0.0;
    for (double r : ratios) {
      c1 = std::min(c1, r);
      c2 = std::max(c2, r);
    }
    flags.psi_equiv_u2_small = std::abs(slope) <= 0.1 && c2 < kInf && c1 > 0.0;
    if (diag) {
      diag->psi_u2_c1 = c1;
      diag->psi_u2_c2 = c2;
    }
  }

  if (diag) {
    double worst = kInf;
    for (double u : geometric_grid(1.0 / 1024.0, 16.0, 1)) {
      for (double v : geometric_grid(1.0 / 1024.0, 16.0, 1)) {
        worst = std::min(worst, young_gap(u, v));
      }
    }
    worst = std::min(worst, young_gap(0.0, 0.0));
    diag->young_worst_gap = worst;

    double eq_worst = 0.0;
    for (double u = 1.0 / 1024.0; u <= 2.0 * (1 + 1e-12); u *= 2.0) {
      eq_worst = std::max(eq_worst, std::abs(young_gap(u, p(u))));
    }
    diag->young_equality_worst = eq_worst;

    double cmax = 0.0;
    for (double u = 1.0 / 1024.0; u <= 1.0 * (1 + 1e-12); u *= 2.0) {
      for (long n : {0L, 1L, 3L, 15L, 255L, 4095L}) {
        cmax = std::max(cmax, lemma1_ratio(u, n));
      }
    }
    diag->lemma1_constant = cmax;
  }
  return flags;
}

}  // namespace oss
