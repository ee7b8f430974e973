#include "oss/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "oss/quadrature.hpp"

namespace oss {

namespace {
const double kPi = M_PI;
const double kTwoPi = 2.0 * M_PI;
}  // namespace

struct PeriodicFunction::Cache {
  std::mutex mu;
  std::shared_ptr<const FourierCoefficients> coeffs;
};

PeriodicFunction::PeriodicFunction(std::string id, Evaluator eval,
                                   std::vector<double> breakpoints,
                                   std::vector<JumpPoint> jumps,
                                   std::vector<LabeledPoint> labeled,
                                   CoefficientGenerator analytic)
    : id_(std::move(id)),
      eval_(std::move(eval)),
      breakpoints_(std::move(breakpoints)),
      jumps_(std::move(jumps)),
      labeled_(std::move(labeled)),
      analytic_(std::move(analytic)),
      cache_(std::make_shared<Cache>()) {
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

double PeriodicFunction::wrap(double x) {
  double w = std::remainder(x, kTwoPi);
  if (w >= kPi) w -= kTwoPi;
  return w;
}

double PeriodicFunction::phi_x(double x, double t) const {
  return phi_x((*this)(x), x, t);
}

double PeriodicFunction::phi_x(double fx, double x, double t) const {
  return (*this)(x + t) + (*this)(x - t) - 2.0 * fx;
}

std::shared_ptr<const FourierCoefficients> PeriodicFunction::coefficients(
    int N) const {
  if (N < 0) throw std::invalid_argument("coefficients: N must be >= 0");
  if (N > (1 << 14)) {
    throw std::invalid_argument("coefficients: indices beyond 2^14 unsupported");
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (cache_->coeffs && cache_->coeffs->max_index() >= N) {
    return cache_->coeffs;
  }
  auto fresh = std::make_shared<FourierCoefficients>();
  fresh->a.assign(N + 1, 0.0);
  fresh->b.assign(N + 1, 0.0);
  if (analytic_) {
    analytic_(N, *fresh);
  } else {
    *fresh = numeric_coefficients(*this, N);
  }
  cache_->coeffs = fresh;
  return cache_->coeffs;
}

std::vector<double> PeriodicFunction::breakpoints_in_t(double x, double lo,
                                                       double hi) const {
  std::vector<double> out;
  auto add_lattice = [&](double base) {
    // all base + 2*pi*m inside [lo, hi]
    const double m0 = std::ceil((lo - base) / kTwoPi - 1e-15);
    for (double m = m0;; m += 1.0) {
      const double t = base + kTwoPi * m;
      if (t > hi + 1e-15) break;
      if (t >= lo - 1e-15) out.push_back(std::min(std::max(t, lo), hi));
    }
  };
  for (double d : breakpoints_) {
    add_lattice(d - x);
    add_lattice(x - d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double partial_sum(const FourierCoefficients& c, int nu, double x) {
  if (nu > c.max_index()) {
    throw std::invalid_argument("partial_sum: order exceeds stored indices");
  }
  double s = c.a0 / 2.0;
  const double c1 = std::cos(x), s1 = std::sin(x);
  double ck = 1.0, sk = 0.0;
  for (int k = 1; k <= nu; ++k) {
    const double cn = ck * c1 - sk * s1;
    const double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
    s += c.a[k] * ck + c.b[k] * sk;
  }
  return s;
}

std::vector<double> partial_sums(const FourierCoefficients& c, int nmax,
                                 double x) {
  if (nmax > c.max_index()) {
    throw std::invalid_argument("partial_sums: order exceeds stored indices");
  }
  std::vector<double> out(nmax + 1);
  double s = c.a0 / 2.0;
  out[0] = s;
  const double c1 = std::cos(x), s1 = std::sin(x);
  double ck = 1.0, sk = 0.0;
  for (int k = 1; k <= nmax; ++k) {
    const double cn = ck * c1 - sk * s1;
    const double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
    s += c.a[k] * ck + c.b[k] * sk;
    out[k] = s;
  }
  return out;
}

FourierCoefficients numeric_coefficients(const PeriodicFunction& f, int N) {
  FourierCoefficients c;
  c.a.assign(N + 1, 0.0);
  c.b.assign(N + 1, 0.0);
  QuadOptions opt;
  opt.nodes_per_panel = 64;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  const auto& brk = f.breakpoints();
  c.a0 = integrate([&](double t) { return f(t); }, -kPi, kPi, brk, opt) / kPi;
  for (int k = 1; k <= N; ++k) {
    QuadOptions ok = opt;
    // keep the phase advance per panel modest before refinement kicks in
    ok.max_panel_width = 24.0 / k;
    c.a[k] = integrate([&](double t) { return f(t) * std::cos(k * t); }, -kPi,
                       kPi, brk, ok) /
             kPi;
    c.b[k] = integrate([&](double t) { return f(t) * std::sin(k * t); }, -kPi,
                       kPi, brk, ok) /
             kPi;
  }
  return c;
}

// ---------------------------------------------------------------------------
// corpus
// ---------------------------------------------------------------------------

namespace {

PeriodicFunction make_constant() {
  return PeriodicFunction(
      "const", [](double) { return 1.0; }, {}, {},
      {{0.7, PointLabel::lpsi_point, "f is constant; phi_x vanishes"}},
      [](int, FourierCoefficients& c) { c.a0 = 2.0; });
}

PeriodicFunction make_cos3x() {
  return PeriodicFunction(
      "cos3x", [](double x) { return std::cos(3.0 * x); }, {}, {},
      {{kPi / 6.0, PointLabel::lpsi_point,
        "cos(3x) = 0 here, so phi_x(t) = 2 cos(3x)(cos 3t - 1) vanishes"}},
      [](int N, FourierCoefficients& c) {
        if (N >= 3) c.a[3] = 1.0;
      });
}

PeriodicFunction make_square() {
  // midpoint value 0 at both jumps
  auto eval = [](double w) {
    if (w == 0.0 || w == -kPi) return 0.0;
    return w > 0.0 ? 1.0 : -1.0;
  };
  return PeriodicFunction(
      "square", eval, {-kPi, 0.0},
      {{0.0, -1.0, 1.0, 0.0}, {-kPi, 1.0, -1.0, 0.0}},
      {{0.0, PointLabel::lpsi_point,
        "stored value 0 is the jump midpoint; phi_x(t) = sign(t)+sign(-t) = 0"}},
      [](int N, FourierCoefficients& c) {
        for (int k = 1; k <= N; k += 2) c.b[k] = 4.0 / (kPi * k);
      });
}

PeriodicFunction make_step() {
  auto eval = [](double w) { return (w >= 0.0 && w < kPi) ? 1.0 : 0.0; };
  return PeriodicFunction(
      "step", eval, {-kPi, 0.0},
      {{0.0, 0.0, 1.0, 1.0}, {-kPi, 1.0, 0.0, 0.0}},
      {{0.0, PointLabel::non_lpsi_point,
        "evaluator keeps the one-sided value 1 at the jump; the midpoint is "
        "1/2, so phi_x = -1 on (0, pi) and no characteristic decays"}},
      [](int N, FourierCoefficients& c) {
        c.a0 = 1.0;
        for (int k = 1; k <= N; k += 2) c.b[k] = 2.0 / (kPi * k);
      });
}

PeriodicFunction make_sawtooth() {
  auto eval = [](double w) { return w <= -kPi ? 0.0 : w / kPi; };
  return PeriodicFunction(
      "sawtooth", eval, {-kPi},
      {{-kPi, 1.0, -1.0, 0.0}},
      {{kPi / 6.0, PointLabel::lpsi_point,
        "locally linear; the only jump sits at circular distance 5pi/6"},
       {-kPi, PointLabel::lpsi_point,
        "stored value 0 is the jump midpoint; odd symmetry about the jump "
        "makes phi_x vanish"}},
      [](int N, FourierCoefficients& c) {
        for (int k = 1; k <= N; ++k) {
          c.b[k] = 2.0 * ((k % 2) ? 1.0 : -1.0) / (kPi * k);
        }
      });
}

PeriodicFunction make_absx() {
  auto eval = [](double w) { return std::abs(w); };
  return PeriodicFunction(
      "absx", eval, {-kPi, 0.0}, {},
      {{kPi / 2.0, PointLabel::lpsi_point,
        "f(pi/2+s) + f(pi/2-s) = pi for all s, so phi_x vanishes identically"}},
      [](int N, FourierCoefficients& c) {
        c.a0 = kPi;
        for (int k = 1; k <= N; k += 2) c.a[k] = -4.0 / (kPi * k * k);
      });
}

constexpr double kOscFloor = 1.0 / 32.0;
constexpr double kOscEdge = 0.7;
const double kOscPlateau = kOscEdge * std::sin(1.0 / kOscEdge);

PeriodicFunction make_oscillator() {
  auto eval = [](double w) {
    const double s = std::abs(w);
    if (s >= kOscEdge) return kOscPlateau;
    return s * std::sin(1.0 / std::max(s, kOscFloor));
  };
  return PeriodicFunction(
      "osc", eval, {-kPi, -kOscEdge, -kOscFloor, 0.0, kOscFloor, kOscEdge}, {},
      {{-kPi, PointLabel::lpsi_point,
        "f is constant on the arc |t| > 0.7 around +-pi; phi_x vanishes on "
        "(0, pi - 0.7)"}},
      nullptr);
}

struct Spike {
  double height;
  double center;
  double half_width;
};

// Rectangular spikes with heights e^j / j^3 and widths e^-j, packed
// alternately to the right and left of pi/2 with small gaps. The j-th spike
// carries mass j^-3; the documented J -> infinity family stays Psi-integrable
// while escaping every L^p, p > 1 (see README).
std::vector<Spike> spike_layout() {
  constexpr int J = 6;
  std::vector<Spike> spikes;
  double left_edge = kPi / 2.0;
  double right_edge = kPi / 2.0;
  const double gap = 0.02;
  for (int j = 1; j <= J; ++j) {
    const double h = std::exp(j) / (static_cast<double>(j) * j * j);
    const double w = std::exp(-j);
    double c;
    if (j % 2 == 1) {
      c = right_edge + gap + w / 2.0;
      right_edge = c + w / 2.0;
    } else {
      c = left_edge - gap - w / 2.0;
      left_edge = c - w / 2.0;
    }
    spikes.push_back({h, c, w / 2.0});
  }
  return spikes;
}

PeriodicFunction make_spikes() {
  const auto spikes = spike_layout();
  auto eval = [spikes](double w) {
    double v = 0.0;
    for (const auto& s : spikes) {
      if (w > s.center - s.half_width && w < s.center + s.half_width) {
        v += s.height;
      }
    }
    return v;
  };
  std::vector<double> brk;
  std::vector<JumpPoint> jumps;
  for (const auto& s : spikes) {
    const double e1 = s.center - s.half_width;
    const double e2 = s.center + s.half_width;
    brk.push_back(e1);
    brk.push_back(e2);
    jumps.push_back({e1, 0.0, s.height, 0.0});
    jumps.push_back({e2, s.height, 0.0, 0.0});
  }
  auto gen = [spikes](int N, FourierCoefficients& c) {
    for (const auto& s : spikes) {
      c.a0 += 2.0 * s.height * s.half_width / kPi;
    }
    for (int k = 1; k <= N; ++k) {
      double ak = 0.0, bk = 0.0;
      for (const auto& s : spikes) {
        const double e1 = s.center - s.half_width;
        const double e2 = s.center + s.half_width;
        ak += s.height * (std::sin(k * e2) - std::sin(k * e1)) / (kPi * k);
        bk += s.height * (std::cos(k * e1) - std::cos(k * e2)) / (kPi * k);
      }
      c.a[k] = ak;
      c.b[k] = bk;
    }
  };
  return PeriodicFunction(
      "spikes", eval, brk, jumps,
      {{-kPi / 2.0, PointLabel::lpsi_point,
        "every spike lies at circular distance > 2.6 from x, so phi_x "
        "vanishes on (0, 2.6)"}},
      gen);
}

}  // namespace

const std::vector<PeriodicFunction>& corpus() {
  static const std::vector<PeriodicFunction> fns = [] {
    std::vector<PeriodicFunction> v;
    v.push_back(make_constant());
    v.push_back(make_cos3x());
    v.push_back(make_square());
    v.push_back(make_step());
    v.push_back(make_sawtooth());
    v.push_back(make_absx());
    v.push_back(make_oscillator());
    v.push_back(make_spikes());
    return v;
  }();
  return fns;
}

const PeriodicFunction& corpus_function(const std::string& id) {
  for (const auto& f : corpus()) {
    if (f.id() == id) return f;
  }
  throw std::invalid_argument("unknown corpus function: " + id);
}

std::vector<std::string> corpus_ids() {
  std::vector<std::string> ids;
  for (const auto& f : corpus()) ids.push_back(f.id());
  return ids;
}

PeriodicFunction sampled_function(const std::string& id,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("sampled_function: need matched samples");
  }
  const size_t n = x.size();
  const double h = x[1] - x[0];
  for (size_t i = 0; i + 1 < n; ++i) {
    if (std::abs((x[i + 1] - x[i]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument("sampled_function: grid must be uniform");
    }
  }
  if (std::abs(n * h - kTwoPi) > 1e-6) {
    throw std::invalid_argument(
        "sampled_function: samples must tile one period");
  }
  const double x0 = x[0];
  std::vector<double> vals = y;
  auto eval = [x0, h, vals, n](double xx) {
    double u = xx - x0;
    u -= kTwoPi * std::floor(u / kTwoPi);
    const double pos = u / h;
    size_t i = static_cast<size_t>(std::floor(pos));
    if (i >= n) i = n - 1;
    const double w = pos - static_cast<double>(i);
    const double y1 = vals[i];
    const double y2 = vals[(i + 1) % n];
    return y1 + w * (y2 - y1);
  };
  std::vector<double> brk;
  for (size_t i = 0; i < n; ++i) brk.push_back(PeriodicFunction::wrap(x[i]));
  // The interpolant is a sum of triangular hats, so its coefficients are the
  // sample sums damped by the squared-sinc factor of the hat.
  std::vector<double> xw(n);
  for (size_t i = 0; i < n; ++i) xw[i] = x[i];
  auto gen = [xw, vals, h, n](int N, FourierCoefficients& c) {
    double a0 = 0.0;
    for (size_t j = 0; j < n; ++j) a0 += vals[j];
    c.a0 = a0 * h / kPi;
    for (int k = 1; k <= N; ++k) {
      const double z = 0.5 * k * h;
      const double damp = std::sin(z) / z;
      double ak = 0.0, bk = 0.0;
      for (size_t j = 0; j < n; ++j) {
        ak += vals[j] * std::cos(k * xw[j]);
        bk += vals[j] * std::sin(k * xw[j]);
      }
      c.a[k] = ak * h / kPi * damp * damp;
      c.b[k] = bk * h / kPi * damp * damp;
    }
  };
  return PeriodicFunction(id, eval, brk, {}, {}, gen);
}

PeriodicFunction load_sampled_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample table: " + path);
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double xi, yi;
    if (row >> xi >> yi) {
      xs.push_back(xi);
      ys.push_back(yi);
    }
  }
  return sampled_function("file:" + path, xs, ys);
}

}  // namespace oss
