#pragma once

// Brute-force midpoint-Riemann oracles, kept independent of the quadrature
// and prefix machinery in the library. Test-only.

#include <cmath>
#include <functional>
#include <vector>

#include "oss/fourier.hpp"
#include "oss/nfunction.hpp"

namespace oracle {

// Midpoint sums of g(t) over (0, pi) on a fixed fine grid; integrals over
// arbitrary subintervals come from the prefix plus midpoint-valued partial
// panels.
class Riemann {
 public:
  Riemann(std::function<double(double)> g, int panels = 1 << 16)
      : g_(std::move(g)), panels_(panels), h_(M_PI / panels) {
    prefix_.resize(panels_ + 1, 0.0);
    for (int i = 0; i < panels_; ++i) {
      prefix_[i + 1] = prefix_[i] + g_((i + 0.5) * h_) * h_;
    }
  }

  double integral(double a, double b) const {
    if (b <= a) return 0.0;
    return prefix_at(b) - prefix_at(a);
  }

 private:
  double prefix_at(double t) const {
    const double pos = t / h_;
    int i = static_cast<int>(std::floor(pos));
    if (i < 0) i = 0;
    if (i >= panels_) return prefix_[panels_];
    const double part = t - i * h_;
    if (part <= 0.0) return prefix_[i];
    return prefix_[i] + g_(i * h_ + 0.5 * part) * part;
  }

  std::function<double(double)> g_;
  int panels_;
  double h_;
  std::vector<double> prefix_;
};

inline Riemann riemann_phi(const oss::PeriodicFunction& f, double x,
                           std::function<double(double)> transform,
                           int panels = 1 << 16) {
  const double fx = f(x);
  return Riemann(
      [&f, fx, x, transform](double t) {
        return transform(std::abs(f.phi_x(fx, x, t)));
      },
      panels);
}

inline double w_p(const oss::PeriodicFunction& f, double x, double delta,
                  double p, int panels = 1 << 16) {
  auto r = riemann_phi(f, x, [p](double a) { return std::pow(a, p); }, panels);
  return std::pow(r.integral(0.0, delta) / delta, 1.0 / p);
}

inline double w_psi(const oss::ComplementaryPair& pair,
                    const oss::PeriodicFunction& f, double x, double delta,
                    int panels = 1 << 16) {
  auto r = riemann_phi(
      f, x, [&pair](double a) { return pair.eval_psi(a); }, panels);
  return pair.inverse_psi(std::max(0.0, r.integral(0.0, delta) / delta));
}

inline double g_ps(const oss::PeriodicFunction& f, double x, double delta,
                   double p, double s, int panels = 1 << 16) {
  auto r = riemann_phi(f, x, [p](double a) { return std::pow(a, p); }, panels);
  const int blocks = static_cast<int>(std::floor(M_PI / delta + 1e-12));
  double sum = 0.0;
  for (int k = 1; k <= blocks; ++k) {
    sum += std::pow(r.integral((k - 1) * delta, k * delta) / (k * delta),
                    s / p);
  }
  return std::pow(sum, 1.0 / s);
}

inline double g_p_psi(const oss::ComplementaryPair& pair,
                      const oss::PeriodicFunction& f, double x, double delta,
                      double p, int panels = 1 << 16) {
  auto r = riemann_phi(f, x, [p](double a) { return std::pow(a, p); }, panels);
  const int blocks = static_cast<int>(std::floor(M_PI / delta + 1e-12));
  double sum = 0.0;
  for (int k = 1; k <= blocks; ++k) {
    sum += pair.eval_psi(
        std::pow(r.integral((k - 1) * delta, k * delta) / (k * delta), 1.0 / p));
  }
  return pair.inverse_psi(sum);
}

inline double m_of_x(const oss::ComplementaryPair& pair,
                     const oss::PeriodicFunction& f, double x, int n_max,
                     int panels = 1 << 16) {
  auto r = riemann_phi(
      f, x, [&pair](double a) { return pair.eval_psi(a); }, panels);
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double tau = M_PI * (k + 1.0) / (n + 1.0);
      worst = std::max(worst,
                       (n + 1.0) / (M_PI * (k + 1.0)) * r.integral(0.0, tau));
    }
  }
  return worst;
}

// literal term-by-term re-evaluation of the estimate, independent of the
// prefix reuse inside the library
inline double theorem_rhs_literal(const oss::ComplementaryPair& pair,
                                  const oss::PeriodicFunction& f, double x,
                                  int n, int panels = 1 << 16) {
  auto r = riemann_phi(
      f, x, [&pair](double a) { return pair.eval_psi(a); }, panels);
  auto w_at = [&](double delta) {
    return pair.inverse_psi(std::max(0.0, r.integral(0.0, delta) / delta));
  };
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double tau = M_PI * (k + 1.0) / (n + 1.0);
    sum += pair.psi_prime(1.0 / (k + 1.0)) / std::sqrt(k + 1.0) *
           pair.eval_psi(w_at(tau));
  }
  sum += (n + 1.0) * pair.eval_psi(1.0 / (n + 1.0)) *
         pair.eval_psi(w_at(M_PI));
  return pair.inverse_psi(sum);
}

inline double relerr(double got, double want, double floor = 1e-12) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

}  // namespace oracle
