#pragma once

#include <utility>
#include <vector>

#include "oss/fourier.hpp"
#include "oss/nfunction.hpp"
#include "oss/quadrature.hpp"

namespace oss {

/// The dyadic-style partition of (0, pi) into n+1 equal blocks.
struct Partition {
  int n = 0;
  double length() const { return M_PI / (n + 1); }
  int blocks() const { return n + 1; }
  std::pair<double, double> interval(int nu) const {
    return {M_PI * nu / (n + 1), M_PI * (nu + 1) / (n + 1)};
  }
};

/// Integral of transform(|phi_x(t)|) over (a, b), with panel splits wherever
/// x +- t meets a breakpoint of f.
template <class Transform>
double integrate_phi(const PeriodicFunction& f, double x, double a, double b,
                     Transform&& transform, QuadOptions opt = {}) {
  const double fx = f(x);
  const auto splits = f.breakpoints_in_t(x, a, b);
  return integrate(
      [&](double t) { return transform(std::abs(f.phi_x(fx, x, t))); }, a, b,
      splits, opt);
}

double w_p(const PeriodicFunction& f, double x, double delta, double p);
double w_psi(const ComplementaryPair& pair, const PeriodicFunction& f,
             double x, double delta);
double g_ps(const PeriodicFunction& f, double x, double delta, double p,
            double s);
double g_p_psi(const ComplementaryPair& pair, const PeriodicFunction& f,
               double x, double delta, double p = 1.0);

/// sup over 0 <= k <= n <= n_max of the running averages
/// (n+1)/(pi (k+1)) * integral_0^{pi(k+1)/(n+1)} Psi(|phi_x|).
double m_of_x(const ComplementaryPair& pair, const PeriodicFunction& f,
              double x, int n_max);

/// Block integrals of transform(|phi_x|) over the partition of (0, pi) into
/// n+1 equal pieces; the workhorse shared by the estimates.
template <class Transform>
std::vector<double> block_integrals(const PeriodicFunction& f, double x, int n,
                                    Transform&& transform,
                                    QuadOptions opt = {}) {
  Partition part{n};
  std::vector<double> out(part.blocks());
  for (int nu = 0; nu < part.blocks(); ++nu) {
    const auto [a, b] = part.interval(nu);
    out[nu] = integrate_phi(f, x, a, b, transform, opt);
  }
  return out;
}

struct CharacteristicRow {
  double x = 0.0;
  int n = 0;
  double delta = 0.0;
  double w1 = 0.0;
  double wpsi = 0.0;
  double g12 = 0.0;
  double g1psi = 0.0;
  double m_diag = 0.0;  // max over k <= n of the running Psi-average at this n
};

CharacteristicRow profile_row(const ComplementaryPair& pair,
                              const PeriodicFunction& f, double x, int n);

}  // namespace oss
