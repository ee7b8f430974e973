#include "oss/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace oss {

namespace {
const double kPi = M_PI;

QuadOptions block_options() {
  QuadOptions opt;
  opt.nodes_per_panel = 32;
  opt.rtol = 1e-11;
  opt.atol = 1e-15;
  return opt;
}
}  // namespace

double w_p(const PeriodicFunction& f, double x, double delta, double p) {
  if (!(delta > 0.0) || delta > kPi + 1e-12) {
    throw std::invalid_argument("w_p: delta must lie in (0, pi]");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("w_p: p must be >= 1");
  const double integral = integrate_phi(
      f, x, 0.0, delta, [p](double a) { return std::pow(a, p); },
      block_options());
  return std::pow(integral / delta, 1.0 / p);
}

double w_psi(const ComplementaryPair& pair, const PeriodicFunction& f,
             double x, double delta) {
  if (!(delta > 0.0) || delta > kPi + 1e-12) {
    throw std::invalid_argument("w_psi: delta must lie in (0, pi]");
  }
  const double integral = integrate_phi(
      f, x, 0.0, delta, [&](double a) { return pair.eval_psi(a); },
      block_options());
  return pair.inverse_psi(std::max(0.0, integral / delta));
}

double g_ps(const PeriodicFunction& f, double x, double delta, double p,
            double s) {
  if (!(delta > 0.0) || delta > kPi + 1e-12) {
    throw std::invalid_argument("g_ps: delta must lie in (0, pi]");
  }
  if (!(s > p) || !(p >= 1.0)) {
    throw std::invalid_argument("g_ps: need s > p >= 1");
  }
  const int blocks = static_cast<int>(std::floor(kPi / delta + 1e-12));
  double sum = 0.0;
  for (int k = 1; k <= blocks; ++k) {
    const double integral = integrate_phi(
        f, x, (k - 1) * delta, k * delta,
        [p](double a) { return std::pow(a, p); }, block_options());
    sum += std::pow(integral / (k * delta), s / p);
  }
  return std::pow(sum, 1.0 / s);
}

double g_p_psi(const ComplementaryPair& pair, const PeriodicFunction& f,
               double x, double delta, double p) {
  if (!(delta > 0.0) || delta > kPi + 1e-12) {
    throw std::invalid_argument("g_p_psi: delta must lie in (0, pi]");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("g_p_psi: p must be >= 1");
  const int blocks = static_cast<int>(std::floor(kPi / delta + 1e-12));
  double sum = 0.0;
  for (int k = 1; k <= blocks; ++k) {
    const double integral = integrate_phi(
        f, x, (k - 1) * delta, k * delta,
        [p](double a) { return std::pow(a, p); }, block_options());
    sum += pair.eval_psi(std::pow(integral / (k * delta), 1.0 / p));
  }
  return pair.inverse_psi(sum);
}

double m_of_x(const ComplementaryPair& pair, const PeriodicFunction& f,
              double x, int n_max) {
  if (n_max < 0) throw std::invalid_argument("m_of_x: n_max must be >= 0");
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const auto blocks = block_integrals(
        f, x, n, [&](double a) { return pair.eval_psi(a); }, block_options());
    double prefix = 0.0;
    for (int k = 0; k <= n; ++k) {
      prefix += blocks[k];
      const double avg = (n + 1.0) / (kPi * (k + 1.0)) * prefix;
      worst = std::max(worst, avg);
    }
  }
  return worst;
}

CharacteristicRow profile_row(const ComplementaryPair& pair,
                              const PeriodicFunction& f, double x, int n) {
  CharacteristicRow row;
  row.x = x;
  row.n = n;
  row.delta = kPi / (n + 1.0);
  const auto psi_blocks = block_integrals(
      f, x, n, [&](double a) { return pair.eval_psi(a); }, block_options());
  const auto abs_blocks = block_integrals(
      f, x, n, [](double a) { return a; }, block_options());

  row.w1 = abs_blocks[0] / row.delta;
  row.wpsi = pair.inverse_psi(std::max(0.0, psi_blocks[0] / row.delta));

  double g12 = 0.0, g1psi = 0.0;
  double prefix_psi = 0.0, m_diag = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double avg_abs = abs_blocks[k] / ((k + 1.0) * row.delta);
    g12 += avg_abs * avg_abs;
    g1psi += pair.eval_psi(avg_abs);
    prefix_psi += psi_blocks[k];
    m_diag = std::max(m_diag, (n + 1.0) / (kPi * (k + 1.0)) * prefix_psi);
  }
  row.g12 = std::sqrt(g12);
  row.g1psi = pair.inverse_psi(g1psi);
  row.m_diag = m_diag;
  return row;
}

}  // namespace oss
