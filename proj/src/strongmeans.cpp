#include "oss/strongmeans.hpp"

#include <cmath>
#include <limits>
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

struct RhsParts {
  double theorem_sum = 0.0;
  double k2_sum = 0.0;
  double k32_sum = 0.0;
  double tail = 0.0;
};

// All three weighted sums from one set of prefix integrals of Psi(|phi_x|).
RhsParts rhs_parts(const ComplementaryPair& pair,
                   const std::vector<double>& psi_blocks) {
  const int n = static_cast<int>(psi_blocks.size()) - 1;
  RhsParts parts;
  double prefix = 0.0;
  for (int k = 0; k <= n; ++k) {
    prefix += psi_blocks[k];
    const double tau = kPi * (k + 1.0) / (n + 1.0);
    const double psi_w = prefix / tau;  // Psi(w_x f(tau)_Psi)
    const double qk = pair.psi_prime(1.0 / (k + 1.0));
    parts.theorem_sum += qk / std::sqrt(k + 1.0) * psi_w;
    if (k < n) {
      parts.k2_sum += psi_w / ((k + 1.0) * (k + 1.0));
      parts.k32_sum += qk / (k + 1.0) * psi_w;
    }
  }
  parts.tail =
      (n + 1.0) * pair.eval_psi(1.0 / (n + 1.0)) * (prefix / kPi);
  return parts;
}

}  // namespace

StrongMeanResult strong_mean(const ComplementaryPair& pair,
                             const FourierCoefficients& coeffs, double fx,
                             double x, int n) {
  if (n < 0) throw std::invalid_argument("strong_mean: n must be >= 0");
  if (n > coeffs.max_index()) {
    throw std::invalid_argument("strong_mean: coefficients stop before n");
  }
  const auto sums = partial_sums(coeffs, n, x);
  StrongMeanResult out;
  double acc = 0.0;
  for (int nu = 0; nu <= n; ++nu) {
    const PhiValue v = pair.phi().eval_checked(std::abs(sums[nu] - fx));
    out.overflow = out.overflow || v.saturated;
    acc += v.value;
  }
  if (out.overflow) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = pair.inverse_phi(acc / (n + 1.0));
  return out;
}

StrongMeanResult strong_mean(const ComplementaryPair& pair,
                             const PeriodicFunction& f, double x, int n) {
  const auto coeffs = f.coefficients(n);
  return strong_mean(pair, *coeffs, f(x), x, n);
}

double theorem_rhs(const ComplementaryPair& pair, const PeriodicFunction& f,
                   double x, int n, RhsWeight weight) {
  if (n < 0) throw std::invalid_argument("theorem_rhs: n must be >= 0");
  const auto psi_blocks = block_integrals(
      f, x, n, [&](double a) { return pair.eval_psi(a); }, block_options());
  const RhsParts parts = rhs_parts(pair, psi_blocks);
  double bracket = parts.tail;
  switch (weight) {
    case RhsWeight::theorem_sqrt:
      bracket += parts.theorem_sum;
      break;
    case RhsWeight::proof_quadratic:
      bracket += parts.k2_sum;
      break;
    case RhsWeight::proof_three_halves:
      bracket += parts.k32_sum;
      break;
  }
  return pair.inverse_psi(std::max(0.0, bracket));
}

PsiDomainChain psi_domain_chain(const ComplementaryPair& pair,
                                const PeriodicFunction& f, double x, int n) {
  if (n < 0) throw std::invalid_argument("psi_domain_chain: n must be >= 0");
  const auto psi_blocks = block_integrals(
      f, x, n, [&](double a) { return pair.eval_psi(a); }, block_options());
  const auto abs_blocks = block_integrals(
      f, x, n, [](double a) { return a; }, block_options());

  PsiDomainChain chain;
  const double m = n + 1.0;
  double prefix_psi = 0.0;
  std::vector<double> prefix(n + 1);
  for (int k = 0; k <= n; ++k) {
    prefix_psi += psi_blocks[k];
    prefix[k] = prefix_psi;
    chain.psi_of_g +=
        pair.eval_psi(m / (kPi * (k + 1.0)) * abs_blocks[k]);
    chain.lemma1_sum += pair.eval_psi(1.0 / (k + 1.0)) *
                        pair.eval_psi(m / kPi * abs_blocks[k]);
    chain.jensen_sum +=
        pair.eval_psi(1.0 / (k + 1.0)) * (m / kPi * psi_blocks[k]);
  }
  // summation by parts of jensen_sum; an identity, kept as a cross-check
  for (int k = 0; k + 1 <= n; ++k) {
    chain.abel_sum += (pair.eval_psi(1.0 / (k + 1.0)) -
                       pair.eval_psi(1.0 / (k + 2.0))) *
                      (m / kPi) * prefix[k];
  }
  chain.abel_sum += pair.eval_psi(1.0 / m) * (m / kPi) * prefix[n];

  const RhsParts parts = rhs_parts(pair, psi_blocks);
  chain.prefix_bound = parts.k32_sum + parts.tail;
  chain.theorem_bracket = parts.theorem_sum + parts.tail;
  return chain;
}

double hn_vs_g_ratio(const ComplementaryPair& pair, const PeriodicFunction& f,
                     double x, int n, double zero_eps) {
  const double h = strong_mean(pair, f, x, n).value;
  const double g = g_p_psi(pair, f, x, kPi / (n + 1.0), 1.0);
  if (h <= zero_eps && g <= zero_eps) return 0.0;
  return h / g;
}

std::vector<SeriesCell> sweep_series(const ComplementaryPair& pair,
                                     const PeriodicFunction& f, double x,
                                     const std::vector<int>& n_grid) {
  if (n_grid.empty()) return {};
  for (size_t i = 0; i + 1 < n_grid.size(); ++i) {
    if (n_grid[i] >= n_grid[i + 1]) {
      throw std::invalid_argument("sweep_series: n grid must increase");
    }
  }
  const int nmax = n_grid.back();
  const int levels = nmax + 1;
  bool nested = true;
  for (int n : n_grid) nested = nested && (levels % (n + 1) == 0);

  const auto coeffs = f.coefficients(nmax);
  const double fx = f(x);
  const auto sums = partial_sums(*coeffs, nmax, x);
  std::vector<double> phi_prefix(nmax + 1);
  std::vector<char> sat(nmax + 1);
  {
    double acc = 0.0;
    bool ovf = false;
    for (int nu = 0; nu <= nmax; ++nu) {
      const PhiValue v = pair.phi().eval_checked(std::abs(sums[nu] - fx));
      ovf = ovf || v.saturated;
      acc += v.value;
      phi_prefix[nu] = acc;
      sat[nu] = ovf ? 1 : 0;
    }
  }

  std::vector<double> fine_psi, fine_abs;
  if (nested) {
    fine_psi = block_integrals(
        f, x, nmax, [&](double a) { return pair.eval_psi(a); },
        block_options());
    fine_abs = block_integrals(
        f, x, nmax, [](double a) { return a; }, block_options());
  }

  std::vector<SeriesCell> out;
  out.reserve(n_grid.size());
  for (int n : n_grid) {
    SeriesCell cell;
    cell.n = n;
    cell.overflow = sat[n] != 0;
    cell.h_phi = cell.overflow
                     ? std::numeric_limits<double>::infinity()
                     : pair.inverse_phi(phi_prefix[n] / (n + 1.0));

    std::vector<double> psi_blocks, abs_blocks;
    if (nested) {
      const int r = levels / (n + 1);
      psi_blocks.assign(n + 1, 0.0);
      abs_blocks.assign(n + 1, 0.0);
      for (int k = 0; k <= n; ++k) {
        for (int j = 0; j < r; ++j) {
          psi_blocks[k] += fine_psi[k * r + j];
          abs_blocks[k] += fine_abs[k * r + j];
        }
      }
    } else {
      psi_blocks = block_integrals(
          f, x, n, [&](double a) { return pair.eval_psi(a); },
          block_options());
      abs_blocks = block_integrals(
          f, x, n, [](double a) { return a; }, block_options());
    }

    const double delta = kPi / (n + 1.0);
    const RhsParts parts = rhs_parts(pair, psi_blocks);
    cell.rhs_thm = pair.inverse_psi(std::max(0.0, parts.theorem_sum + parts.tail));
    cell.rhs_k2 = pair.inverse_psi(std::max(0.0, parts.k2_sum + parts.tail));

    double g12 = 0.0, g1psi = 0.0, prefix_psi = 0.0, m_diag = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double avg = abs_blocks[k] / ((k + 1.0) * delta);
      g12 += avg * avg;
      g1psi += pair.eval_psi(avg);
      prefix_psi += psi_blocks[k];
      m_diag = std::max(m_diag, (n + 1.0) / (kPi * (k + 1.0)) * prefix_psi);
    }
    cell.g_1psi = pair.inverse_psi(g1psi);
    cell.g12 = std::sqrt(g12);
    cell.w1 = abs_blocks[0] / delta;
    cell.wpsi = pair.inverse_psi(std::max(0.0, psi_blocks[0] / delta));
    cell.m_diag = m_diag;
    out.push_back(cell);
  }
  return out;
}

}  // namespace oss
