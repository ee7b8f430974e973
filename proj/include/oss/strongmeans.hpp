#pragma once

#include <string>
#include <vector>

#include "oss/characteristics.hpp"
#include "oss/fourier.hpp"
#include "oss/nfunction.hpp"

namespace oss {

struct StrongMeanResult {
  double value = 0.0;
  bool overflow = false;  // some Phi(|S_nu f - f(x)|) left the linear domain
};

/// H_n = Phi^{-1} of the average of Phi(|S_nu f(x) - f(x)|), nu = 0..n.
StrongMeanResult strong_mean(const ComplementaryPair& pair,
                             const PeriodicFunction& f, double x, int n);
StrongMeanResult strong_mean(const ComplementaryPair& pair,
                             const FourierCoefficients& coeffs, double fx,
                             double x, int n);

/// Weight used in front of Psi(w(tau_k)) under the inverted sum. The first is
/// the stated estimate; the other two are the exponents the derivation
/// passes through, kept as diagnostics.
enum class RhsWeight {
  theorem_sqrt,       // Psi'(1/(k+1)) / (k+1)^{1/2},  k = 0..n
  proof_quadratic,    // 1 / (k+1)^2,                  k = 0..n-1
  proof_three_halves  // Psi'(1/(k+1)) / (k+1),        k = 0..n-1 in spirit
};

double theorem_rhs(const ComplementaryPair& pair, const PeriodicFunction& f,
                   double x, int n, RhsWeight weight = RhsWeight::theorem_sqrt);

/// The chain of displayed quantities between Psi[G] and the final bracket.
/// abel_sum re-sums jensen_sum by parts and must match it to roundoff; the
/// later entries dominate the earlier ones exactly, while psi_of_g is tied
/// to lemma1_sum only up to the reported constant.
struct PsiDomainChain {
  double psi_of_g = 0.0;
  double lemma1_sum = 0.0;
  double jensen_sum = 0.0;
  double abel_sum = 0.0;
  double prefix_bound = 0.0;
  double theorem_bracket = 0.0;
};

PsiDomainChain psi_domain_chain(const ComplementaryPair& pair,
                                const PeriodicFunction& f, double x, int n);

/// H_n / G_x(pi/(n+1))_{1,Psi}; 0 by convention when both vanish.
double hn_vs_g_ratio(const ComplementaryPair& pair, const PeriodicFunction& f,
                     double x, int n, double zero_eps = 1e-12);

struct SeriesCell {
  int n = 0;
  double h_phi = 0.0;
  bool overflow = false;
  double g_1psi = 0.0;
  double rhs_thm = 0.0;
  double rhs_k2 = 0.0;
  double w1 = 0.0;
  double wpsi = 0.0;
  double g12 = 0.0;
  double m_diag = 0.0;
};

/// Full per-point series over an increasing n grid. When every n+1 divides
/// max(n)+1 the block integrals are computed once at the finest level and
/// aggregated upward, so the whole series costs one pass over (0, pi).
std::vector<SeriesCell> sweep_series(const ComplementaryPair& pair,
                                     const PeriodicFunction& f, double x,
                                     const std::vector<int>& n_grid);

}  // namespace oss
