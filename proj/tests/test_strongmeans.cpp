#include "oss/strongmeans.hpp"

#include <cmath>

#include "doctest.h"
#include "oracle.hpp"

using namespace oss;

namespace {
const double kPi = M_PI;

// classical quadratic strong mean, straight from the formula
double quadratic_mean_direct(const PeriodicFunction& f, double x, int n) {
  const auto c = f.coefficients(n);
  const auto sums = partial_sums(*c, n, x);
  const double fx = f(x);
  double acc = 0.0;
  for (int nu = 0; nu <= n; ++nu) {
    const double d = sums[nu] - fx;
    acc += d * d;
  }
  return std::sqrt(acc / (n + 1.0));
}

}  // namespace

TEST_CASE("strong mean trivial cases") {
  auto pair = ComplementaryPair::exp_pair();
  const auto& cst = corpus_function("const");
  for (int n : {0, 3, 100}) {
    CHECK(strong_mean(pair, cst, 0.7, n).value == 0.0);
  }
  // n = 0 is Phi^{-1} of Phi of a single deviation
  const auto& sq = corpus_function("square");
  const auto h0 = strong_mean(pair, sq, kPi / 2.0, 0);
  CHECK(h0.value == doctest::Approx(1.0).epsilon(1e-10));  // |a0/2 - 1|
  CHECK_FALSE(h0.overflow);
}

TEST_CASE("quadratic pair recovers the classical strong mean") {
  auto p2 = ComplementaryPair::power_pair(2.0);
  const auto& sq = corpus_function("square");
  const double via_pair = strong_mean(p2, sq, kPi / 2.0, 31).value;
  const double direct = quadratic_mean_direct(sq, kPi / 2.0, 31);
  CHECK(std::abs(via_pair - direct) <= 1e-12 * std::max(1.0, direct));
}

TEST_CASE("theorem rhs closed cases") {
  auto pair = ComplementaryPair::exp_pair();
  const auto& saw = corpus_function("sawtooth");
  CHECK(theorem_rhs(pair, saw, 0.0, 7) == doctest::Approx(0.0).epsilon(1e-12));

  // step at 0 has |phi| = 1, so w = 1 at every scale and the bracket
  // collapses to a closed sum
  const auto& step = corpus_function("step");
  const int n = 7;
  double bracket = 0.0;
  for (int k = 0; k <= n; ++k) {
    bracket += pair.psi_prime(1.0 / (k + 1.0)) / std::sqrt(k + 1.0) *
               pair.eval_psi(1.0);
  }
  bracket += (n + 1.0) * pair.eval_psi(1.0 / (n + 1.0)) * pair.eval_psi(1.0);
  CHECK(theorem_rhs(pair, step, 0.0, n) ==
        doctest::Approx(pair.inverse_psi(bracket)).epsilon(1e-9));
}

TEST_CASE("rhs variants re-evaluated term by term") {
  auto p2 = ComplementaryPair::power_pair(2.0);
  const auto& absx = corpus_function("absx");
  const int n = 7;
  const auto blocks = block_integrals(
      absx, 0.0, n, [&](double a) { return p2.eval_psi(a); });
  // literal re-summation through w and Psi(w)
  double prefix = 0.0, sum_thm = 0.0;
  for (int k = 0; k <= n; ++k) {
    prefix += blocks[k];
    const double tau = kPi * (k + 1.0) / (n + 1.0);
    const double w = p2.inverse_psi(prefix / tau);
    sum_thm += p2.psi_prime(1.0 / (k + 1.0)) / std::sqrt(k + 1.0) *
               p2.eval_psi(w);
  }
  sum_thm += (n + 1.0) * p2.eval_psi(1.0 / (n + 1.0)) * (prefix / kPi);
  const double want = p2.inverse_psi(sum_thm);
  CHECK(theorem_rhs(p2, absx, 0.0, n) ==
        doctest::Approx(want).epsilon(1e-12));
  // the three weight variants are ordered by their exponents
  const double thm = theorem_rhs(p2, absx, 0.0, n, RhsWeight::theorem_sqrt);
  const double k32 =
      theorem_rhs(p2, absx, 0.0, n, RhsWeight::proof_three_halves);
  CHECK(thm >= k32);
}

TEST_CASE("theorem rhs against the brute-force riemann oracle") {
  auto pair = ComplementaryPair::exp_pair();
  const auto& sq = corpus_function("square");
  const double got = theorem_rhs(pair, sq, kPi / 2.0, 15);
  const double want = oracle::theorem_rhs_literal(pair, sq, kPi / 2.0, 15);
  CHECK(oracle::relerr(got, want) < 1e-6);
}

TEST_CASE("psi domain chain") {
  auto pair = ComplementaryPair::exp_pair();
  const auto& saw = corpus_function("sawtooth");
  const auto zero_chain = psi_domain_chain(pair, saw, 0.0, 15);
  CHECK(zero_chain.psi_of_g == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zero_chain.theorem_bracket == doctest::Approx(0.0).epsilon(1e-12));

  const auto& sq = corpus_function("square");
  const auto chain = psi_domain_chain(pair, sq, kPi / 2.0, 63);
  CHECK(std::isfinite(chain.psi_of_g));
  // at delta = pi/(n+1) the definition's blocks k = 1..n+1 and the chain's
  // nu = 0..n are the same set, so Psi applied to G must reproduce psi_of_g
  CHECK(pair.eval_psi(g_p_psi(pair, sq, kPi / 2.0, kPi / 64.0)) ==
        doctest::Approx(chain.psi_of_g).epsilon(1e-9));
  CHECK(chain.abel_sum ==
        doctest::Approx(chain.jensen_sum).epsilon(1e-12));  // identity
  CHECK(chain.lemma1_sum <= chain.jensen_sum * (1.0 + 1e-12));  // Jensen
  CHECK(chain.jensen_sum <= chain.prefix_bound * (1.0 + 1e-12));
  CHECK(chain.prefix_bound <= chain.theorem_bracket * (1.0 + 1e-12));
  CHECK(chain.psi_of_g / chain.theorem_bracket < 50.0);  // empirical constant

  // quadratic pair chain against a literal re-summation
  auto p2 = ComplementaryPair::power_pair(2.0);
  const auto& absx = corpus_function("absx");
  const int n = 15;
  const auto c2 = psi_domain_chain(p2, absx, 0.0, n);
  const auto psi_blocks = block_integrals(
      absx, 0.0, n, [&](double a) { return p2.eval_psi(a); });
  const auto abs_blocks =
      block_integrals(absx, 0.0, n, [](double a) { return a; });
  double psi_of_g = 0.0;
  for (int k = 0; k <= n; ++k) {
    psi_of_g += p2.eval_psi((n + 1.0) / (kPi * (k + 1.0)) * abs_blocks[k]);
  }
  CHECK(c2.psi_of_g == doctest::Approx(psi_of_g).epsilon(1e-10));
  double jensen = 0.0;
  for (int k = 0; k <= n; ++k) {
    jensen += p2.eval_psi(1.0 / (k + 1.0)) * (n + 1.0) / kPi * psi_blocks[k];
  }
  CHECK(c2.jensen_sum == doctest::Approx(jensen).epsilon(1e-10));
}

TEST_CASE("h over g ratio") {
  auto pair = ComplementaryPair::exp_pair();
  const auto& cst = corpus_function("const");
  CHECK(hn_vs_g_ratio(pair, cst, 0.7, 15) == 0.0);  // 0/0 convention

  const auto& sq = corpus_function("square");
  double worst = 0.0;
  for (int n = 3; n <= 511; n = 2 * n + 1) {
    const double r = hn_vs_g_ratio(pair, sq, kPi / 2.0, n);
    CHECK(std::isfinite(r));
    worst = std::max(worst, r);
  }
  CHECK(worst > 0.0);
  CHECK(worst < 10.0);  // bounded sequence, bound recorded

  const auto& saw = corpus_function("sawtooth");
  for (int n = 3; n <= 511; n = 2 * n + 1) {
    CHECK(std::isfinite(hn_vs_g_ratio(pair, saw, kPi / 3.0, n)));
  }
}

TEST_CASE("series sweep agrees with the standalone operations") {
  auto pair = ComplementaryPair::exp_pair();
  const auto& sq = corpus_function("square");
  const std::vector<int> grid = {3, 7, 15, 31, 63};
  const auto series = sweep_series(pair, sq, kPi / 2.0, grid);
  REQUIRE(series.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const int n = grid[i];
    CHECK(series[i].n == n);
    CHECK(series[i].h_phi ==
          doctest::Approx(strong_mean(pair, sq, kPi / 2.0, n).value)
              .epsilon(1e-9));
    CHECK(series[i].rhs_thm ==
          doctest::Approx(theorem_rhs(pair, sq, kPi / 2.0, n)).epsilon(1e-9));
    CHECK(series[i].g_1psi ==
          doctest::Approx(g_p_psi(pair, sq, kPi / 2.0, kPi / (n + 1.0)))
              .epsilon(1e-9));
    CHECK(series[i].wpsi ==
          doctest::Approx(w_psi(pair, sq, kPi / 2.0, kPi / (n + 1.0)))
              .epsilon(1e-9));
    CHECK(series[i].g12 ==
          doctest::Approx(g_ps(sq, kPi / 2.0, kPi / (n + 1.0), 1.0, 2.0))
              .epsilon(1e-9));
  }
  // a non-nested grid goes through the per-n path and must agree too
  const std::vector<int> ragged = {4, 9, 20};
  const auto series2 = sweep_series(pair, sq, kPi / 2.0, ragged);
  for (size_t i = 0; i < ragged.size(); ++i) {
    CHECK(series2[i].rhs_thm ==
          doctest::Approx(theorem_rhs(pair, sq, kPi / 2.0, ragged[i]))
              .epsilon(1e-9));
  }
}

TEST_CASE("overflow flag propagates") {
  // a synthetic pair evaluation far beyond the cap saturates; corpus sweeps
  // must never trip it
  auto pair = ComplementaryPair::exp_pair();
  CHECK(pair.phi().eval_checked(800.0).saturated);
  const auto& sq = corpus_function("square");
  for (int n : {3, 63, 255}) {
    CHECK_FALSE(strong_mean(pair, sq, kPi / 2.0, n).overflow);
  }
}
