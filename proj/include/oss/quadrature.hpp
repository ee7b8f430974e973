#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace oss {

/// Gauss-Legendre rule on [-1, 1]. Nodes/weights are computed once per order
/// and cached process-wide behind a mutex.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_rule(int order);

struct QuadOptions {
  int nodes_per_panel = 32;
  double rtol = 1e-10;
  double atol = 1e-14;
  int max_doublings = 16;
  int initial_subdivisions = 1;    // uniform split of each base panel
  double max_panel_width = 0.0;    // when > 0, split panels down to this width
};

namespace detail {

// Sorted breakpoints strictly inside (a, b), deduplicated, optionally split
// further to a uniform count or a width cap per base panel.
inline std::vector<double> panel_edges(double a, double b,
                                       std::span<const double> breakpoints,
                                       int subdivisions,
                                       double max_panel_width) {
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (subdivisions <= 1 && max_panel_width <= 0.0) return cuts;
  std::vector<double> fine;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    int pieces = std::max(1, subdivisions);
    if (max_panel_width > 0.0) {
      pieces = std::max(pieces,
                        static_cast<int>(std::ceil(len / max_panel_width)));
    }
    for (int j = 0; j < pieces; ++j) {
      fine.push_back(cuts[i] + len * j / pieces);
    }
  }
  fine.push_back(b);
  return fine;
}

template <class F>
double sum_panels(F&& f, const std::vector<double>& edges, int level,
                  const GaussRule& rule) {
  const int pieces = 1 << level;
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double width = (edges[i + 1] - edges[i]) / pieces;
    for (int s = 0; s < pieces; ++s) {
      const double lo = edges[i] + s * width;
      const double mid = lo + 0.5 * width;
      const double half = 0.5 * width;
      double acc = 0.0;
      for (size_t k = 0; k < rule.nodes.size(); ++k) {
        acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
      }
      total += acc * half;
    }
  }
  return total;
}

}  // namespace detail

/// Composite Gauss-Legendre over [a, b] with panel splits at the given
/// breakpoints. Every base panel is halved until two successive refinements
/// agree to the requested tolerance.
template <class F>
double integrate(F&& f, double a, double b,
                 std::span<const double> breakpoints = {},
                 QuadOptions opt = {}) {
  if (!(b > a)) return 0.0;
  const GaussRule& rule = gauss_rule(opt.nodes_per_panel);
  const auto edges = detail::panel_edges(a, b, breakpoints,
                                         opt.initial_subdivisions,
                                         opt.max_panel_width);
  double prev = detail::sum_panels(f, edges, 0, rule);
  for (int level = 1; level <= opt.max_doublings; ++level) {
    const double cur = detail::sum_panels(f, edges, level, rule);
    if (std::abs(cur - prev) <=
        std::max(opt.atol, opt.rtol * std::abs(cur))) {
      return cur;
    }
    prev = cur;
  }
  return prev;
}

/// Adaptive composite Simpson with a fixed panel density per unit length,
/// refined until two successive halvings agree.
template <class F>
double integrate_simpson(F&& f, double a, double b, double rtol = 1e-10,
                         int panels_per_unit = 1024, int max_doublings = 8) {
  if (!(b > a)) return 0.0;
  auto simpson = [&](int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
  };
  int n = std::max(2, panels_per_unit * static_cast<int>(std::ceil(b - a)));
  if (n % 2) ++n;
  double prev = simpson(n);
  for (int d = 0; d < max_doublings; ++d) {
    n *= 2;
    const double cur = simpson(n);
    if (std::abs(cur - prev) <= rtol * std::max(1.0, std::abs(cur))) {
      return cur;
    }
    prev = cur;
  }
  return prev;
}

}  // namespace oss
