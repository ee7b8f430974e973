#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oss {

struct FourierCoefficients {
  double a0 = 0.0;           // (1/pi) * integral of f; the series uses a0/2
  std::vector<double> a;     // cosine, index 1..N stored at [1..N]
  std::vector<double> b;     // sine
  int max_index() const { return static_cast<int>(a.size()) - 1; }
};

enum class PointLabel { lpsi_point, non_lpsi_point };

struct LabeledPoint {
  double x = 0.0;
  PointLabel label = PointLabel::lpsi_point;
  std::string justification;
};

struct JumpPoint {
  double x = 0.0;  // in [-pi, pi)
  double left_limit = 0.0;
  double right_limit = 0.0;
  double value = 0.0;  // what the evaluator returns at the jump itself
};

/// A 2pi-periodic test function. Everything is immutable after construction
/// except the coefficient cache, which is guarded internally.
class PeriodicFunction {
 public:
  using Evaluator = std::function<double(double)>;
  using CoefficientGenerator =
      std::function<void(int, FourierCoefficients&)>;  // fills up to index N

  PeriodicFunction(std::string id, Evaluator eval,
                   std::vector<double> breakpoints,
                   std::vector<JumpPoint> jumps,
                   std::vector<LabeledPoint> labeled,
                   CoefficientGenerator analytic = nullptr);

  const std::string& id() const { return id_; }
  double operator()(double x) const { return eval_(wrap(x)); }
  /// f(x+t) + f(x-t) - 2 f(x)
  double phi_x(double x, double t) const;
  double phi_x(double fx, double x, double t) const;

  const std::vector<JumpPoint>& discontinuities() const { return jumps_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<LabeledPoint>& labeled_points() const { return labeled_; }
  bool has_analytic_coefficients() const { return analytic_ != nullptr; }

  /// Coefficients up to index N: the analytic generator when present, else
  /// panel-split Gauss-Legendre quadrature. Cached; the returned table is
  /// immutable, so holding it across later growth is safe.
  std::shared_ptr<const FourierCoefficients> coefficients(int N) const;

  /// All t in [lo, hi] where x+t or x-t lands on a breakpoint (mod 2pi).
  std::vector<double> breakpoints_in_t(double x, double lo, double hi) const;

  static double wrap(double x);  // into [-pi, pi)

 private:
  std::string id_;
  Evaluator eval_;
  std::vector<double> breakpoints_;
  std::vector<JumpPoint> jumps_;
  std::vector<LabeledPoint> labeled_;
  CoefficientGenerator analytic_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

double partial_sum(const FourierCoefficients& c, int nu, double x);
/// S_0 .. S_nmax evaluated incrementally at one point.
std::vector<double> partial_sums(const FourierCoefficients& c, int nmax,
                                 double x);

/// Quadrature route to the coefficients, independent of any analytic
/// generator; used as the numeric path and for cross-checks.
FourierCoefficients numeric_coefficients(const PeriodicFunction& f, int N);

const std::vector<PeriodicFunction>& corpus();
const PeriodicFunction& corpus_function(const std::string& id);
std::vector<std::string> corpus_ids();

/// Uniform-grid sample table with linear interpolation; approximate by
/// construction, for user-supplied functions.
PeriodicFunction sampled_function(const std::string& id,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y);
PeriodicFunction load_sampled_function(const std::string& path);

}  // namespace oss
