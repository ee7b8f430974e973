#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oss {

struct PhiValue {
  double value = 0.0;
  bool saturated = false;  // true when the linear-domain value overflowed
};

/// An N-function: even, convex, vanishing only at 0, superlinear at infinity,
/// generated by its left derivative. Closed forms are evaluated directly;
/// the generic kind integrates its derivative with composite Simpson.
class NFunction {
 public:
  enum class Kind { exp_phi, exp_psi, power, from_derivative };
  enum class DerivativeShape { convex, concave, linear, unknown };

  static NFunction exp_phi();                 // e^|u| - |u| - 1
  static NFunction exp_psi();                 // (1+|v|) log(1+|v|) - |v|
  static NFunction power(double alpha);       // |u|^alpha, alpha > 1
  static NFunction from_derivative(std::function<double(double)> p,
                                   std::string name,
                                   DerivativeShape shape);
  // Piecewise-linear derivative given by strictly increasing samples;
  // the integral is evaluated exactly, segment by segment.
  static NFunction from_table(std::vector<double> t, std::vector<double> p,
                              std::string name);

  double operator()(double u) const { return eval(u); }
  double eval(double u) const;
  PhiValue eval_checked(double u) const;
  /// log of the value; remains finite for the exponential kind past the
  /// point where the linear-domain value overflows.
  double log_eval(double u) const;
  double derivative(double t) const;  // left derivative p(t), t >= 0
  double inverse(double y) const;     // y >= 0; inverse(0) == 0 exactly
  double inverse_from_log(double log_y) const;

  Kind kind() const { return kind_; }
  DerivativeShape derivative_shape() const { return shape_; }
  double power_exponent() const { return alpha_; }
  double domain_cap() const { return domain_cap_; }
  const std::string& name() const { return name_; }

 private:
  NFunction() = default;

  Kind kind_ = Kind::from_derivative;
  DerivativeShape shape_ = DerivativeShape::unknown;
  double alpha_ = 0.0;
  double domain_cap_ = 700.0;
  std::string name_;
  std::function<double(double)> p_;  // from_derivative kind
  std::vector<double> tab_t_, tab_p_, tab_prefix_;  // from_table kind
  bool tabulated_ = false;

  double integral_of_derivative(double u) const;
};

struct ConditionFlags {
  bool psi_over_x_nondecreasing = false;
  bool psi_over_x2_nonincreasing = false;
  bool p_convex = false;
  bool q_over_s_nonincreasing = false;
  bool series_converges_heuristic = false;
  bool psi_equiv_u2_small = false;
  bool all() const {
    return psi_over_x_nondecreasing && psi_over_x2_nonincreasing && p_convex &&
           q_over_s_nonincreasing && series_converges_heuristic &&
           psi_equiv_u2_small;
  }
};

struct ConditionDiagnostics {
  double young_worst_gap = 0.0;       // min of Phi(u)+Psi(v)-|uv| over the grid
  double young_equality_worst = 0.0;  // max |gap| along v = p(u)
  double series_partial_sum = 0.0;
  double series_tail_slope = 0.0;  // log-log slope of the last decade of terms
  double q_continuity_max_step = 0.0;  // largest relative step between grid evals
  double psi_u2_c1 = 0.0;  // fitted bounds of Psi(u)/u^2 on (0, u_small]
  double psi_u2_c2 = 0.0;
  double lemma1_constant = 0.0;
};

struct GridSpec {
  double u_min = 1.0 / 4096.0;  // 2^-12
  double u_max = 64.0;
  int points_per_octave = 8;
  double u_small = 0.5;
  int series_terms = 4096;
  double series_slope_margin = 0.05;  // converged iff slope <= -(1 + margin)
  double monotone_rtol = 1e-9;
  std::optional<bool> series_override;
};

/// A complementary pair (Phi, Psi). q_left is the left inverse of p and
/// feeds the round-trip checks and the sup-based conjugate; psi_prime is the
/// left derivative of the shipped Psi and is the weight the estimates use.
/// For the exponential and tabulated pairs the two coincide.
class ComplementaryPair {
 public:
  static ComplementaryPair exp_pair();
  static ComplementaryPair power_pair(double alpha);
  static ComplementaryPair from_file(const std::string& path);
  /// "exp", "power:<alpha>", or "file:<path>".
  static ComplementaryPair parse(const std::string& id);

  const std::string& id() const { return id_; }
  const NFunction& phi() const { return phi_; }
  const NFunction& psi() const { return psi_; }

  double eval_phi(double u) const { return phi_.eval(u); }
  double eval_psi(double v) const { return psi_.eval(v); }
  double inverse_phi(double y) const { return phi_.inverse(y); }
  double inverse_psi(double y) const { return psi_.inverse(y); }
  double p(double t) const { return phi_.derivative(t); }
  double q_left(double s) const;
  double psi_prime(double s) const { return psi_.derivative(s); }

  /// sup over [0, u_max] of u|v| - Phi(u); requires p(u_max) > |v|.
  double legendre_conjugate(double v, double u_max) const;
  friend double legendre_conjugate(const NFunction& nf, double v,
                                   double u_max);
  double young_gap(double u, double v) const;
  double lemma1_ratio(double u, long n) const;
  ConditionFlags check_conditions(const GridSpec& grid = {},
                                  ConditionDiagnostics* diag = nullptr) const;

 private:
  ComplementaryPair(std::string id, NFunction phi, NFunction psi,
                    std::function<double(double)> q_left);
  std::string id_;
  NFunction phi_;
  NFunction psi_;
  std::function<double(double)> q_left_;
};

/// sup over [0, u_max] of u|v| - nf(u); the conjugate of nf at v, used as an
/// independent oracle for a shipped Psi.
double legendre_conjugate(const NFunction& nf, double v, double u_max);

}  // namespace oss
