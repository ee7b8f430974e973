#include "oss/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "oss/quadrature.hpp"

using namespace oss;

namespace {
const double kPi = M_PI;

// midpoint-sample DFT route to the coefficients, independent of quadrature
FourierCoefficients dft_coefficients(const PeriodicFunction& f, int N,
                                     int samples = 1 << 14) {
  FourierCoefficients c;
  c.a.assign(N + 1, 0.0);
  c.b.assign(N + 1, 0.0);
  const double h = 2.0 * kPi / samples;
  for (int j = 0; j < samples; ++j) {
    const double x = -kPi + (j + 0.5) * h;
    const double v = f(x);
    c.a0 += v;
    for (int k = 1; k <= N; ++k) {
      c.a[k] += v * std::cos(k * x);
      c.b[k] += v * std::sin(k * x);
    }
  }
  c.a0 *= 2.0 / samples;
  for (int k = 1; k <= N; ++k) {
    c.a[k] *= 2.0 / samples;
    c.b[k] *= 2.0 / samples;
  }
  return c;
}

}  // namespace

TEST_CASE("constant function coefficients") {
  const auto& f = corpus_function("const");
  const auto c = f.coefficients(8);
  CHECK(c->a0 == 2.0);  // a0 = 2c with c = 1
  for (int k = 1; k <= 8; ++k) {
    CHECK(c->a[k] == 0.0);
    CHECK(c->b[k] == 0.0);
  }
  CHECK(partial_sum(*c, 5, 1.234) == 1.0);
}

TEST_CASE("cos 3x coefficients by orthogonality") {
  const auto& f = corpus_function("cos3x");
  const auto c = f.coefficients(8);
  CHECK(c->a[3] == 1.0);
  CHECK(c->a[2] == 0.0);
  const auto numeric = numeric_coefficients(f, 8);
  for (int k = 1; k <= 8; ++k) {
    CHECK(std::abs(numeric.a[k] - c->a[k]) < 1e-10);
    CHECK(std::abs(numeric.b[k]) < 1e-10);
  }
}

TEST_CASE("square wave coefficients and partial sums") {
  const auto& f = corpus_function("square");
  const auto c = f.coefficients(64);
  for (int k = 1; k <= 64; ++k) {
    CHECK(c->a[k] == 0.0);
    const double want = (k % 2) ? 4.0 / (kPi * k) : 0.0;
    CHECK(c->b[k] == doctest::Approx(want).epsilon(1e-15));
  }
  CHECK(partial_sum(*c, 1, kPi / 2.0) ==
        doctest::Approx(4.0 / kPi).epsilon(1e-14));
  for (int nu : {0, 3, 17, 64}) {
    CHECK(std::abs(partial_sum(*c, nu, 0.0)) < 1e-15);  // odd symmetry
  }
  // numeric quadrature route agrees despite the jumps
  const auto numeric = numeric_coefficients(f, 32);
  for (int k = 1; k <= 32; ++k) {
    CHECK(std::abs(numeric.b[k] - c->b[k]) < 1e-8);
    CHECK(std::abs(numeric.a[k]) < 1e-8);
  }
}

TEST_CASE("analytic vs numeric coefficients across the corpus") {
  for (const char* id : {"step", "sawtooth", "absx", "spikes"}) {
    const auto& f = corpus_function(id);
    const auto c = f.coefficients(48);
    const auto numeric = numeric_coefficients(f, 48);
    CHECK(std::abs(numeric.a0 - c->a0) < 1e-8);
    for (int k = 1; k <= 48; ++k) {
      CHECK(std::abs(numeric.a[k] - c->a[k]) < 1e-8);
      CHECK(std::abs(numeric.b[k] - c->b[k]) < 1e-8);
    }
  }
}

TEST_CASE("closed forms hold at high indices too") {
  QuadOptions opt;
  opt.nodes_per_panel = 64;
  opt.rtol = 1e-12;
  for (const char* id : {"square", "spikes", "absx"}) {
    const auto& f = corpus_function(id);
    const auto c = f.coefficients(1000);
    for (int k : {64, 257, 1000}) {
      QuadOptions ok = opt;
      ok.max_panel_width = 24.0 / k;
      const double ak =
          integrate([&](double t) { return f(t) * std::cos(k * t); }, -M_PI,
                    M_PI, f.breakpoints(), ok) /
          M_PI;
      const double bk =
          integrate([&](double t) { return f(t) * std::sin(k * t); }, -M_PI,
                    M_PI, f.breakpoints(), ok) /
          M_PI;
      CHECK(std::abs(ak - c->a[k]) < 1e-8);
      CHECK(std::abs(bk - c->b[k]) < 1e-8);
    }
  }
}

TEST_CASE("oscillator coefficients are even and stable") {
  const auto& f = corpus_function("osc");
  const auto c = f.coefficients(32);
  for (int k = 1; k <= 32; ++k) {
    CHECK(std::abs(c->b[k]) < 1e-10);  // even function
  }
  const auto dft = dft_coefficients(f, 16, 1 << 16);
  for (int k = 0; k <= 16; ++k) {
    CHECK(std::abs((k == 0 ? c->a0 : c->a[k]) -
                   (k == 0 ? dft.a0 : dft.a[k])) < 1e-6);
  }
}

TEST_CASE("partial sums match a direct DFT evaluation for smooth members") {
  for (const char* id : {"cos3x", "absx", "osc"}) {
    const auto& f = corpus_function(id);
    const int N = 48;
    const auto c = f.coefficients(N);
    const auto dft = dft_coefficients(f, N);
    for (double x : {0.3, -1.1, 2.7}) {
      CHECK(std::abs(partial_sum(*c, N, x) - partial_sum(dft, N, x)) < 1e-6);
    }
  }
}

TEST_CASE("partial_sums equals repeated partial_sum") {
  const auto& f = corpus_function("sawtooth");
  const auto c = f.coefficients(40);
  const auto all = partial_sums(*c, 40, 0.9);
  for (int nu : {0, 1, 7, 40}) {
    CHECK(all[nu] == doctest::Approx(partial_sum(*c, nu, 0.9)).epsilon(1e-13));
  }
  CHECK_THROWS(partial_sum(*c, c->max_index() + 1, 0.0));
}

TEST_CASE("parseval sum approaches the square integral") {
  const auto& f = corpus_function("square");
  const auto c = f.coefficients(512);
  double sum = c->a0 * c->a0 / 2.0;
  double prev = sum;
  bool monotone = true;
  for (int k = 1; k <= 512; ++k) {
    sum += c->a[k] * c->a[k] + c->b[k] * c->b[k];
    monotone = monotone && sum >= prev;
    prev = sum;
  }
  CHECK(monotone);
  CHECK(sum == doctest::Approx(2.0).epsilon(0.01));  // (1/pi) integral f^2 = 2
}

TEST_CASE("phi_x closed cases") {
  const auto& saw = corpus_function("sawtooth");
  for (double t : {0.1, 1.0, 2.0}) {
    CHECK(saw.phi_x(0.0, t) == doctest::Approx(0.0).epsilon(1e-15));
  }
  const auto& step = corpus_function("step");
  for (double t : {0.2, 1.5, 3.0}) {
    CHECK(step.phi_x(0.0, t) == -1.0);  // 1 + 0 - 2*1
  }
  const auto& sq = corpus_function("square");
  for (double t : {0.2, 1.5, 3.0}) {
    CHECK(sq.phi_x(0.0, t) == 0.0);  // sign(t) + sign(-t), f(0) = 0
  }
}

TEST_CASE("periodicity and jump limits") {
  for (const auto& f : corpus()) {
    for (double x : {-2.5, -0.3, 0.9, 2.9}) {
      CHECK(f(x + 2.0 * kPi) == doctest::Approx(f(x)).epsilon(1e-12));
    }
    for (const auto& jump : f.discontinuities()) {
      const double eps = 1e-9;
      CHECK(f(jump.x - eps) == doctest::Approx(jump.left_limit).epsilon(1e-6));
      CHECK(f(jump.x + eps) == doctest::Approx(jump.right_limit).epsilon(1e-6));
      CHECK(f(jump.x) == doctest::Approx(jump.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("labels are present and consistent") {
  bool saw_non_lpsi = false;
  for (const auto& f : corpus()) {
    CHECK(!f.labeled_points().empty());
    for (const auto& lp : f.labeled_points()) {
      if (lp.label == PointLabel::non_lpsi_point) {
        saw_non_lpsi = true;
        CHECK(!lp.justification.empty());
      }
    }
  }
  CHECK(saw_non_lpsi);  // the asymmetric step control point
  const auto& step = corpus_function("step");
  CHECK(step.labeled_points().front().label == PointLabel::non_lpsi_point);
}

TEST_CASE("breakpoint preimages in t") {
  const auto& sq = corpus_function("square");
  const auto splits = sq.breakpoints_in_t(kPi / 2.0, 0.0, kPi);
  bool has_half_pi = false;
  for (double t : splits) {
    if (std::abs(t - kPi / 2.0) < 1e-12) has_half_pi = true;
  }
  CHECK(has_half_pi);
}

TEST_CASE("sampled table function") {
  const int n = 1024;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = -kPi + i * 2.0 * kPi / n;
    ys[i] = std::sin(xs[i]);
  }
  auto f = sampled_function("table", xs, ys);
  for (double x : {-2.0, 0.4, 1.9}) {
    CHECK(f(x) == doctest::Approx(std::sin(x)).epsilon(1e-4));
  }
  const char* path = "sampled_test.txt";
  {
    std::ofstream out(path);
    out.precision(17);
    for (int i = 0; i < n; ++i) out << xs[i] << ' ' << ys[i] << '\n';
  }
  auto g = load_sampled_function(path);
  CHECK(g(0.4) == doctest::Approx(std::sin(0.4)).epsilon(1e-4));
  std::remove(path);

  // hat-transform coefficients agree with quadrature over the interpolant
  const auto analytic = f.coefficients(6);
  const auto numeric = numeric_coefficients(f, 6);
  for (int k = 1; k <= 6; ++k) {
    CHECK(std::abs(analytic->a[k] - numeric.a[k]) < 1e-9);
    CHECK(std::abs(analytic->b[k] - numeric.b[k]) < 1e-9);
  }
  CHECK(analytic->b[1] == doctest::Approx(1.0).epsilon(1e-5));

  CHECK_THROWS(sampled_function("bad", {0.0, 1.0, 3.0}, {0.0, 1.0, 2.0}));
}
