#include <gtest/gtest.h>

#include <random>

#include "sdes/errors.hpp"
#include "sdes/series.hpp"
#include "support.hpp"

using namespace sdes;
using sdes::test::kI;

namespace {

double relative_difference(const TruncatedSeries& a, const TruncatedSeries& b) {
  const double size = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return max_difference(a, b) / size;
}

// (w, z, zb, wb) with w <-> wb, z <-> zb
const Frame& solve_frame() {
  static const Frame f({"w", "z", "zb", "wb"}, {2, 1, 1, 2}, {3, 2, 1, 0});
  return f;
}

// (z, w, a, b) for substitution examples
const Frame& zwab() {
  static const Frame f({"z", "w", "a", "b"}, {1, 2, 1, 2});
  return f;
}

}  // namespace

TEST(Series, AdditiveInverseIsZero) {
  const auto z = TruncatedSeries::variable(frames::plane(), 3, 0);
  EXPECT_TRUE((z + (-z)).is_zero());
  EXPECT_TRUE(arith(ArithOp::sub, z, z).is_zero());
}

TEST(Series, ProductKeepsWeightThree) {
  const auto z = TruncatedSeries::variable(frames::plane(), 3, 0);
  const auto w = TruncatedSeries::variable(frames::plane(), 3, 1);
  const auto zw = z * w;
  ASSERT_EQ(zw.size(), 1u);
  EXPECT_EQ(zw.coefficient(MultiIndex{1, 1}), Complex(1.0));
  EXPECT_TRUE((w * w).is_zero());
}

TEST(Series, IncompatibleShapesThrow) {
  const auto z3 = TruncatedSeries::variable(frames::plane(), 3, 0);
  const auto z4 = TruncatedSeries::variable(frames::plane(), 4, 0);
  const auto a = TruncatedSeries::variable(frames::parameters(), 3, 0);
  EXPECT_THROW(z3 + z4, ShapeError);
  EXPECT_THROW(z3 * a, ShapeError);
}

TEST(Series, SubstituteLineIntoSquare) {
  const int cap = 6;
  const auto z = TruncatedSeries::variable(zwab(), cap, 0);
  const auto w = TruncatedSeries::variable(zwab(), cap, 1);
  const auto a = TruncatedSeries::variable(zwab(), cap, 2);
  const auto b = TruncatedSeries::variable(zwab(), cap, 3);
  const std::vector<Assignment> line{{1, b + a * z}};
  const auto got = substitute(w * w, line);
  EXPECT_LE(max_difference(got, b * b + 2.0 * a * b * z + a * a * z * z), 1e-15);
  EXPECT_EQ(max_difference(substitute(z, line), z), 0.0);
  const std::vector<Assignment> id{{1, w}};
  const auto g = z * w + 3.0 * w * w;
  EXPECT_EQ(max_difference(substitute(g, id), g), 0.0);
}

TEST(Series, WeightedComponentExamples) {
  const Complex r(0.3, -1.2);
  const auto z = TruncatedSeries::variable(frames::plane(), 6, 0);
  const auto w = TruncatedSeries::variable(frames::plane(), 6, 1);
  EXPECT_EQ(max_difference(weighted_component(z + r * z * w, 3), r * z * w), 0.0);
  EXPECT_EQ(max_difference(weighted_component(w * w, 4), w * w), 0.0);
  const auto F = test::fvar(2) + test::fvar(0) * test::fvar(1);
  EXPECT_EQ(max_difference(weighted_component(F, 2), F), 0.0);
}

TEST(Series, WeightedComponentIsProjection) {
  std::mt19937_64 rng(5);
  const auto s = test::random_series(frames::family(), 8, rng);
  for (int j = 0; j <= 8; ++j) {
    const auto c = weighted_component(s, j);
    EXPECT_EQ(max_difference(weighted_component(c, j), c), 0.0);
    for (int k = j + 1; k <= 8; ++k) {
      const auto other = weighted_component(s, k);
      for (const auto& [m, v] : other.terms()) EXPECT_EQ(c.coefficient(m), Complex{});
    }
  }
}

TEST(Series, ImplicitSolveQuadric) {
  const int cap = 8;
  auto v = [&](std::size_t i) { return TruncatedSeries::variable(solve_frame(), cap, i); };
  const auto eq = v(0) - v(3) - 2.0 * kI * v(1) * v(2);
  const auto sol = implicit_solve(eq, 0);
  const Frame& f = sol.frame();
  ASSERT_EQ(f.arity(), 3u);
  const auto z = TruncatedSeries::variable(f, cap, 0), zb = TruncatedSeries::variable(f, cap, 1),
             wb = TruncatedSeries::variable(f, cap, 2);
  EXPECT_LE(max_difference(sol, wb + 2.0 * kI * z * zb), 1e-15);

  const auto eq2 = eq - 2.0 * kI * v(1) * v(1) * v(2) * v(2);
  EXPECT_LE(max_difference(implicit_solve(eq2, 0), wb + 2.0 * kI * z * zb + 2.0 * kI * z * z * zb * zb), 1e-15);
}

TEST(Series, ImplicitSolveExplicitLine) {
  const Frame f({"w", "z", "a", "b"}, {2, 1, 1, 2});
  auto v = [&](std::size_t i) { return TruncatedSeries::variable(f, 8, i); };
  const auto sol = implicit_solve(v(0) - v(3) - v(2) * v(1), 0);
  const auto z = TruncatedSeries::variable(sol.frame(), 8, 0), a = TruncatedSeries::variable(sol.frame(), 8, 1),
             b = TruncatedSeries::variable(sol.frame(), 8, 2);
  EXPECT_LE(max_difference(sol, b + a * z), 1e-15);
}

TEST(Series, ImplicitSolveResubstitutes) {
  const Frame f({"u", "x", "y"}, {1, 1, 2});
  std::mt19937_64 rng(11);
  const int cap = 8;
  const auto u = TruncatedSeries::variable(f, cap, 0);
  // u - x plus random terms of weight >= 2
  const auto eq = u - TruncatedSeries::variable(f, cap, 1) + 0.3 * test::random_series(f, cap, rng, 2);
  const auto sol = implicit_solve(eq, 0);
  const std::vector<TruncatedSeries> images{sol, TruncatedSeries::variable(sol.frame(), cap, 0),
                                            TruncatedSeries::variable(sol.frame(), cap, 1)};
  const auto back = compose(eq, images);
  EXPECT_LE(back.max_abs(), 1e-12 * eq.max_abs());
}

TEST(Series, RingAxioms) {
  std::mt19937_64 rng(3);
  const Frame& H = frames::hypersurface();
  for (int trial = 0; trial < 3; ++trial) {
    const auto a = test::random_series(H, 8, rng), b = test::random_series(H, 8, rng), c = test::random_series(H, 8, rng);
    EXPECT_LE(relative_difference((a * b) * c, a * (b * c)), 1e-13);
    EXPECT_LE(relative_difference(a * (b + c), a * b + a * c), 1e-13);
    EXPECT_LE(relative_difference(a * b, b * a), 1e-13);
  }
}

TEST(Series, SubstituteNests) {
  std::mt19937_64 rng(17);
  const Frame& F = frames::family();
  const int cap = 8;
  const auto s = test::random_series(F, cap, rng);
  const auto z = test::fvar(0), a = test::fvar(1), b = test::fvar(2);
  const std::vector<Assignment> s1{{0, z + 0.5 * a * a}, {2, b + 0.25 * z * a}};
  const std::vector<Assignment> s2{{1, a + 0.3 * z * b}, {2, b - 0.2 * b * b}};
  std::vector<Assignment> both;
  for (std::size_t v = 0; v < 3; ++v) {
    TruncatedSeries img = TruncatedSeries::variable(F, cap, v);
    for (const auto& as : s1) {
      if (as.variable == v) img = as.value;
    }
    both.push_back({v, substitute(img, s2)});
  }
  const auto lhs = substitute(substitute(s, s1), s2);
  EXPECT_LE(max_difference(lhs, substitute(s, both)), 1e-12 * std::max(1.0, lhs.max_abs()));
}

TEST(Series, CleanupDropsDust) {
  auto z = test::fvar(0);
  auto dust = z + 1e-17 * test::fvar(2);
  const auto cleaned = dust.cleaned();
  EXPECT_EQ(cleaned.size(), 1u);
}

TEST(Series, ConjugateSwapsPairedSlots) {
  const auto zc = (2.0 + kI) * test::hvar(0) * test::hvar(1) * test::hvar(1);
  const auto c = zc.conjugate();
  EXPECT_EQ(c.coefficient(MultiIndex{2, 1, 0}), Complex(2.0, -1.0));
}
