#ifndef SDES_TESTS_SUPPORT_HPP
#define SDES_TESTS_SUPPORT_HPP

#include <random>

#include "sdes/graded.hpp"
#include "sdes/hypersurface.hpp"
#include "sdes/segre.hpp"

namespace sdes::test {

inline constexpr Complex kI{0.0, 1.0};

inline TruncatedSeries hvar(std::size_t i, int cap = kDefaultCap) {
  return TruncatedSeries::variable(frames::hypersurface(), cap, i);
}

inline TruncatedSeries fvar(std::size_t i, int cap = kDefaultCap) {
  return TruncatedSeries::variable(frames::family(), cap, i);
}

/// tau + 2i z chi + 2i eps (z^4 chi^2 + z^2 chi^4)
inline TruncatedSeries phi42_theta(double eps, int cap = kDefaultCap) {
  const auto z = hvar(0, cap), c = hvar(1, cap), t = hvar(2, cap);
  const auto z2 = z * z, c2 = c * c;
  return t + 2.0 * kI * z * c + 2.0 * kI * eps * (z2 * z2 * c2 + z2 * c2 * c2);
}

/// b + a z + eps z^k a^l
inline SegreFamily perturbed_model(double eps, int k, int l, int cap = kDefaultCap, ChartRadii radii = {}) {
  auto F = fvar(2, cap) + fvar(0, cap) * fvar(1, cap);
  F.add_term(MultiIndex{k, l, 0}, eps);
  return SegreFamily(F, false, radii);
}

inline SegreFamily quadric_family(int cap = kDefaultCap, ChartRadii radii = {}) {
  const auto z = hvar(0, cap), c = hvar(1, cap), t = hvar(2, cap);
  return raw_family(Hypersurface::from_complex_defining(t + 2.0 * kI * z * c), radii);
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return scale * Complex(u(rng), u(rng));
}

/// Random series with every monomial of weight <= cap present.
inline TruncatedSeries random_series(const Frame& frame, int cap, std::mt19937_64& rng, int minWeight = 0) {
  TruncatedSeries s(frame, cap);
  const std::size_t n = frame.arity();
  std::vector<int> e(n, 0);
  // odometer over exponents bounded by cap / weight
  while (true) {
    const MultiIndex m{std::span<const int>(e)};
    const int d = frame.degree(m);
    if (d <= cap && d >= minWeight) s.add_term(m, random_complex(rng));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++e[i] * frame.weight(i) <= cap) break;
      e[i] = 0;
    }
    if (i == n) break;
  }
  return s;
}

/// Jet of (z, w) -> (z, w) / (1 - r w) with (a, b) -> (a, b) / (1 - r b).
inline WeightedJet scaling_jet(Complex r, int cap) {
  WeightedJet j{TruncatedSeries(frames::plane(), cap), TruncatedSeries(frames::plane(), cap),
                TruncatedSeries(frames::parameters(), cap), TruncatedSeries(frames::parameters(), cap)};
  Complex rk = 1.0;
  for (int k = 0; 2 * k + 1 <= cap; ++k, rk *= r) {
    j.f.add_term(MultiIndex{1, k}, rk);
    j.g.add_term(MultiIndex{0, k + 1}, rk);
    j.lambda.add_term(MultiIndex{1, k}, rk);
    j.mu.add_term(MultiIndex{0, k + 1}, rk);
  }
  return j;
}

/// Largest coefficient difference restricted to the weights a jet built
/// through maxWeight determines: f, lambda below maxWeight, g, mu through it.
inline double jet_difference(const WeightedJet& x, const WeightedJet& y, int maxWeight) {
  auto diff = [](const TruncatedSeries& p, const TruncatedSeries& q, int top) {
    double d = 0.0;
    for (int w = 0; w <= top; ++w) {
      const auto pw = weighted_component(p, w), qw = weighted_component(q, w);
      for (const auto& [m, c] : pw.terms()) d = std::max(d, std::abs(c - qw.coefficient(m)));
      for (const auto& [m, c] : qw.terms()) d = std::max(d, std::abs(c - pw.coefficient(m)));
    }
    return d;
  };
  return std::max({diff(x.f, y.f, maxWeight - 1), diff(x.g, y.g, maxWeight), diff(x.lambda, y.lambda, maxWeight - 1),
                   diff(x.mu, y.mu, maxWeight)});
}

/// r N([(k + l + n - 2) b + (k - 1) a z] Psi) for Psi = sum c z^k a^l b^n.
inline TruncatedSeries predicted_obstruction(const TruncatedSeries& psi, Complex r, int cap) {
  TruncatedSeries out(frames::family(), cap);
  for (const auto& [m, c] : psi.terms()) {
    const int k = m[0], l = m[1], n = m[2];
    const MultiIndex up_b{k, l, n + 1}, up_za{k + 1, l + 1, n};
    if (is_normal_monomial(up_b)) out.add_term(up_b, r * c * static_cast<double>(k + l + n - 2));
    if (is_normal_monomial(up_za)) out.add_term(up_za, r * c * static_cast<double>(k - 1));
  }
  return out;
}

/// -r N(z a Psi)
inline TruncatedSeries stated_obstruction(const TruncatedSeries& psi, Complex r, int cap) {
  TruncatedSeries out(frames::family(), cap);
  for (const auto& [m, c] : psi.terms()) {
    const MultiIndex za{m[0] + 1, m[1] + 1, m[2]};
    if (is_normal_monomial(za)) out.add_term(za, -r * c);
  }
  return out;
}

}  // namespace sdes::test

#endif  // SDES_TESTS_SUPPORT_HPP
