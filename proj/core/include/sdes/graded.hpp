#ifndef SDES_GRADED_HPP
#define SDES_GRADED_HPP

#include <optional>
#include <variant>
#include <vector>

#include "sdes/segre.hpp"
#include "sdes/series.hpp"

namespace sdes {

/// Relative smallest-singular-value threshold for rank decisions.
inline constexpr double kSigmaMin = 1e-8;
/// Relative consistency threshold for graded linear systems.
inline constexpr double kSolveEpsilon = 1e-9;

/// Jet of a point map (z, w) -> (f, g) together with the induced parameter
/// map (a, b) -> (lambda, mu). f, g live in frames::plane(), lambda, mu in
/// frames::parameters().
struct WeightedJet {
  TruncatedSeries f;
  TruncatedSeries g;
  TruncatedSeries lambda;
  TruncatedSeries mu;

  [[nodiscard]] int cap() const noexcept { return g.cap(); }

  static WeightedJet identity(int cap);
  /// The components (f_{l-1}, g_l, lambda_{l-1}, mu_l).
  [[nodiscard]] WeightedJet block(int l) const;
  /// Adds another jet of the same cap slot by slot.
  WeightedJet& operator+=(const WeightedJet& rhs);
};

enum class Slot { f, g, lambda, mu };

struct SlotMonomial {
  Slot slot;
  MultiIndex exponents;
};

/// Monomial bases at weight l: free slot monomials after the constraints, the
/// constrained f-monomials, the target space W and its resonant part N.
struct GradedBasis {
  int weight = 0;
  std::vector<MultiIndex> f, g, lambda, mu;
  std::vector<MultiIndex> pinned_f;
  std::vector<MultiIndex> target;
  std::vector<MultiIndex> normal;

  /// Free unknowns in slot order f, g, lambda, mu.
  [[nodiscard]] std::vector<SlotMonomial> unknowns() const;
};

/// g(z, b + a z) - mu(a, b) - a f(z, b + a z) - z lambda(a, b), in frames::family().
TruncatedSeries L_apply(const TruncatedSeries& f, const TruncatedSeries& g, const TruncatedSeries& lambda,
                        const TruncatedSeries& mu);
TruncatedSeries L_apply(const WeightedJet& j);

/// z^k a^l b^m is resonant when k, l >= 2 and (k, l) is not one of 22, 23, 32, 33.
bool is_normal_monomial(const MultiIndex& zab);

/// Monomials of a frame with the given weighted degree, in MultiIndex order.
std::vector<MultiIndex> monomials_of_weight(const Frame& frame, int weight);

GradedBasis basis_for_weight(int l);

struct LemmaReport {
  int weight = 0;
  int unknowns = 0;
  int dimV = 0;
  int dimN = 0;
  int dimW = 0;
  double injectivityMargin = 0.0;  // smallest singular value of L on the free basis
  double matrixNorm = 0.0;         // largest singular value
  double relativeMargin = 0.0;     // injectivityMargin / matrixNorm
  double decompositionDefect = 0.0;  // smallest singular value of [L | E_N], relative
};

/// Checks injectivity of L on the constrained basis and W = V + N at weight l.
/// basisScale multiplies every basis vector. Throws LemmaViolation when a
/// margin falls below sigmaMin.
LemmaReport verify_lemma_normal(int l, double basisScale = 1.0, double sigmaMin = kSigmaMin);

/// Unique x, n with L(x) + n = rhs, x in the constrained basis, n in N.
struct Decomposition {
  WeightedJet block;  // homogeneous components, cap = l
  TruncatedSeries normal;
};
Decomposition decompose(const TruncatedSeries& rhs, int l, int cap);

struct Obstruction {
  int weight = 0;
  TruncatedSeries nComponent;  // resonant part of the right-hand side, frames::family()
  TruncatedSeries rhs;
  [[nodiscard]] double magnitude() const { return nComponent.max_abs(); }
};

/// g(z, Psi) - Psi(f(z, Psi), lambda, mu) with Psi = F(z, a, b).
TruncatedSeries identity_residual(const SegreFamily& family, const WeightedJet& jet);

using StepOutcome = std::variant<WeightedJet, Obstruction>;

/// Solves the weight-l block given a jet complete below l. r is the value of
/// the zw-coefficient of f_3 and is used only at l = 4.
StepOutcome solve_weight_step(const SegreFamily& family, const WeightedJet& jet, int l, Complex r = 0.0);

struct RecursionResult {
  WeightedJet jet;
  std::optional<Obstruction> obstruction;
  int completedWeight = 0;
};

RecursionResult run_recursion(const SegreFamily& family, Complex r, int maxWeight);

}  // namespace sdes

#endif  // SDES_GRADED_HPP
