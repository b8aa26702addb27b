#include "sdes/graded.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sdes/errors.hpp"

namespace sdes {

// --------------------------------------------------------------- WeightedJet

WeightedJet WeightedJet::identity(int cap) {
  return WeightedJet{TruncatedSeries::variable(frames::plane(), cap, 0),
                     TruncatedSeries::variable(frames::plane(), cap, 1),
                     TruncatedSeries::variable(frames::parameters(), cap, 0),
                     TruncatedSeries::variable(frames::parameters(), cap, 1)};
}

WeightedJet WeightedJet::block(int l) const {
  return WeightedJet{weighted_component(f, l - 1), weighted_component(g, l), weighted_component(lambda, l - 1),
                     weighted_component(mu, l)};
}

WeightedJet& WeightedJet::operator+=(const WeightedJet& rhs) {
  f += rhs.f;
  g += rhs.g;
  lambda += rhs.lambda;
  mu += rhs.mu;
  return *this;
}

namespace {

TruncatedSeries below(const TruncatedSeries& s, int weight) {
  TruncatedSeries out(s.frame(), s.cap());
  for (const auto& [k, c] : s.terms()) {
    if (s.frame().degree(k) < weight) out.add_term(k, c);
  }
  return out;
}

// The jet with its weight-l block and everything above removed.
WeightedJet strip_from(const WeightedJet& j, int l) {
  return WeightedJet{below(j.f, l - 1), below(j.g, l), below(j.lambda, l - 1), below(j.mu, l)};
}

const std::array<std::size_t, 2> kParamsToFamily{1, 2};

}  // namespace

// ----------------------------------------------------------------- operator L

TruncatedSeries L_apply(const TruncatedSeries& f, const TruncatedSeries& g, const TruncatedSeries& lambda,
                        const TruncatedSeries& mu) {
  if (!(f.frame() == frames::plane()) || !(g.frame() == frames::plane()) ||
      !(lambda.frame() == frames::parameters()) || !(mu.frame() == frames::parameters())) {
    throw ShapeError("L_apply: f, g must be in (z, w) and lambda, mu in (a, b)");
  }
  const int cap = g.cap();
  if (f.cap() != cap || lambda.cap() != cap || mu.cap() != cap) {
    throw ShapeError("L_apply: components must share the cap");
  }
  const Frame& fam = frames::family();
  const auto z = TruncatedSeries::variable(fam, cap, 0);
  const auto a = TruncatedSeries::variable(fam, cap, 1);
  const auto b = TruncatedSeries::variable(fam, cap, 2);
  const std::array<TruncatedSeries, 2> line{z, b + a * z};
  return compose(g, line) - mu.relabeled(fam, kParamsToFamily) - a * compose(f, line) -
         z * lambda.relabeled(fam, kParamsToFamily);
}

TruncatedSeries L_apply(const WeightedJet& j) { return L_apply(j.f, j.g, j.lambda, j.mu); }

// -------------------------------------------------------------------- bases

bool is_normal_monomial(const MultiIndex& zab) {
  const int k = zab[0];
  const int l = zab[1];
  if (k < 2 || l < 2) return false;
  return !(k <= 3 && l <= 3);
}

std::vector<MultiIndex> monomials_of_weight(const Frame& frame, int weight) {
  std::vector<MultiIndex> out;
  std::vector<int> e(frame.arity(), 0);
  // Depth-first over exponents of each variable.
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == frame.arity()) {
      if (left % frame.weight(i) == 0) {
        e[i] = left / frame.weight(i);
        out.emplace_back(std::span<const int>(e));
      }
      return;
    }
    for (int p = 0; p * frame.weight(i) <= left; ++p) {
      e[i] = p;
      self(self, i + 1, left - p * frame.weight(i));
    }
    e[i] = 0;
  };
  if (weight >= 0) rec(rec, 0, weight);
  std::sort(out.begin(), out.end());
  return out;
}

GradedBasis basis_for_weight(int l) {
  if (l < 3 || l > kMaxCap) throw DomainError("basis_for_weight: weight must be at least 3");
  GradedBasis B;
  B.weight = l;
  B.f = monomials_of_weight(frames::plane(), l - 1);
  B.g = monomials_of_weight(frames::plane(), l);
  B.lambda = monomials_of_weight(frames::parameters(), l - 1);
  B.mu = monomials_of_weight(frames::parameters(), l);
  if (l == 3) {
    B.pinned_f = B.f;
    B.f.clear();
  } else if (l == 4) {
    const MultiIndex zw{1, 1};
    B.pinned_f = {zw};
    std::erase(B.f, zw);
  }
  B.target = monomials_of_weight(frames::family(), l);
  for (const auto& m : B.target) {
    if (is_normal_monomial(m)) B.normal.push_back(m);
  }
  return B;
}

std::vector<SlotMonomial> GradedBasis::unknowns() const {
  std::vector<SlotMonomial> out;
  for (const auto& m : f) out.push_back({Slot::f, m});
  for (const auto& m : g) out.push_back({Slot::g, m});
  for (const auto& m : lambda) out.push_back({Slot::lambda, m});
  for (const auto& m : mu) out.push_back({Slot::mu, m});
  return out;
}

namespace {

WeightedJet zero_jet(int cap) {
  return WeightedJet{TruncatedSeries(frames::plane(), cap), TruncatedSeries(frames::plane(), cap),
                     TruncatedSeries(frames::parameters(), cap), TruncatedSeries(frames::parameters(), cap)};
}

TruncatedSeries& slot_of(WeightedJet& j, Slot s) {
  switch (s) {
    case Slot::f:
      return j.f;
    case Slot::g:
      return j.g;
    case Slot::lambda:
      return j.lambda;
    case Slot::mu:
      return j.mu;
  }
  return j.f;
}

Eigen::MatrixXcd operator_matrix(const GradedBasis& B, double basisScale) {
  const auto unknowns = B.unknowns();
  const int l = B.weight;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(B.target.size()),
                                              static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t col = 0; col < unknowns.size(); ++col) {
    WeightedJet x = zero_jet(l);
    slot_of(x, unknowns[col].slot).add_term(unknowns[col].exponents, basisScale);
    const TruncatedSeries image = L_apply(x);
    for (std::size_t row = 0; row < B.target.size(); ++row) {
      M(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = image.coefficient(B.target[row]);
    }
  }
  return M;
}

// [L | E_N]
Eigen::MatrixXcd combined_matrix(const GradedBasis& B, double basisScale) {
  const Eigen::MatrixXcd L = operator_matrix(B, basisScale);
  Eigen::MatrixXcd C(L.rows(), L.cols() + static_cast<Eigen::Index>(B.normal.size()));
  C.leftCols(L.cols()) = L;
  C.rightCols(static_cast<Eigen::Index>(B.normal.size())).setZero();
  for (std::size_t j = 0; j < B.normal.size(); ++j) {
    const auto row = std::find(B.target.begin(), B.target.end(), B.normal[j]) - B.target.begin();
    C(row, L.cols() + static_cast<Eigen::Index>(j)) = basisScale;
  }
  return C;
}

}  // namespace

LemmaReport verify_lemma_normal(int l, double basisScale, double sigmaMin) {
  if (!(basisScale > 0.0)) throw ValidationError("verify_lemma_normal: basis scale must be positive");
  const GradedBasis B = basis_for_weight(l);
  LemmaReport rep;
  rep.weight = l;
  rep.unknowns = static_cast<int>(B.unknowns().size());
  rep.dimW = static_cast<int>(B.target.size());
  rep.dimN = static_cast<int>(B.normal.size());

  const Eigen::MatrixXcd L = operator_matrix(B, basisScale);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L);
  const auto& sv = svd.singularValues();
  rep.matrixNorm = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  rep.injectivityMargin = sv.size() > 0 ? sv.minCoeff() : 0.0;
  if (L.cols() > L.rows()) rep.injectivityMargin = 0.0;
  rep.relativeMargin = rep.matrixNorm > 0.0 ? rep.injectivityMargin / rep.matrixNorm : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > sigmaMin * rep.matrixNorm) ++rep.dimV;
  }

  const Eigen::MatrixXcd C = combined_matrix(B, basisScale);
  if (C.rows() == C.cols()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> csvd(C);
    rep.decompositionDefect = csvd.singularValues().minCoeff() / csvd.singularValues().maxCoeff();
  }

  if (rep.relativeMargin <= sigmaMin) {
    throw LemmaViolation("verify_lemma_normal: L is not injective on the constrained basis at weight " +
                         std::to_string(l));
  }
  if (rep.dimV + rep.dimN != rep.dimW || rep.decompositionDefect <= sigmaMin) {
    throw LemmaViolation("verify_lemma_normal: W is not the direct sum of image and resonant part at weight " +
                         std::to_string(l));
  }
  return rep;
}

Decomposition decompose(const TruncatedSeries& rhs, int l, int cap) {
  if (!(rhs.frame() == frames::family())) throw ShapeError("decompose: rhs must be in (z, a, b)");
  if (l > cap) throw DomainError("decompose: weight above cap");
  const GradedBasis B = basis_for_weight(l);
  const Eigen::MatrixXcd C = combined_matrix(B, 1.0);
  if (C.rows() != C.cols()) throw InternalAssertion("decompose: graded system is not square");
  Eigen::VectorXcd T(C.rows());
  for (std::size_t i = 0; i < B.target.size(); ++i) T(static_cast<Eigen::Index>(i)) = rhs.coefficient(B.target[i]);

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(C);
  if (lu.rank() < C.rows()) throw SingularError("decompose: graded system is singular");
  const Eigen::VectorXcd x = lu.solve(T);

  Decomposition out{zero_jet(cap), TruncatedSeries(frames::family(), cap)};
  const auto unknowns = B.unknowns();
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    slot_of(out.block, unknowns[i].slot).add_term(unknowns[i].exponents, x(static_cast<Eigen::Index>(i)));
  }
  for (std::size_t j = 0; j < B.normal.size(); ++j) {
    out.normal.add_term(B.normal[j], x(static_cast<Eigen::Index>(unknowns.size() + j)));
  }
  return out;
}

// ------------------------------------------------------------------ recursion

TruncatedSeries identity_residual(const SegreFamily& family, const WeightedJet& jet) {
  const int cap = jet.cap();
  if (family.cap() < cap) throw ShapeError("identity_residual: family cap below jet cap");
  const Frame& fam = frames::family();
  const TruncatedSeries psi = family.series().truncated(cap);
  const auto z = TruncatedSeries::variable(fam, cap, 0);
  const std::array<TruncatedSeries, 2> graph{z, psi};
  const std::array<TruncatedSeries, 3> moved{compose(jet.f, graph), jet.lambda.relabeled(fam, kParamsToFamily),
                                             jet.mu.relabeled(fam, kParamsToFamily)};
  return compose(jet.g, graph) - compose(psi, moved);
}

StepOutcome solve_weight_step(const SegreFamily& family, const WeightedJet& jet, int l, Complex r) {
  const int cap = jet.cap();
  if (l < 3 || l > cap) throw DomainError("solve_weight_step: weight outside 3..cap");
  WeightedJet base = strip_from(jet, l);
  WeightedJet pinned = zero_jet(cap);
  if (l == 4) pinned.f.add_term(MultiIndex{1, 1}, r);
  base += pinned;

  const TruncatedSeries R = identity_residual(family, base);
  const double scale = std::max(1.0, family.series().max_abs());
  for (int j = 0; j < l; ++j) {
    if (weighted_component(R, j).max_abs() > 1e-10 * scale) {
      throw DomainError("solve_weight_step: jet does not satisfy the identity below weight " + std::to_string(l));
    }
  }
  const TruncatedSeries T = -weighted_component(R, l);
  Decomposition d = decompose(T, l, cap);
  if (d.normal.max_abs() <= kSolveEpsilon * std::max(T.max_abs(), 1.0)) {
    d.block += pinned;
    return d.block;
  }
  return Obstruction{l, d.normal, T};
}

namespace {

void require_normalized(const SegreFamily& family) {
  if (family.normalized()) return;
  const double tol = kRankEpsilon * std::max(1.0, family.series().max_abs());
  for (const auto& [k, c] : family.series().terms()) {
    const int deg = frames::family().degree(k);
    if (deg <= 2 || std::abs(c) <= tol) continue;
    if (!is_normal_monomial(k)) {
      throw DomainError("run_recursion: family is not in normal form (normalize it first)");
    }
  }
}

}  // namespace

RecursionResult run_recursion(const SegreFamily& family, Complex r, int maxWeight) {
  if (maxWeight < 2 || maxWeight > family.cap()) throw DomainError("run_recursion: maxWeight outside 2..cap");
  require_normalized(family);
  RecursionResult out{WeightedJet::identity(maxWeight), std::nullopt, 2};
  for (int l = 3; l <= maxWeight; ++l) {
    StepOutcome step = solve_weight_step(family, out.jet, l, r);
    if (auto* obs = std::get_if<Obstruction>(&step)) {
      out.obstruction = std::move(*obs);
      return out;
    }
    out.jet += std::get<WeightedJet>(step);
    out.completedWeight = l;
  }
  return out;
}

}  // namespace sdes
