#include "sdes/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>

#include "sdes/errors.hpp"

namespace sdes {

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::span<const int>(exponents.begin(), exponents.size())) {}

MultiIndex::MultiIndex(std::span<const int> exponents) {
  if (exponents.size() > kMaxArity) {
    throw ShapeError("MultiIndex: arity exceeds " + std::to_string(kMaxArity));
  }
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const int e = exponents[i];
    if (e < 0 || e > kMaxExponent) {
      throw DomainError("MultiIndex: exponent out of range: " + std::to_string(e));
    }
    bits_ |= static_cast<std::uint64_t>(e) << shift(i);
  }
}

MultiIndex MultiIndex::unit(std::size_t variable, int power) {
  return MultiIndex{}.with(variable, power);
}

MultiIndex MultiIndex::with(std::size_t i, int exponent) const {
  if (i >= kMaxArity) throw ShapeError("MultiIndex: variable index out of range");
  if (exponent < 0 || exponent > kMaxExponent) {
    throw DomainError("MultiIndex: exponent out of range: " + std::to_string(exponent));
  }
  MultiIndex out = *this;
  out.bits_ &= ~(std::uint64_t{0xff} << shift(i));
  out.bits_ |= static_cast<std::uint64_t>(exponent) << shift(i);
  return out;
}

std::vector<int> MultiIndex::to_vector(std::size_t arity) const {
  std::vector<int> out(arity);
  for (std::size_t i = 0; i < arity; ++i) out[i] = (*this)[i];
  return out;
}

// --------------------------------------------------------------------- Frame

Frame::Frame(std::vector<std::string> names, std::vector<int> weights,
             std::vector<std::size_t> conjugates) {
  if (names.size() != weights.size()) throw ShapeError("Frame: names/weights size mismatch");
  if (names.empty() || names.size() > MultiIndex::kMaxArity) {
    throw ShapeError("Frame: arity must be in 1.." + std::to_string(MultiIndex::kMaxArity));
  }
  for (int w : weights) {
    if (w <= 0) throw DomainError("Frame: weights must be positive");
  }
  if (conjugates.empty()) {
    conjugates.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) conjugates[i] = i;
  }
  if (conjugates.size() != names.size()) throw ShapeError("Frame: conjugate map size mismatch");
  for (std::size_t i = 0; i < conjugates.size(); ++i) {
    const std::size_t j = conjugates[i];
    if (j >= names.size() || conjugates[j] != i || weights[i] != weights[j]) {
      throw DomainError("Frame: conjugate map must be a weight-preserving involution");
    }
  }
  data_ = std::make_shared<const Data>(Data{std::move(names), std::move(weights), std::move(conjugates)});
}

std::optional<std::size_t> Frame::index_of(std::string_view name) const {
  const auto& n = data_->names;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == name) return i;
  }
  return std::nullopt;
}

int Frame::degree(const MultiIndex& m) const noexcept {
  int d = 0;
  const auto& w = data_->weights;
  for (std::size_t i = 0; i < w.size(); ++i) d += m[i] * w[i];
  return d;
}

Frame Frame::without(std::size_t i) const {
  if (i >= arity()) throw ShapeError("Frame::without: index out of range");
  std::vector<std::string> names;
  std::vector<int> weights;
  std::vector<std::size_t> old_index;
  for (std::size_t k = 0; k < arity(); ++k) {
    if (k == i) continue;
    names.push_back(data_->names[k]);
    weights.push_back(data_->weights[k]);
    old_index.push_back(k);
  }
  std::vector<std::size_t> conj(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::size_t partner = data_->conjugates[old_index[k]];
    conj[k] = k;
    for (std::size_t q = 0; q < names.size(); ++q) {
      if (old_index[q] == partner) conj[k] = q;
    }
  }
  return Frame(std::move(names), std::move(weights), std::move(conj));
}

bool operator==(const Frame& lhs, const Frame& rhs) noexcept {
  if (lhs.data_ == rhs.data_) return true;
  return lhs.data_->names == rhs.data_->names && lhs.data_->weights == rhs.data_->weights &&
         lhs.data_->conjugates == rhs.data_->conjugates;
}

namespace frames {
const Frame& hypersurface() {
  static const Frame f({"z", "chi", "tau"}, {1, 1, 2}, {1, 0, 2});
  return f;
}
const Frame& real_defining() {
  static const Frame f({"z", "zbar", "u", "v"}, {1, 1, 2, 2}, {1, 0, 2, 3});
  return f;
}
const Frame& family() {
  static const Frame f({"z", "a", "b"}, {1, 1, 2});
  return f;
}
const Frame& plane() {
  static const Frame f({"z", "w"}, {1, 2});
  return f;
}
const Frame& parameters() {
  static const Frame f({"a", "b"}, {1, 2});
  return f;
}
}  // namespace frames

// ----------------------------------------------------------- TruncatedSeries

TruncatedSeries::TruncatedSeries(Frame frame, int cap) : frame_(std::move(frame)), cap_(cap) {
  if (cap < 0 || cap > kMaxCap) {
    throw DomainError("TruncatedSeries: cap must be in 0.." + std::to_string(kMaxCap));
  }
}

TruncatedSeries TruncatedSeries::constant(Frame frame, int cap, Complex value) {
  TruncatedSeries s(std::move(frame), cap);
  s.add_term(MultiIndex{}, value);
  return s;
}

TruncatedSeries TruncatedSeries::variable(Frame frame, int cap, std::size_t index) {
  if (index >= frame.arity()) throw ShapeError("variable: index out of range");
  TruncatedSeries s(std::move(frame), cap);
  s.add_term(MultiIndex::unit(index), 1.0);
  return s;
}

TruncatedSeries TruncatedSeries::monomial(Frame frame, int cap, MultiIndex exponents,
                                          Complex coefficient) {
  TruncatedSeries s(std::move(frame), cap);
  s.add_term(exponents, coefficient);
  return s;
}

Complex TruncatedSeries::coefficient(const MultiIndex& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

double TruncatedSeries::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

int TruncatedSeries::order() const noexcept {
  int best = cap_ + 1;
  for (const auto& [k, c] : terms_) best = std::min(best, frame_.degree(k));
  return best;
}

TruncatedSeries& TruncatedSeries::add_term(const MultiIndex& m, Complex value) {
  for (std::size_t i = arity(); i < MultiIndex::kMaxArity; ++i) {
    if (m[i] != 0) throw ShapeError("add_term: exponent beyond frame arity");
  }
  if (frame_.degree(m) > cap_) return *this;
  if (value == Complex{}) return *this;
  auto [it, inserted] = terms_.try_emplace(m, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Complex{}) terms_.erase(it);
  }
  return *this;
}

void TruncatedSeries::clean_in_place(double relative) {
  const double threshold = relative * max_abs();
  std::erase_if(terms_, [threshold](const auto& kv) {
    const double a = std::abs(kv.second);
    return a == 0.0 || a <= threshold;
  });
}

TruncatedSeries TruncatedSeries::cleaned(double relative) const {
  TruncatedSeries out = *this;
  out.clean_in_place(relative);
  return out;
}

TruncatedSeries TruncatedSeries::truncated(int cap) const {
  TruncatedSeries out(frame_, std::min(cap, cap_));
  for (const auto& [k, c] : terms_) {
    if (frame_.degree(k) <= out.cap_) out.terms_.emplace(k, c);
  }
  return out;
}

TruncatedSeries TruncatedSeries::padded(int cap) const {
  if (cap < cap_) return truncated(cap);
  TruncatedSeries out(frame_, cap);
  out.terms_ = terms_;
  return out;
}

TruncatedSeries TruncatedSeries::conjugate() const {
  TruncatedSeries out(frame_, cap_);
  for (const auto& [k, c] : terms_) {
    MultiIndex swapped;
    for (std::size_t i = 0; i < arity(); ++i) {
      swapped = swapped.with(frame_.conjugate_of(i), k[i]);
    }
    out.terms_.emplace(swapped, std::conj(c));
  }
  return out;
}

TruncatedSeries TruncatedSeries::derivative(std::size_t variable) const {
  if (variable >= arity()) throw ShapeError("derivative: index out of range");
  TruncatedSeries out(frame_, cap_);
  for (const auto& [k, c] : terms_) {
    const int e = k[variable];
    if (e == 0) continue;
    out.add_term(k.with(variable, e - 1), c * static_cast<double>(e));
  }
  return out;
}

TruncatedSeries TruncatedSeries::at_zero(std::size_t variable) const {
  if (variable >= arity()) throw ShapeError("at_zero: index out of range");
  TruncatedSeries out(frame_, cap_);
  for (const auto& [k, c] : terms_) {
    if (k[variable] == 0) out.terms_.emplace(k, c);
  }
  return out;
}

TruncatedSeries TruncatedSeries::relabeled(const Frame& target,
                                           std::span<const std::size_t> index_map) const {
  if (index_map.size() != arity()) throw ShapeError("relabeled: index map size mismatch");
  for (std::size_t i = 0; i < arity(); ++i) {
    if (index_map[i] >= target.arity()) throw ShapeError("relabeled: target index out of range");
    if (target.weight(index_map[i]) != frame_.weight(i)) {
      throw ShapeError("relabeled: weight of " + frame_.name(i) + " changes");
    }
  }
  TruncatedSeries out(target, cap_);
  for (const auto& [k, c] : terms_) {
    MultiIndex moved;
    for (std::size_t i = 0; i < arity(); ++i) {
      if (k[i] != 0) moved = moved.with(index_map[i], moved[index_map[i]] + k[i]);
    }
    out.add_term(moved, c);
  }
  return out;
}

Complex TruncatedSeries::evaluate(std::span<const Complex> point) const {
  if (point.size() != arity()) throw ShapeError("evaluate: point arity mismatch");
  Complex sum{};
  for (const auto& [k, c] : terms_) {
    Complex term = c;
    for (std::size_t i = 0; i < arity(); ++i) {
      for (int e = 0; e < k[i]; ++e) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

void TruncatedSeries::require_compatible(const TruncatedSeries& rhs, const char* op) const {
  if (!(frame_ == rhs.frame_)) throw ShapeError(std::string(op) + ": incompatible frames");
  if (cap_ != rhs.cap_) throw ShapeError(std::string(op) + ": incompatible caps");
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
  require_compatible(rhs, "add");
  for (const auto& [k, c] : rhs.terms_) add_term(k, c);
  clean_in_place(kCleanRelative);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
  require_compatible(rhs, "sub");
  for (const auto& [k, c] : rhs.terms_) add_term(k, -c);
  clean_in_place(kCleanRelative);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scalar) {
  if (scalar == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= scalar;
  return *this;
}

TruncatedSeries operator+(TruncatedSeries lhs, Complex scalar) {
  lhs.add_term(MultiIndex{}, scalar);
  return lhs;
}

TruncatedSeries operator-(TruncatedSeries lhs, Complex scalar) {
  lhs.add_term(MultiIndex{}, -scalar);
  return lhs;
}

namespace {

struct GradedTerm {
  MultiIndex exponents;
  int degree;
  Complex coefficient;
};

std::vector<GradedTerm> by_degree(const TruncatedSeries& s) {
  std::vector<GradedTerm> out;
  out.reserve(s.size());
  for (const auto& [k, c] : s.terms()) out.push_back({k, s.frame().degree(k), c});
  std::stable_sort(out.begin(), out.end(),
                   [](const GradedTerm& x, const GradedTerm& y) { return x.degree < y.degree; });
  return out;
}

}  // namespace

TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
  lhs.require_compatible(rhs, "mul");
  const int cap = lhs.cap_;
  const auto left = by_degree(lhs);
  const auto right = by_degree(rhs);
  std::unordered_map<std::uint64_t, Complex> acc;
  acc.reserve(left.size() * 4 + 16);
  for (const auto& l : left) {
    for (const auto& r : right) {
      if (l.degree + r.degree > cap) break;
      acc[(l.exponents + r.exponents).packed()] += l.coefficient * r.coefficient;
    }
  }
  TruncatedSeries out(lhs.frame_, cap);
  for (const auto& [bits, c] : acc) {
    if (c == Complex{}) continue;
    out.terms_.emplace(MultiIndex::from_packed(bits), c);
  }
  out.clean_in_place(kCleanRelative);
  return out;
}

TruncatedSeries arith(ArithOp op, const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
  switch (op) {
    case ArithOp::add:
      return lhs + rhs;
    case ArithOp::sub:
      return lhs - rhs;
    case ArithOp::mul:
      return lhs * rhs;
  }
  throw DomainError("arith: unknown operation");
}

TruncatedSeries scale(const TruncatedSeries& s, Complex factor) { return s * factor; }

TruncatedSeries weighted_component(const TruncatedSeries& s, int j) {
  TruncatedSeries out(s.frame(), s.cap());
  for (const auto& [k, c] : s.terms()) {
    if (s.frame().degree(k) == j) out.add_term(k, c);
  }
  return out;
}

TruncatedSeries compose(const TruncatedSeries& target, std::span<const TruncatedSeries> images) {
  if (images.size() != target.arity()) {
    throw ShapeError("compose: need one image per target variable");
  }
  const Frame& frame = images.front().frame();
  const int cap = images.front().cap();
  for (const auto& img : images) {
    if (!(img.frame() == frame) || img.cap() != cap) {
      throw ShapeError("compose: images must share frame and cap");
    }
  }

  std::vector<int> max_power(target.arity(), 0);
  for (const auto& [k, c] : target.terms()) {
    for (std::size_t i = 0; i < target.arity(); ++i) max_power[i] = std::max(max_power[i], k[i]);
  }
  for (std::size_t i = 0; i < target.arity(); ++i) {
    if (max_power[i] > 0 && std::abs(images[i].constant_term()) != 0.0) {
      throw DomainError("compose: image of " + target.frame().name(i) +
                        " has a constant term; the composition does not truncate");
    }
  }

  // powers[i][p] = images[i]^p
  std::vector<std::vector<TruncatedSeries>> powers(target.arity());
  for (std::size_t i = 0; i < target.arity(); ++i) {
    powers[i].push_back(TruncatedSeries::constant(frame, cap, 1.0));
    for (int p = 1; p <= max_power[i]; ++p) powers[i].push_back(powers[i].back() * images[i]);
  }

  // Terms are visited in lexicographic order; reuse the product over the
  // leading variables while the prefix of exponents is unchanged.
  TruncatedSeries out(frame, cap);
  const std::size_t n = target.arity();
  std::vector<int> prefix(n, -1);
  std::vector<TruncatedSeries> partial;
  partial.reserve(n);
  for (const auto& [k, c] : target.terms()) {
    std::size_t keep = 0;
    while (keep < n && keep < partial.size() && prefix[keep] == k[keep]) ++keep;
    partial.erase(partial.begin() + static_cast<std::ptrdiff_t>(keep), partial.end());
    for (std::size_t i = keep; i < n; ++i) {
      prefix[i] = k[i];
      if (i == 0) {
        partial.push_back(powers[0][k[0]]);
      } else if (k[i] == 0) {
        partial.push_back(partial.back());
      } else {
        partial.push_back(partial.back() * powers[i][k[i]]);
      }
    }
    for (const auto& [m, v] : partial.back().terms()) out.add_term(m, v * c);
  }
  return out.cleaned();
}

TruncatedSeries substitute(const TruncatedSeries& target, std::span<const Assignment> assignments) {
  std::vector<TruncatedSeries> images;
  images.reserve(target.arity());
  for (std::size_t i = 0; i < target.arity(); ++i) {
    images.push_back(TruncatedSeries::variable(target.frame(), target.cap(), i));
  }
  for (const auto& a : assignments) {
    if (a.variable >= target.arity()) throw ShapeError("substitute: variable index out of range");
    if (!(a.value.frame() == target.frame()) || a.value.cap() != target.cap()) {
      throw ShapeError("substitute: assignment must share the target frame and cap");
    }
    images[a.variable] = a.value;
  }
  return compose(target, images);
}

namespace {

Frame frame_without(const Frame& frame, std::span<const std::size_t> removed) {
  std::vector<std::size_t> sorted(removed.begin(), removed.end());
  std::sort(sorted.rbegin(), sorted.rend());
  Frame out = frame;
  for (std::size_t idx : sorted) out = out.without(idx);
  return out;
}

}  // namespace

std::vector<TruncatedSeries> implicit_solve_system(std::span<const TruncatedSeries> equations,
                                                   std::span<const std::size_t> unknowns) {
  const std::size_t k = unknowns.size();
  if (k == 0 || equations.size() != k) {
    throw ShapeError("implicit_solve: need one equation per unknown");
  }
  const Frame& frame = equations.front().frame();
  const int cap = equations.front().cap();
  for (const auto& e : equations) {
    if (!(e.frame() == frame) || e.cap() != cap) {
      throw ShapeError("implicit_solve: equations must share frame and cap");
    }
  }
  for (std::size_t u : unknowns) {
    if (u >= frame.arity()) throw ShapeError("implicit_solve: unknown index out of range");
  }
  if (k >= frame.arity()) throw ShapeError("implicit_solve: no parameters left");

  double scale = 0.0;
  for (const auto& e : equations) scale = std::max(scale, e.max_abs());
  if (scale == 0.0) throw SingularError("implicit_solve: zero equation");
  for (const auto& e : equations) {
    if (std::abs(e.constant_term()) > kRankEpsilon * scale) {
      throw DomainError("implicit_solve: equation does not vanish at the origin");
    }
  }

  Eigen::MatrixXcd jac(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          equations[i].coefficient(MultiIndex::unit(unknowns[j]));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
  if (svd.singularValues().minCoeff() <= kRankEpsilon) {
    throw SingularError("implicit_solve: degenerate linearization in the unknowns");
  }
  const Eigen::MatrixXcd inv = jac.inverse();

  const Frame params = frame_without(frame, unknowns);
  // Where each original variable goes: parameters map to their new index.
  std::vector<std::size_t> param_index(frame.arity(), 0);
  {
    std::size_t next = 0;
    for (std::size_t v = 0; v < frame.arity(); ++v) {
      if (std::find(unknowns.begin(), unknowns.end(), v) == unknowns.end()) param_index[v] = next++;
    }
  }

  std::vector<TruncatedSeries> solution(k, TruncatedSeries(params, cap));
  const int max_sweeps = 2 * cap + 8;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    std::vector<TruncatedSeries> images;
    images.reserve(frame.arity());
    for (std::size_t v = 0; v < frame.arity(); ++v) {
      const auto it = std::find(unknowns.begin(), unknowns.end(), v);
      if (it != unknowns.end()) {
        images.push_back(solution[static_cast<std::size_t>(it - unknowns.begin())]);
      } else {
        images.push_back(TruncatedSeries::variable(params, cap, param_index[v]));
      }
    }
    std::vector<TruncatedSeries> residual;
    residual.reserve(k);
    double worst = 0.0;
    for (const auto& e : equations) {
      residual.push_back(compose(e, images));
      worst = std::max(worst, residual.back().max_abs());
    }
    if (worst <= 1e-15 * scale) return solution;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < k; ++i) {
        const Complex w = inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        if (w != Complex{}) solution[j] -= residual[i] * w;
      }
    }
  }
  return solution;
}

TruncatedSeries implicit_solve(const TruncatedSeries& equation, std::size_t unknown) {
  const std::array<TruncatedSeries, 1> eqs{equation};
  const std::array<std::size_t, 1> idx{unknown};
  return implicit_solve_system(eqs, idx).front();
}

double max_difference(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
  if (!(lhs.frame() == rhs.frame())) throw ShapeError("max_difference: incompatible frames");
  double worst = 0.0;
  for (const auto& [k, c] : lhs.terms()) worst = std::max(worst, std::abs(c - rhs.coefficient(k)));
  for (const auto& [k, c] : rhs.terms()) {
    if (!lhs.terms().contains(k)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

std::string to_string(const TruncatedSeries& s) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [k, c] : s.terms()) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (std::size_t i = 0; i < s.arity(); ++i) {
      if (k[i] == 0) continue;
      os << '*' << s.frame().name(i);
      if (k[i] > 1) os << '^' << k[i];
    }
  }
  if (first) os << '0';
  os << " + O(" << s.cap() + 1 << ')';
  return os.str();
}

}  // namespace sdes
