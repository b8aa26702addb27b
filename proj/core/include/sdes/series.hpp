#ifndef SDES_SERIES_HPP
#define SDES_SERIES_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdes {

using Complex = std::complex<double>;

/// Coefficients below this fraction of a series' largest coefficient are
/// discarded after arithmetic.
inline constexpr double kCleanRelative = 1e-14;
/// Threshold for nondegeneracy of linearizations.
inline constexpr double kRankEpsilon = 1e-10;
inline constexpr int kDefaultCap = 8;
inline constexpr int kMaxCap = 100;

/// Exponent vector of a monomial, packed one byte per variable.
///
/// Ordering is lexicographic with the first variable most significant, which
/// makes iteration over a series deterministic and human-readable.
class MultiIndex {
 public:
  static constexpr std::size_t kMaxArity = 8;
  static constexpr int kMaxExponent = 255;

  constexpr MultiIndex() = default;
  MultiIndex(std::initializer_list<int> exponents);
  explicit MultiIndex(std::span<const int> exponents);

  static MultiIndex unit(std::size_t variable, int power = 1);
  static constexpr MultiIndex from_packed(std::uint64_t bits) noexcept {
    MultiIndex m;
    m.bits_ = bits;
    return m;
  }

  [[nodiscard]] int operator[](std::size_t i) const noexcept {
    return static_cast<int>((bits_ >> shift(i)) & 0xffU);
  }
  [[nodiscard]] MultiIndex with(std::size_t i, int exponent) const;
  [[nodiscard]] bool is_zero() const noexcept { return bits_ == 0; }
  [[nodiscard]] std::uint64_t packed() const noexcept { return bits_; }
  [[nodiscard]] std::vector<int> to_vector(std::size_t arity) const;

  /// Exponent-wise sum; callers guarantee no byte overflows (caps are bounded).
  friend MultiIndex operator+(MultiIndex lhs, MultiIndex rhs) noexcept {
    MultiIndex out;
    out.bits_ = lhs.bits_ + rhs.bits_;
    return out;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  static constexpr unsigned shift(std::size_t i) noexcept {
    return static_cast<unsigned>(8 * (kMaxArity - 1 - i));
  }
  std::uint64_t bits_ = 0;
};

/// Variable frame of a series: names, positive weights, and the pairing used
/// by conjugation (variable i is sent to variable conjugate_of(i)).
class Frame {
 public:
  Frame(std::vector<std::string> names, std::vector<int> weights,
        std::vector<std::size_t> conjugates = {});

  [[nodiscard]] std::size_t arity() const noexcept { return data_->names.size(); }
  [[nodiscard]] const std::string& name(std::size_t i) const { return data_->names.at(i); }
  [[nodiscard]] int weight(std::size_t i) const { return data_->weights.at(i); }
  [[nodiscard]] std::size_t conjugate_of(std::size_t i) const { return data_->conjugates.at(i); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return data_->names; }
  [[nodiscard]] const std::vector<int>& weights() const noexcept { return data_->weights; }
  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const;

  [[nodiscard]] int degree(const MultiIndex& m) const noexcept;
  /// The same frame with variable i removed; a broken conjugate pair maps to itself.
  [[nodiscard]] Frame without(std::size_t i) const;

  friend bool operator==(const Frame& lhs, const Frame& rhs) noexcept;

 private:
  struct Data {
    std::vector<std::string> names;
    std::vector<int> weights;
    std::vector<std::size_t> conjugates;
  };
  std::shared_ptr<const Data> data_;
};

/// Frames shared across the library.
namespace frames {
/// (z, chi, tau) standing for (z, conj z, conj w); weights 1, 1, 2; z <-> chi.
const Frame& hypersurface();
/// (z, zbar, u, v) for real defining functions; weights 1, 1, 2, 2; z <-> zbar.
const Frame& real_defining();
/// (z, a, b) for families w = F(z, a, b); weights 1, 1, 2.
const Frame& family();
/// (z, w) for point maps; weights 1, 2.
const Frame& plane();
/// (a, b) for curve parameters; weights 1, 2.
const Frame& parameters();
}  // namespace frames

/// Multivariate complex power series truncated at a weighted degree.
class TruncatedSeries {
 public:
  using TermMap = std::map<MultiIndex, Complex>;

  TruncatedSeries(Frame frame, int cap);

  static TruncatedSeries constant(Frame frame, int cap, Complex value);
  static TruncatedSeries variable(Frame frame, int cap, std::size_t index);
  static TruncatedSeries monomial(Frame frame, int cap, MultiIndex exponents,
                                  Complex coefficient = 1.0);

  [[nodiscard]] const Frame& frame() const noexcept { return frame_; }
  [[nodiscard]] int cap() const noexcept { return cap_; }
  [[nodiscard]] std::size_t arity() const noexcept { return frame_.arity(); }
  [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

  [[nodiscard]] Complex coefficient(const MultiIndex& m) const;
  [[nodiscard]] Complex constant_term() const { return coefficient(MultiIndex{}); }
  [[nodiscard]] double max_abs() const noexcept;
  /// Smallest weighted degree carrying a nonzero coefficient; cap + 1 for zero.
  [[nodiscard]] int order() const noexcept;

  /// Accumulates a coefficient; monomials above the cap are ignored.
  TruncatedSeries& add_term(const MultiIndex& m, Complex value);

  [[nodiscard]] TruncatedSeries cleaned(double relative = kCleanRelative) const;
  [[nodiscard]] TruncatedSeries truncated(int cap) const;
  /// Reinterprets the retained terms at a larger cap (exact only for polynomials
  /// whose omitted terms are known to vanish).
  [[nodiscard]] TruncatedSeries padded(int cap) const;
  [[nodiscard]] TruncatedSeries conjugate() const;
  /// Partial derivative; the result keeps the cap, so its top weight(i) layers
  /// are only as reliable as the caller's knowledge of the input beyond cap.
  [[nodiscard]] TruncatedSeries derivative(std::size_t variable) const;
  /// Sets variable i to zero (drops every monomial containing it).
  [[nodiscard]] TruncatedSeries at_zero(std::size_t variable) const;
  /// Moves the series into another frame; variable i becomes target variable
  /// index_map[i].
  [[nodiscard]] TruncatedSeries relabeled(const Frame& target,
                                          std::span<const std::size_t> index_map) const;

  [[nodiscard]] Complex evaluate(std::span<const Complex> point) const;

  TruncatedSeries operator-() const;
  TruncatedSeries& operator+=(const TruncatedSeries& rhs);
  TruncatedSeries& operator-=(const TruncatedSeries& rhs);
  TruncatedSeries& operator*=(Complex scalar);

  friend TruncatedSeries operator+(TruncatedSeries lhs, const TruncatedSeries& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend TruncatedSeries operator-(TruncatedSeries lhs, const TruncatedSeries& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend TruncatedSeries operator*(TruncatedSeries lhs, Complex scalar) {
    lhs *= scalar;
    return lhs;
  }
  friend TruncatedSeries operator*(Complex scalar, TruncatedSeries rhs) {
    rhs *= scalar;
    return rhs;
  }
  friend TruncatedSeries operator+(TruncatedSeries lhs, Complex scalar);
  friend TruncatedSeries operator-(TruncatedSeries lhs, Complex scalar);
  friend TruncatedSeries operator+(Complex scalar, TruncatedSeries rhs) { return std::move(rhs) + scalar; }
  friend TruncatedSeries operator-(Complex scalar, const TruncatedSeries& rhs) { return -rhs + scalar; }
  friend TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs);

 private:
  void require_compatible(const TruncatedSeries& rhs, const char* op) const;
  void clean_in_place(double relative);

  Frame frame_;
  int cap_;
  TermMap terms_;
};

/// The arithmetic entry point used by the front-end: one of add, sub, mul.
enum class ArithOp { add, sub, mul };
TruncatedSeries arith(ArithOp op, const TruncatedSeries& lhs, const TruncatedSeries& rhs);
TruncatedSeries scale(const TruncatedSeries& s, Complex factor);

/// Sum of the monomials of weighted degree exactly j.
TruncatedSeries weighted_component(const TruncatedSeries& s, int j);

/// Replaces every variable of target by the corresponding image series. All
/// images share one frame and cap, which become the frame and cap of the
/// result. Exact through the result cap when each image has order at least the
/// weight of the variable it replaces.
TruncatedSeries compose(const TruncatedSeries& target, std::span<const TruncatedSeries> images);

struct Assignment {
  std::size_t variable;
  TruncatedSeries value;
};

/// Substitutes selected variables by series of the same frame and cap.
TruncatedSeries substitute(const TruncatedSeries& target, std::span<const Assignment> assignments);

/// Solves equation(unknown = u(params), params) = 0 for u as a series in the
/// remaining variables by chord iteration on jets (each sweep gains at least one
/// weighted order).
TruncatedSeries implicit_solve(const TruncatedSeries& equation, std::size_t unknown);

/// Simultaneous version: one equation per unknown. The result frame drops the
/// unknowns, keeping the remaining variables in order.
std::vector<TruncatedSeries> implicit_solve_system(std::span<const TruncatedSeries> equations,
                                                   std::span<const std::size_t> unknowns);

/// Maximum coefficient magnitude of lhs - rhs (frames must agree).
double max_difference(const TruncatedSeries& lhs, const TruncatedSeries& rhs);

std::string to_string(const TruncatedSeries& s);

}  // namespace sdes

#endif  // SDES_SERIES_HPP
