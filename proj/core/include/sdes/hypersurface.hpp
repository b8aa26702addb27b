#ifndef SDES_HYPERSURFACE_HPP
#define SDES_HYPERSURFACE_HPP

#include "sdes/series.hpp"

namespace sdes {

/// Reality residual above which a complex defining equation is rejected.
inline constexpr double kRealityTolerance = 1e-8;

/// Germ at the origin of a real-analytic hypersurface M in C^2, held as its
/// complex defining equation w = Theta(z, conj z, conj w) in the frame
/// (z, chi, tau). Construction validates the chart, the reality of Theta and
/// Levi-nondegeneracy; instances are immutable.
class Hypersurface {
 public:
  /// Validates and wraps a complex defining equation.
  static Hypersurface from_complex_defining(TruncatedSeries theta);

  [[nodiscard]] const TruncatedSeries& theta() const noexcept { return theta_; }
  [[nodiscard]] int cap() const noexcept { return theta_.cap(); }
  [[nodiscard]] Complex levi_coefficient() const noexcept { return levi_; }

  /// w-coordinate of the Segre variety Q_zeta above z, i.e. Theta(z, conj xi, conj eta).
  [[nodiscard]] Complex segre_height(Complex z, Complex xi, Complex eta) const;

 private:
  explicit Hypersurface(TruncatedSeries theta);

  TruncatedSeries theta_;
  Complex levi_;
};

/// Solves phi(z, zbar, (w + conj w)/2, (w - conj w)/(2i)) = 0 for w. phi lives in
/// frames::real_defining() and must be real-valued with phi(0) = 0,
/// d phi(0) = c dv (c real, nonzero) up to a u-component.
Hypersurface from_real_defining(const TruncatedSeries& phi);

/// Largest coefficient of Theta(z, chi, conj-Theta(chi, z, tau)) - tau.
double check_reality(const TruncatedSeries& theta);
double check_reality(const Hypersurface& h);

/// The z*chi coefficient of Theta.
Complex levi_at_origin(const TruncatedSeries& theta);
Complex levi_at_origin(const Hypersurface& h);

}  // namespace sdes

#endif  // SDES_HYPERSURFACE_HPP
