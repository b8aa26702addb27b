#ifndef SDES_SYMMETRY_HPP
#define SDES_SYMMETRY_HPP

#include <cstdint>

#include "sdes/graded.hpp"
#include "sdes/segre.hpp"

namespace sdes {

inline constexpr double kJetTolerance = 1e-7;

/// The automorphism determined by a pair A, A' on a common curve through O:
/// B maps to (curve A'P) meet (curve OB), where P is (curve AB) meet L_0.
class PhiMap {
 public:
  PhiMap(SegreFamily family, Point2 A, Point2 Aprime, double domainRadius = -1.0);

  /// A and A' on the curve through O with the given slope, at abscissae zA, zAprime.
  static PhiMap on_ray(SegreFamily family, Complex slope, Complex zA, Complex zAprime, double domainRadius = -1.0);

  [[nodiscard]] const SegreFamily& family() const noexcept { return family_; }
  [[nodiscard]] Point2 A() const noexcept { return A_; }
  [[nodiscard]] Point2 Aprime() const noexcept { return Aprime_; }
  [[nodiscard]] CurveParams ray() const noexcept { return ray_; }
  [[nodiscard]] double domainRadius() const noexcept { return domainRadius_; }

  /// Distance of B from the curve OA relative to |z_B|.
  [[nodiscard]] double relative_distance_to_ray(Point2 B) const;
  /// Sector {|z| < r0, |w| < c0 |z|} with r0 the domain radius.
  [[nodiscard]] bool in_sector(Point2 B) const noexcept;

 private:
  SegreFamily family_;
  Point2 A_, Aprime_;
  CurveParams ray_;
  double domainRadius_;
};

inline constexpr double kSectorSlope = 0.5;

/// The construction with (X, X') as the defining pair, evaluated at B.
Point2 phi_via_pair(const SegreFamily& s, Point2 X, Point2 Xprime, Point2 B);

/// Primary branch; B must be off the curve OA and distinct from O.
Point2 phi_apply(const PhiMap& m, Point2 B);

/// Extension across O, L_0 and the curve OA.
Point2 phi_extend(const PhiMap& m, Point2 B);

/// Extension through two fixed points of L_0: K' = (P B') meet (Q C').
Point2 phi_second_extension(const PhiMap& m, Point2 K);

struct PhiJet {
  WeightedJet jet;
  double fitResidual = 0.0;  // max |fit - data| relative to the data size
  double linearDefect = 0.0;  // distance of the linear part from the identity
  Complex r;                  // zw-coefficient of f
};

/// Least-squares Taylor jet of the map at O from samples on a torus grid.
PhiJet phi_jet(const PhiMap& m, int order, int gridSize = 24);

struct PropertyReport {
  double fixedOnL0 = 0.0;       // (a)
  double raysPreserved = 0.0;   // (b)
  double parallelism = 0.0;     // (c)
  int samples = 0;
  int skipped = 0;
};

/// Residuals of the three properties over random points at |z| <= scale.
PropertyReport verify_properties(const PhiMap& m, int nSamples, std::uint64_t seed, double scale);

}  // namespace sdes

#endif  // SDES_SYMMETRY_HPP
