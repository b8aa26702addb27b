#ifndef SDES_SEGRE_HPP
#define SDES_SEGRE_HPP

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "sdes/hypersurface.hpp"
#include "sdes/series.hpp"

namespace sdes {

struct Point2 {
  Complex z;
  Complex w;
};

/// Parameters of the curve w = F(z, a, b).
struct CurveParams {
  Complex a;
  Complex b;
};

/// Radii of the point polydisc U and the parameter polydisc V.
struct ChartRadii {
  double point = 0.5;
  double parameter = 0.5;
};

struct NewtonOptions {
  double tolerance = 1e-12;  // absolute, on residuals
  int max_iterations = 50;
  double separation = 1e-3;  // minimum normalized separation of inputs
};

enum class Verdict { spherical, nonspherical, inconclusive };
std::string_view to_string(Verdict v);

/// Dense evaluator for a series in three variables (value and gradient).
class CompiledSeries {
 public:
  struct Jet {
    Complex value;
    std::array<Complex, 3> gradient;
  };

  CompiledSeries() = default;
  explicit CompiledSeries(const TruncatedSeries& s);

  [[nodiscard]] Complex value(Complex x0, Complex x1, Complex x2) const;
  [[nodiscard]] Jet jet(Complex x0, Complex x1, Complex x2) const;

 private:
  struct Term {
    std::array<int, 3> e;
    Complex c;
  };
  std::vector<Term> terms_;
  std::array<int, 3> max_power_{0, 0, 0};
};

/// A two-parameter family of graphs w = F(z, a, b) in frames::family(),
/// with the distinguished curve L_0 = L_{0,0} = {w = 0} through the origin.
class SegreFamily {
 public:
  explicit SegreFamily(TruncatedSeries F, bool normalized = false, ChartRadii radii = {});

  /// The straight lines w = b + a z.
  static SegreFamily model(int cap = kDefaultCap, ChartRadii radii = {});

  [[nodiscard]] const TruncatedSeries& series() const noexcept { return F_; }
  [[nodiscard]] int cap() const noexcept { return F_.cap(); }
  [[nodiscard]] bool normalized() const noexcept { return normalized_; }
  [[nodiscard]] const ChartRadii& radii() const noexcept { return radii_; }
  [[nodiscard]] SegreFamily with_radii(ChartRadii radii) const;

  /// F and (F_z, F_a, F_b) at (z, a, b), without domain checks.
  [[nodiscard]] CompiledSeries::Jet height_jet(Complex z, CurveParams c) const {
    return height_.jet(z, c.a, c.b);
  }
  /// F_z and (F_zz, F_za, F_zb).
  [[nodiscard]] CompiledSeries::Jet slope_jet(Complex z, CurveParams c) const {
    return slope_.jet(z, c.a, c.b);
  }
  [[nodiscard]] Complex height(Complex z, CurveParams c) const { return height_.value(z, c.a, c.b); }

  [[nodiscard]] bool in_point_disc(Point2 p) const noexcept;
  [[nodiscard]] bool in_parameter_disc(CurveParams c) const noexcept;

 private:
  TruncatedSeries F_;
  bool normalized_;
  ChartRadii radii_;
  CompiledSeries height_;
  CompiledSeries slope_;
};

/// Segre family of h, reparameterized by slope and intercept at z = 0.
SegreFamily raw_family(const Hypersurface& h, ChartRadii radii = {});

/// (a, b) of the Segre variety Q_zeta: a = dTheta/dz(0; conj zeta), b = Theta(0; conj zeta).
CurveParams segre_parameters(const Hypersurface& h, Point2 zeta);

/// Surviving resonant components, one homogeneous series in (z, a, b) per weight.
struct ObstructionReport {
  std::map<int, TruncatedSeries> components;

  [[nodiscard]] double max_abs() const;
  /// Lowest weight with a component above the threshold, 0 if none.
  [[nodiscard]] int first_weight_above(double threshold) const;
};

struct NormalizationResult {
  SegreFamily family;
  ObstructionReport report;
};

/// Thresholds of the normal-form oracle.
inline constexpr double kOracleVanishing = 1e-11;
inline constexpr double kOracleSignificant = 1e-4;

/// Weight-by-weight normalization by maps with identity linear part; only the
/// resonant part survives.
NormalizationResult normalize_family(const SegreFamily& s);

/// Spherical when every surviving component is below kOracleVanishing,
/// nonspherical when one exceeds kOracleSignificant.
Verdict oracle_verdict(const ObstructionReport& report);

Complex curve_eval(const SegreFamily& s, CurveParams c, Complex z);

/// Curve through two points. scale normalizes the separation check.
CurveParams join(const SegreFamily& s, Point2 p1, Point2 p2, const NewtonOptions& opt = {},
                 double scale = 1.0);

/// Curve through P with the given slope at P.
CurveParams pin_slope(const SegreFamily& s, Point2 p, Complex slope, const NewtonOptions& opt = {});

/// Intersection point of two curves.
Point2 intersect(const SegreFamily& s, CurveParams c1, CurveParams c2, const NewtonOptions& opt = {});

/// (|w_Z - h(z_Z; conj zeta)|, |w_zeta - h(z_zeta; conj Z)|).
std::pair<double, double> incidence_residual(const Hypersurface& h, Point2 Z, Point2 zeta);

}  // namespace sdes

#endif  // SDES_SEGRE_HPP
