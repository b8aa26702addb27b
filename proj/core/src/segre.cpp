#include "sdes/segre.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sdes/errors.hpp"

namespace sdes {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::spherical:
      return "spherical";
    case Verdict::nonspherical:
      return "nonspherical";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

// ------------------------------------------------------------ CompiledSeries

CompiledSeries::CompiledSeries(const TruncatedSeries& s) {
  if (s.arity() != 3) throw ShapeError("CompiledSeries: expected three variables");
  terms_.reserve(s.size());
  for (const auto& [k, c] : s.terms()) {
    Term t{{k[0], k[1], k[2]}, c};
    for (int i = 0; i < 3; ++i) max_power_[i] = std::max(max_power_[i], t.e[i]);
    terms_.push_back(t);
  }
}

namespace {

struct PowerTable {
  std::array<std::vector<Complex>, 3> p;

  PowerTable(const std::array<int, 3>& max_power, const std::array<Complex, 3>& x) {
    for (int i = 0; i < 3; ++i) {
      p[i].resize(static_cast<std::size_t>(max_power[i]) + 1);
      p[i][0] = 1.0;
      for (int e = 1; e <= max_power[i]; ++e) p[i][e] = p[i][e - 1] * x[i];
    }
  }
};

}  // namespace

Complex CompiledSeries::value(Complex x0, Complex x1, Complex x2) const {
  const PowerTable t(max_power_, {x0, x1, x2});
  Complex sum{};
  for (const auto& term : terms_) {
    sum += term.c * t.p[0][term.e[0]] * t.p[1][term.e[1]] * t.p[2][term.e[2]];
  }
  return sum;
}

CompiledSeries::Jet CompiledSeries::jet(Complex x0, Complex x1, Complex x2) const {
  const PowerTable t(max_power_, {x0, x1, x2});
  Jet out{};
  for (const auto& term : terms_) {
    const auto& e = term.e;
    const Complex p0 = t.p[0][e[0]], p1 = t.p[1][e[1]], p2 = t.p[2][e[2]];
    out.value += term.c * p0 * p1 * p2;
    if (e[0] > 0) out.gradient[0] += term.c * static_cast<double>(e[0]) * t.p[0][e[0] - 1] * p1 * p2;
    if (e[1] > 0) out.gradient[1] += term.c * static_cast<double>(e[1]) * p0 * t.p[1][e[1] - 1] * p2;
    if (e[2] > 0) out.gradient[2] += term.c * static_cast<double>(e[2]) * p0 * p1 * t.p[2][e[2] - 1];
  }
  return out;
}

// --------------------------------------------------------------- SegreFamily

SegreFamily::SegreFamily(TruncatedSeries F, bool normalized, ChartRadii radii)
    : F_(std::move(F)), normalized_(normalized), radii_(radii) {
  if (!(F_.frame() == frames::family())) {
    throw ShapeError("SegreFamily: F must be a series in (z, a, b) with weights 1, 1, 2");
  }
  if (!(radii_.point > 0.0) || !(radii_.parameter > 0.0)) {
    throw ValidationError("SegreFamily: chart radii must be positive");
  }
  const double scale = std::max(1.0, F_.max_abs());
  const double tol = kRankEpsilon * scale;
  // F(z, 0, 0) = 0: L_0 = {w = 0}.
  for (const auto& [k, c] : F_.terms()) {
    if (k[1] == 0 && k[2] == 0 && std::abs(c) > tol) {
      throw DomainError("SegreFamily: F(z, 0, 0) != 0; the distinguished curve is not w = 0");
    }
  }
  if (std::abs(F_.coefficient(MultiIndex{0, 0, 1}) - 1.0) > tol ||
      std::abs(F_.coefficient(MultiIndex{1, 1, 0}) - 1.0) > tol) {
    throw ValidationError("SegreFamily: F must be b + a z + higher order terms");
  }
  if (std::abs(F_.coefficient(MultiIndex{0, 1, 0})) > tol) {
    throw ValidationError("SegreFamily: F has a linear a-term");
  }
  height_ = CompiledSeries(F_);
  slope_ = CompiledSeries(F_.derivative(0));
}

SegreFamily SegreFamily::model(int cap, ChartRadii radii) {
  const Frame& f = frames::family();
  TruncatedSeries F(f, cap);
  F.add_term(MultiIndex{0, 0, 1}, 1.0);
  F.add_term(MultiIndex{1, 1, 0}, 1.0);
  return SegreFamily(std::move(F), true, radii);
}

SegreFamily SegreFamily::with_radii(ChartRadii radii) const { return SegreFamily(F_, normalized_, radii); }

bool SegreFamily::in_point_disc(Point2 p) const noexcept {
  const double r = radii_.point * (1.0 + 1e-12);
  return std::abs(p.z) <= r && std::abs(p.w) <= r;
}

bool SegreFamily::in_parameter_disc(CurveParams c) const noexcept {
  const double r = radii_.parameter * (1.0 + 1e-12);
  return std::abs(c.a) <= r && std::abs(c.b) <= r;
}

// ---------------------------------------------------------------- raw family

namespace {

// (a, b, chi, tau); the frame in which A(chi, tau) = a, B(chi, tau) = b is inverted.
const Frame& inversion_frame() {
  static const Frame f({"a", "b", "chi", "tau"}, {1, 2, 1, 2});
  return f;
}

}  // namespace

SegreFamily raw_family(const Hypersurface& h, ChartRadii radii) {
  const TruncatedSeries& theta = h.theta();
  const int cap = theta.cap();
  const TruncatedSeries A = theta.derivative(0).at_zero(0);
  const TruncatedSeries B = theta.at_zero(0);

  const Frame& inv = inversion_frame();
  const std::array<std::size_t, 3> to_inv{0, 2, 3};  // z is absent from A and B
  const TruncatedSeries eqA = A.relabeled(inv, to_inv) - TruncatedSeries::variable(inv, cap, 0);
  const TruncatedSeries eqB = B.relabeled(inv, to_inv) - TruncatedSeries::variable(inv, cap, 1);
  const std::array<TruncatedSeries, 2> eqs{eqA, eqB};
  const std::array<std::size_t, 2> unknowns{2, 3};
  const auto sol = implicit_solve_system(eqs, unknowns);

  // Lift chi(a, b), tau(a, b) into (z, a, b).
  const Frame& fam = frames::family();
  const std::array<std::size_t, 2> to_fam{1, 2};
  const std::array<TruncatedSeries, 3> images{TruncatedSeries::variable(fam, cap, 0),
                                              sol[0].relabeled(fam, to_fam), sol[1].relabeled(fam, to_fam)};
  TruncatedSeries F = compose(theta, images);
  return SegreFamily(std::move(F), false, radii);
}

CurveParams segre_parameters(const Hypersurface& h, Point2 zeta) {
  const Complex chi = std::conj(zeta.z);
  const Complex tau = std::conj(zeta.w);
  CurveParams out{};
  for (const auto& [k, c] : h.theta().terms()) {
    if (k[0] > 1) continue;
    const Complex v = c * std::pow(chi, k[1]) * std::pow(tau, k[2]);
    (k[0] == 0 ? out.b : out.a) += v;
  }
  return out;
}

// ------------------------------------------------------------ oracle report

double ObstructionReport::max_abs() const {
  double m = 0.0;
  for (const auto& [w, s] : components) m = std::max(m, s.max_abs());
  return m;
}

int ObstructionReport::first_weight_above(double threshold) const {
  for (const auto& [w, s] : components) {
    if (s.max_abs() > threshold) return w;
  }
  return 0;
}

Verdict oracle_verdict(const ObstructionReport& report) {
  const double m = report.max_abs();
  if (m <= kOracleVanishing) return Verdict::spherical;
  if (m >= kOracleSignificant) return Verdict::nonspherical;
  return Verdict::inconclusive;
}

// --------------------------------------------------------- curve operations

Complex curve_eval(const SegreFamily& s, CurveParams c, Complex z) {
  if (!s.in_parameter_disc(c)) throw DomainError("curve_eval: parameters outside V");
  if (std::abs(z) > s.radii().point * (1.0 + 1e-12)) throw DomainError("curve_eval: z outside U");
  return s.height(z, c);
}

namespace {

bool finite(Complex x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

// Solves [[m00, m01], [m10, m11]] x = r; false when singular.
bool solve2(Complex m00, Complex m01, Complex m10, Complex m11, Complex r0, Complex r1, Complex& x0,
            Complex& x1) {
  const Complex det = m00 * m11 - m01 * m10;
  const double size = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
  if (!(std::abs(det) > 1e-300) || std::abs(det) <= 1e-14 * size * size) return false;
  x0 = (r0 * m11 - m01 * r1) / det;
  x1 = (m00 * r1 - m10 * r0) / det;
  return true;
}

// Newton in (a, b) for two residual equations. Takes up to two extra steps after
// the tolerance is met.
template <class Residual>
bool newton2(Residual&& residual, CurveParams& c, const NewtonOptions& opt, double blow_up) {
  int polish = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    Complex r0, r1, j00, j01, j10, j11;
    residual(c, r0, r1, j00, j01, j10, j11);
    if (!finite(r0) || !finite(r1)) return false;
    const bool small = std::max(std::abs(r0), std::abs(r1)) <= opt.tolerance;
    if (small && ++polish > 2) return true;
    Complex da, db;
    if (!solve2(j00, j01, j10, j11, r0, r1, da, db)) return small;
    c.a -= da;
    c.b -= db;
    if (std::abs(c.a) > blow_up || std::abs(c.b) > blow_up) return false;
    if (small && std::abs(da) + std::abs(db) <= 1e-16 * (1.0 + std::abs(c.a) + std::abs(c.b))) return true;
  }
  Complex r0, r1, j00, j01, j10, j11;
  residual(c, r0, r1, j00, j01, j10, j11);
  return std::max(std::abs(r0), std::abs(r1)) <= opt.tolerance;
}

}  // namespace

CurveParams join(const SegreFamily& s, Point2 p1, Point2 p2, const NewtonOptions& opt, double scale) {
  if (!s.in_point_disc(p1) || !s.in_point_disc(p2)) throw DomainError("join: point outside U");
  const Complex dz = p2.z - p1.z;
  if (std::abs(dz) < opt.separation * scale) {
    throw NoJoinError("join: points are not separated in z");
  }
  CurveParams c{(p2.w - p1.w) / dz, Complex{}};
  c.b = p1.w - c.a * p1.z;
  auto residual = [&](const CurveParams& q, Complex& r0, Complex& r1, Complex& j00, Complex& j01,
                      Complex& j10, Complex& j11) {
    const auto h1 = s.height_jet(p1.z, q);
    const auto h2 = s.height_jet(p2.z, q);
    r0 = h1.value - p1.w;
    r1 = h2.value - p2.w;
    j00 = h1.gradient[1];
    j01 = h1.gradient[2];
    j10 = h2.gradient[1];
    j11 = h2.gradient[2];
  };
  if (!newton2(residual, c, opt, 100.0 * s.radii().parameter)) {
    throw NoJoinError("join: Newton iteration did not converge");
  }
  if (!s.in_parameter_disc(c)) throw NoJoinError("join: joining curve leaves V");
  return c;
}

CurveParams pin_slope(const SegreFamily& s, Point2 p, Complex slope, const NewtonOptions& opt) {
  if (!s.in_point_disc(p)) throw DomainError("pin_slope: point outside U");
  CurveParams c{slope, p.w - slope * p.z};
  auto residual = [&](const CurveParams& q, Complex& r0, Complex& r1, Complex& j00, Complex& j01,
                      Complex& j10, Complex& j11) {
    const auto h = s.height_jet(p.z, q);
    const auto d = s.slope_jet(p.z, q);
    r0 = h.value - p.w;
    r1 = d.value - slope;
    j00 = h.gradient[1];
    j01 = h.gradient[2];
    j10 = d.gradient[1];
    j11 = d.gradient[2];
  };
  if (!newton2(residual, c, opt, 100.0 * s.radii().parameter)) {
    throw TransversalityError("pin_slope: Newton iteration did not converge");
  }
  if (!s.in_parameter_disc(c)) throw TransversalityError("pin_slope: curve leaves V");
  return c;
}

Point2 intersect(const SegreFamily& s, CurveParams c1, CurveParams c2, const NewtonOptions& opt) {
  if (!s.in_parameter_disc(c1) || !s.in_parameter_disc(c2)) {
    throw DomainError("intersect: parameters outside V");
  }
  const Complex da = c1.a - c2.a;
  if (std::abs(da) < opt.separation) {
    throw EmptyIntersectionError("intersect: curves are not transversal (slopes too close)");
  }
  Complex z = (c2.b - c1.b) / da;
  const double blow_up = 100.0 * s.radii().point;
  bool converged = false;
  int polish = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const auto d1 = s.height_jet(z, c1);
    const auto d2 = s.height_jet(z, c2);
    const Complex g = d1.value - d2.value;
    const Complex gp = d1.gradient[0] - d2.gradient[0];
    if (!finite(g) || !finite(gp) || std::abs(gp) <= 1e-300) break;
    const bool small = std::abs(g) <= opt.tolerance;
    if (small && ++polish > 2) {
      converged = true;
      break;
    }
    const Complex step = g / gp;
    z -= step;
    if (std::abs(z) > blow_up) break;
    if (small && std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    converged = std::abs(s.height(z, c1) - s.height(z, c2)) <= opt.tolerance;
  }
  if (!converged) throw EmptyIntersectionError("intersect: Newton iteration did not converge");
  const Point2 p{z, s.height(z, c1)};
  if (!s.in_point_disc(p)) throw EmptyIntersectionError("intersect: intersection point leaves U");
  return p;
}

std::pair<double, double> incidence_residual(const Hypersurface& h, Point2 Z, Point2 zeta) {
  return {std::abs(Z.w - h.segre_height(Z.z, zeta.z, zeta.w)),
          std::abs(zeta.w - h.segre_height(zeta.z, Z.z, Z.w))};
}

}  // namespace sdes
