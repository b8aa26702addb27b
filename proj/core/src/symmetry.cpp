#include "sdes/symmetry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sdes/errors.hpp"

namespace sdes {

namespace {

constexpr CurveParams kL0{0.0, 0.0};
constexpr Point2 kOrigin{0.0, 0.0};
// Below this relative distance from OA the primary branch degenerates.
constexpr double kRayMargin = 0.05;

bool is_origin(Point2 p) { return std::abs(p.z) <= 1e-15 && std::abs(p.w) <= 1e-15; }

}  // namespace

PhiMap::PhiMap(SegreFamily family, Point2 A, Point2 Aprime, double domainRadius)
    : family_(std::move(family)), A_(A), Aprime_(Aprime), domainRadius_(domainRadius) {
  if (domainRadius_ <= 0.0) domainRadius_ = 0.25 * family_.radii().point;
  if (std::abs(A_.w) <= 1e-12) throw ValidationError("PhiMap: A lies on L_0");
  if (is_origin(A_) || is_origin(Aprime_)) throw ValidationError("PhiMap: A and A' must differ from O");
  if (std::abs(A_.z - Aprime_.z) <= 1e-12 && std::abs(A_.w - Aprime_.w) <= 1e-12) {
    throw ValidationError("PhiMap: A' = A gives the identity");
  }
  ray_ = join(family_, kOrigin, A_);
  if (std::abs(Aprime_.w - family_.height(Aprime_.z, ray_)) > 1e-10) {
    throw ValidationError("PhiMap: A' is not on the curve OA");
  }
}

PhiMap PhiMap::on_ray(SegreFamily family, Complex slope, Complex zA, Complex zAprime, double domainRadius) {
  const CurveParams ray = pin_slope(family, kOrigin, slope);
  const Point2 A{zA, curve_eval(family, ray, zA)};
  const Point2 Ap{zAprime, curve_eval(family, ray, zAprime)};
  return PhiMap(std::move(family), A, Ap, domainRadius);
}

double PhiMap::relative_distance_to_ray(Point2 B) const {
  const double d = std::abs(B.w - family_.height(B.z, ray_));
  return d / std::max(std::abs(B.z), 1e-300);
}

bool PhiMap::in_sector(Point2 B) const noexcept {
  return std::abs(B.z) < domainRadius_ && std::abs(B.w) < kSectorSlope * std::abs(B.z);
}

Point2 phi_via_pair(const SegreFamily& s, Point2 X, Point2 Xprime, Point2 B) {
  const Point2 P = intersect(s, join(s, X, B), kL0);
  return intersect(s, join(s, Xprime, P), join(s, kOrigin, B));
}

Point2 phi_apply(const PhiMap& m, Point2 B) {
  if (is_origin(B)) throw DomainError("phi_apply: B = O (use phi_extend)");
  if (m.relative_distance_to_ray(B) < 1e-6) throw DomainError("phi_apply: B lies on the curve OA (use phi_extend)");
  return phi_via_pair(m.family(), m.A(), m.Aprime(), B);
}

Point2 phi_second_extension(const PhiMap& m, Point2 K) {
  const SegreFamily& s = m.family();
  const double r0 = m.domainRadius();
  const std::array<Complex, 4> anchors{r0, Complex(0.0, r0), -r0, Complex(0.0, -r0)};
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Point2 P{anchors[i], 0.0};
    const Point2 Q{anchors[(i + 1) % anchors.size()], 0.0};
    for (double t : {0.5, 0.3, 0.7}) {
      try {
        const CurveParams L1 = join(s, P, K);
        const CurveParams L2 = join(s, Q, K);
        const Complex zb = K.z + t * (P.z - K.z);
        const Complex zc = K.z + t * (Q.z - K.z);
        const Point2 B{zb, curve_eval(s, L1, zb)};
        const Point2 C{zc, curve_eval(s, L2, zc)};
        if (m.relative_distance_to_ray(B) < kRayMargin || m.relative_distance_to_ray(C) < kRayMargin) continue;
        if (std::abs(B.w) <= 1e-12 || std::abs(C.w) <= 1e-12) continue;
        const Point2 Bp = phi_apply(m, B);
        const Point2 Cp = phi_apply(m, C);
        return intersect(s, join(s, P, Bp), join(s, Q, Cp));
      } catch (const DomainError&) {
        continue;
      }
    }
  }
  throw DomainError("phi_second_extension: no admissible auxiliary points");
}

Point2 phi_extend(const PhiMap& m, Point2 B) {
  if (is_origin(B)) return kOrigin;
  if (std::abs(B.w) <= 1e-15) return B;
  try {
    if (m.relative_distance_to_ray(B) >= kRayMargin) return phi_apply(m, B);
    // Auxiliary defining pair off OA.
    const Point2 B0{m.A().z, 0.5 * m.A().w};
    return phi_via_pair(m.family(), B0, phi_apply(m, B0), B);
  } catch (const DomainError&) {
    return phi_second_extension(m, B);
  }
}

PhiJet phi_jet(const PhiMap& m, int order, int gridSize) {
  if (order < 2 || order > m.family().cap()) throw DomainError("phi_jet: order outside 2..cap");
  if (gridSize < 8) throw DomainError("phi_jet: grid too small");
  const double rz = 0.05 * m.family().radii().point;
  const double rw = rz * rz;  // weighted: [w] = 2
  // Fit beyond the requested order so omitted terms do not pollute it.
  const int fitWeight = std::min(order + 6, gridSize - 1);
  std::vector<MultiIndex> basis;
  for (int d = 1; d <= fitWeight; ++d) {
    for (const auto& mi : monomials_of_weight(frames::plane(), d)) basis.push_back(mi);
  }

  const int N = gridSize;
  const Eigen::Index rows = static_cast<Eigen::Index>(N) * N;
  Eigen::MatrixXcd M(rows, static_cast<Eigen::Index>(basis.size()));
  Eigen::MatrixXcd Y(rows, 2);
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      const Complex uz = std::polar(1.0, 2.0 * std::numbers::pi * j / N);
      const Complex uw = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / N);
      const Point2 X{rz * uz, rw * uw};
      const Point2 Y0 = phi_extend(m, X);
      const Eigen::Index row = static_cast<Eigen::Index>(j) * N + k;
      Y(row, 0) = Y0.z;
      Y(row, 1) = Y0.w;
      for (std::size_t c = 0; c < basis.size(); ++c) {
        M(row, static_cast<Eigen::Index>(c)) = std::pow(uz, basis[c][0]) * std::pow(uw, basis[c][1]);
      }
    }
  }
  const Eigen::MatrixXcd coef = M.colPivHouseholderQr().solve(Y);
  const Eigen::MatrixXcd fit = M * coef;
  const double ysize = Y.cwiseAbs().maxCoeff();

  PhiJet out{WeightedJet{TruncatedSeries(frames::plane(), order), TruncatedSeries(frames::plane(), order),
                         TruncatedSeries(frames::parameters(), order), TruncatedSeries(frames::parameters(), order)},
             (fit - Y).cwiseAbs().maxCoeff() / ysize, 0.0, 0.0};
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const double unscale = std::pow(rz, basis[c][0]) * std::pow(rw, basis[c][1]);
    if (frames::plane().degree(basis[c]) > order) continue;
    out.jet.f.add_term(basis[c], coef(static_cast<Eigen::Index>(c), 0) / unscale);
    out.jet.g.add_term(basis[c], coef(static_cast<Eigen::Index>(c), 1) / unscale);
  }
  const MultiIndex z{1, 0}, w{0, 1};
  out.linearDefect = std::max({std::abs(out.jet.f.coefficient(z) - 1.0), std::abs(out.jet.f.coefficient(w)),
                               std::abs(out.jet.g.coefficient(z)), std::abs(out.jet.g.coefficient(w) - 1.0)});
  out.r = out.jet.f.coefficient(MultiIndex{1, 1});
  if (out.fitResidual > kJetTolerance) {
    throw ConstructionViolation("phi_jet: fit residual " + std::to_string(out.fitResidual) + " exceeds tolerance");
  }
  if (out.linearDefect > kJetTolerance) {
    throw ConstructionViolation("phi_jet: linear part differs from the identity by " +
                                std::to_string(out.linearDefect));
  }
  return out;
}

PropertyReport verify_properties(const PhiMap& m, int nSamples, std::uint64_t seed, double scale) {
  const SegreFamily& s = m.family();
  if (!(scale > 0.0) || scale > 0.4 * s.radii().point * (1.0 + 1e-12)) {
    throw DomainError("verify_properties: scale must be in (0, 0.4 * point radius]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto annulus = [&](double r0, double r1) {
    return std::polar(r0 + (r1 - r0) * u01(rng), 2.0 * std::numbers::pi * u01(rng));
  };
  auto point = [&] {
    const Complex z = scale * annulus(0.3, 1.0);
    return Point2{z, kSectorSlope * std::abs(z) * annulus(0.2, 1.0)};
  };

  PropertyReport rep;
  rep.samples = nSamples;
  for (int i = 0; i < nSamples; ++i) {
    const Point2 X{scale * annulus(0.3, 1.0), 0.0};
    const Point2 B = point();
    const Point2 C = point();
    try {
      const Point2 Xp = phi_apply(m, X);
      rep.fixedOnL0 = std::max(rep.fixedOnL0, std::max(std::abs(Xp.z - X.z), std::abs(Xp.w - X.w)));

      const Point2 Bp = phi_extend(m, B);
      const CurveParams OB = join(s, kOrigin, B);
      rep.raysPreserved = std::max(rep.raysPreserved, std::abs(Bp.w - s.height(Bp.z, OB)));

      const Point2 Cp = phi_extend(m, C);
      const Point2 K = intersect(s, join(s, B, C), join(s, Bp, Cp));
      rep.parallelism = std::max(rep.parallelism, std::abs(K.w));
    } catch (const DomainError&) {
      ++rep.skipped;
    }
  }
  return rep;
}

}  // namespace sdes
