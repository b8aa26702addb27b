#include "sdes/desargues.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <thread>

#include "sdes/errors.hpp"

namespace sdes {

namespace {

// Bounds on the unit (scale-free) configuration; the family at scale s is the
// model up to a relative perturbation that vanishes with s.
constexpr double kRaySeparation = 0.3;
constexpr double kMinSlope = 0.5;
constexpr double kMaxSlopeRay = 1.5;
constexpr double kMinRadius = 0.5;
constexpr double kMaxRadius = 1.0;
constexpr double kPairSeparation = 0.2;
constexpr double kJoinSeparation = 0.05;
constexpr double kSlopeSeparation = 0.05;
constexpr double kMaxSlope = 2.5;
constexpr double kMaxIntercept = 2.5;
constexpr double kMaxCrossPoint = 2.4;
constexpr double kMinAxis = 1.5;
constexpr double kMaxAxis = 2.3;

struct UnitConfig {
  std::array<Complex, 3> slope;
  std::array<Complex, 3> t;
  std::array<Complex, 3> tp;
};

struct Line {
  Complex m, c;
};

class Draw {
 public:
  explicit Draw(std::mt19937_64& rng) : rng_(rng) {}
  double uniform() { return dist_(rng_); }
  Complex in_disc() {
    const double r = std::sqrt(uniform());
    return std::polar(r, 2.0 * std::numbers::pi * uniform());
  }
  Complex in_annulus(double r0, double r1) {
    return std::polar(r0 + (r1 - r0) * uniform(), 2.0 * std::numbers::pi * uniform());
  }

 private:
  std::mt19937_64& rng_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

bool model_join(Point2 p, Point2 q, Line& out) {
  const Complex dz = q.z - p.z;
  if (std::abs(dz) < kJoinSeparation) return false;
  out.m = (q.w - p.w) / dz;
  out.c = p.w - out.m * p.z;
  return std::abs(out.m) <= kMaxSlope && std::abs(out.c) <= kMaxIntercept;
}

bool model_meet(Line l1, Line l2, Point2& out) {
  const Complex dm = l1.m - l2.m;
  if (std::abs(dm) < kSlopeSeparation) return false;
  out.z = (l2.c - l1.c) / dm;
  out.w = l1.c + l1.m * out.z;
  return std::abs(out.z) <= kMaxCrossPoint && std::abs(out.w) <= 2.0 * kMaxCrossPoint;
}

// Builds the straight-line configuration from its axis: A, B, C and A' are
// drawn, P and Q are placed on AB and AC away from the origin, and B', C'
// close the triangles through P and Q.
std::optional<UnitConfig> draw_unit(std::mt19937_64& rng) {
  Draw d(rng);
  UnitConfig u{};
  for (int tries = 0; tries < 1000; ++tries) {
    for (auto& s : u.slope) s = d.in_annulus(kMinSlope, kMaxSlopeRay);
    if (std::abs(u.slope[0] - u.slope[1]) >= kRaySeparation && std::abs(u.slope[0] - u.slope[2]) >= kRaySeparation &&
        std::abs(u.slope[1] - u.slope[2]) >= kRaySeparation) {
      break;
    }
  }
  for (int i = 0; i < 3; ++i) u.t[i] = d.in_annulus(kMinRadius, kMaxRadius);
  do {
    u.tp[0] = d.in_annulus(kMinRadius, kMaxRadius);
  } while (std::abs(u.t[0] - u.tp[0]) < kPairSeparation);

  auto on_ray = [&](int i, Complex t) { return Point2{t, u.slope[i] * t}; };
  const Point2 A = on_ray(0, u.t[0]), B = on_ray(1, u.t[1]), C = on_ray(2, u.t[2]), Ap = on_ray(0, u.tp[0]);
  Line AB, AC, PAp, QAp;
  if (!model_join(A, B, AB) || !model_join(A, C, AC)) return std::nullopt;
  const Complex zP = d.in_annulus(kMinAxis, kMaxAxis);
  const Complex zQ = d.in_annulus(kMinAxis, kMaxAxis);
  const Point2 P{zP, AB.c + AB.m * zP};
  const Point2 Q{zQ, AC.c + AC.m * zQ};
  if (!model_join(P, Ap, PAp) || !model_join(Q, Ap, QAp)) return std::nullopt;
  Point2 Bp, Cp;
  if (!model_meet(Line{u.slope[1], 0.0}, PAp, Bp) || !model_meet(Line{u.slope[2], 0.0}, QAp, Cp)) return std::nullopt;
  u.tp[1] = Bp.z;
  u.tp[2] = Cp.z;
  return u;
}

// Admissibility of the straight-line configuration in unit coordinates.
bool model_admissible(const UnitConfig& u, double separation) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(u.t[i] - u.tp[i]) < kPairSeparation) return false;
    if (std::abs(u.tp[i]) < 0.5 * kMinRadius || std::abs(u.tp[i]) > 1.5 * kMaxRadius) return false;
  }
  std::array<Point2, 7> pts{};
  pts[0] = {0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    pts[1 + i] = {u.t[i], u.slope[i] * u.t[i]};
    pts[4 + i] = {u.tp[i], u.slope[i] * u.tp[i]};
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (std::max(std::abs(pts[i].z - pts[j].z), std::abs(pts[i].w - pts[j].w)) < separation) return false;
    }
  }
  const Point2 &A = pts[1], &B = pts[2], &C = pts[3], &Ap = pts[4], &Bp = pts[5], &Cp = pts[6];
  Line AB, ApBp, AC, ApCp, BC, BpCp;
  if (!model_join(A, B, AB) || !model_join(Ap, Bp, ApBp) || !model_join(A, C, AC) || !model_join(Ap, Cp, ApCp) ||
      !model_join(B, C, BC) || !model_join(Bp, Cp, BpCp)) {
    return false;
  }
  Point2 P, Q, R;
  if (!model_meet(AB, ApBp, P) || !model_meet(AC, ApCp, Q) || !model_meet(BC, BpCp, R)) return false;
  Line PQ, QR, PR;
  return model_join(P, Q, PQ) && model_join(Q, R, QR) && model_join(P, R, PR);
}

}  // namespace

std::mt19937_64 configuration_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

DesarguesPoints desargues_points(const SegreFamily& s, const Configuration& cfg, const NewtonOptions& opt) {
  const double sc = cfg.scale;
  const CurveParams AB = join(s, cfg.A, cfg.B, opt, sc);
  const CurveParams ApBp = join(s, cfg.Aprime, cfg.Bprime, opt, sc);
  const CurveParams AC = join(s, cfg.A, cfg.C, opt, sc);
  const CurveParams ApCp = join(s, cfg.Aprime, cfg.Cprime, opt, sc);
  const CurveParams BC = join(s, cfg.B, cfg.C, opt, sc);
  const CurveParams BpCp = join(s, cfg.Bprime, cfg.Cprime, opt, sc);
  DesarguesPoints d{};
  d.P = intersect(s, AB, ApBp, opt);
  d.Q = intersect(s, AC, ApCp, opt);
  d.R = intersect(s, BC, BpCp, opt);
  d.PQ = join(s, d.P, d.Q, opt, sc);
  d.QR = join(s, d.Q, d.R, opt, sc);
  d.PR = join(s, d.P, d.R, opt, sc);
  return d;
}

Configuration sample_configuration(const SegreFamily& s, double scale, std::mt19937_64& rng,
                                   const DesarguesOptions& opt) {
  if (!(scale > 0.0) || scale > 0.4 * s.radii().point * (1.0 + 1e-12)) {
    throw DomainError("sample_configuration: scale must be in (0, 0.4 * point radius]");
  }
  const NewtonOptions& nw = opt.newton;
  for (int attempt = 0; attempt < opt.maxAttempts; ++attempt) {
    const std::optional<UnitConfig> drawn = draw_unit(rng);
    if (!drawn || !model_admissible(*drawn, nw.separation)) continue;
    const UnitConfig& u = *drawn;
    try {
      Configuration cfg{};
      cfg.scale = scale;
      cfg.O = {0.0, 0.0};
      std::array<Point2, 3> first{}, second{};
      for (int i = 0; i < 3; ++i) {
        cfg.rays[i] = pin_slope(s, cfg.O, scale * u.slope[i], nw);
        const Complex z1 = scale * u.t[i];
        const Complex z2 = scale * u.tp[i];
        first[i] = {z1, curve_eval(s, cfg.rays[i], z1)};
        second[i] = {z2, curve_eval(s, cfg.rays[i], z2)};
        if (!s.in_point_disc(first[i]) || !s.in_point_disc(second[i])) throw DomainError("point outside U");
      }
      cfg.A = first[0];
      cfg.B = first[1];
      cfg.C = first[2];
      cfg.Aprime = second[0];
      cfg.Bprime = second[1];
      cfg.Cprime = second[2];
      (void)desargues_points(s, cfg, nw);
      return cfg;
    } catch (const DomainError&) {
      continue;
    } catch (const SingularError&) {
      continue;
    }
  }
  throw SamplingError("sample_configuration: no admissible configuration after " +
                      std::to_string(opt.maxAttempts) + " attempts");
}

double desargues_residual(const SegreFamily& s, const Configuration& cfg, const DesarguesOptions& opt) {
  DesarguesPoints d{};
  try {
    d = desargues_points(s, cfg, opt.newton);
  } catch (const DomainError& e) {
    throw ConstructionViolation(std::string("desargues_residual: configuration is not admissible: ") + e.what());
  }
  double r = std::abs(d.R.w - s.height(d.R.z, d.PQ));
  if (opt.symmetrize) {
    r = std::max({r, std::abs(d.P.w - s.height(d.P.z, d.QR)), std::abs(d.Q.w - s.height(d.Q.z, d.PR))});
  }
  return r;
}

double fit_log_slope(const std::map<double, double>& perScale) {
  if (perScale.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(perScale.size());
  for (const auto& [scale, res] : perScale) {
    const double x = std::log(scale);
    const double y = std::log(std::max(res, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

DesarguesReport sphericity_verdict(const SegreFamily& s, int nSamples, std::span<const double> scales,
                                   std::uint64_t seed, const DesarguesOptions& opt) {
  std::vector<double> sorted(scales.begin(), scales.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (nSamples < 100) throw DomainError("sphericity_verdict: need at least 100 samples per scale");
  if (sorted.size() < 3) throw DomainError("sphericity_verdict: need at least 3 distinct scales");

  const std::size_t n = static_cast<std::size_t>(nSamples);
  const std::size_t total = n * sorted.size();
  std::vector<double> residual(total, 0.0);
  std::vector<std::exception_ptr> errors(total);

  auto work = [&](std::size_t k) {
    const std::size_t scale_idx = k / n;
    const std::size_t sample = k % n;
    try {
      std::mt19937_64 rng = configuration_stream(seed, sample);
      const Configuration cfg = sample_configuration(s, sorted[scale_idx], rng, opt);
      residual[k] = desargues_residual(s, cfg, opt);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  int workers = opt.workers;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));
  if (workers <= 1) {
    for (std::size_t k = 0; k < total; ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wkr = 0; wkr < workers; ++wkr) {
      pool.emplace_back([&, wkr] {
        for (std::size_t k = static_cast<std::size_t>(wkr); k < total; k += static_cast<std::size_t>(workers)) work(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  DesarguesReport rep;
  rep.samples = nSamples;
  rep.cap = s.cap();
  rep.seed = seed;
  double sum = 0.0;
  for (std::size_t si = 0; si < sorted.size(); ++si) {
    double mx = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = residual[si * n + i];
      mx = std::max(mx, r);
      acc += r;
    }
    rep.perScaleResiduals[sorted[si]] = mx;
    rep.perScaleMean[sorted[si]] = acc / static_cast<double>(n);
    rep.maxResidual = std::max(rep.maxResidual, mx);
    sum += acc;
  }
  rep.meanResidual = sum / static_cast<double>(total);
  rep.fittedSlope = fit_log_slope(rep.perScaleResiduals);

  const double largest = rep.perScaleResiduals.rbegin()->second;
  if (rep.maxResidual <= opt.sphericalThreshold) {
    rep.verdict = Verdict::spherical;
  } else if (largest >= opt.nonsphericalFactor * opt.sphericalThreshold && rep.fittedSlope >= 4.0 &&
             rep.fittedSlope <= static_cast<double>(s.cap()) + 1.0) {
    rep.verdict = Verdict::nonspherical;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace sdes
