#ifndef SDES_DESARGUES_HPP
#define SDES_DESARGUES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "sdes/segre.hpp"

namespace sdes {

/// O at the family origin, three rays through it carrying (A, A'), (B, B'), (C, C').
struct Configuration {
  Point2 O, A, B, C, Aprime, Bprime, Cprime;
  std::array<CurveParams, 3> rays;
  double scale = 0.0;
};

/// The cross points of a configuration and the curves through them.
struct DesarguesPoints {
  Point2 P, Q, R;                  // AB / A'B', AC / A'C', BC / B'C'
  CurveParams PQ, QR, PR;
};

struct DesarguesOptions {
  NewtonOptions newton;
  int maxAttempts = 100;
  bool symmetrize = false;
  double sphericalThreshold = 1e-9;
  double nonsphericalFactor = 1e3;
  int workers = 1;
};

/// Counter-based stream for configuration index within a run.
std::mt19937_64 configuration_stream(std::uint64_t seed, std::uint64_t index);

/// Draws admissible configurations at the given scale; the underlying unit
/// configuration depends only on the generator state, not on the scale.
Configuration sample_configuration(const SegreFamily& s, double scale, std::mt19937_64& rng,
                                   const DesarguesOptions& opt = {});

/// Computes and certifies P, Q, R and the three closing curves.
DesarguesPoints desargues_points(const SegreFamily& s, const Configuration& cfg, const NewtonOptions& opt = {});

/// |w_R - F(z_R; PQ)|, or its maximum over the three choices of base pair.
double desargues_residual(const SegreFamily& s, const Configuration& cfg, const DesarguesOptions& opt = {});

struct DesarguesReport {
  int samples = 0;  // per scale
  int cap = 0;
  std::uint64_t seed = 0;
  double maxResidual = 0.0;
  double meanResidual = 0.0;
  std::map<double, double> perScaleResiduals;  // scale -> max residual
  std::map<double, double> perScaleMean;
  double fittedSlope = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

/// Least-squares slope of log(residual) against log(scale).
double fit_log_slope(const std::map<double, double>& perScale);

DesarguesReport sphericity_verdict(const SegreFamily& s, int nSamples, std::span<const double> scales,
                                   std::uint64_t seed, const DesarguesOptions& opt = {});

}  // namespace sdes

#endif  // SDES_DESARGUES_HPP
