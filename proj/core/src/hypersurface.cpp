#include "sdes/hypersurface.hpp"

#include <array>
#include <cmath>

#include "sdes/errors.hpp"

namespace sdes {

namespace {

// (z, chi, tau, w) with tau = conj w; the frame in which phi = 0 is solved for w.
const Frame& solve_frame() {
  static const Frame f({"z", "chi", "tau", "w"}, {1, 1, 2, 2}, {1, 0, 3, 2});
  return f;
}

}  // namespace

Hypersurface::Hypersurface(TruncatedSeries theta) : theta_(std::move(theta)), levi_(levi_at_origin(theta_)) {}

Hypersurface Hypersurface::from_complex_defining(TruncatedSeries theta) {
  if (!(theta.frame() == frames::hypersurface())) {
    throw ShapeError("hypersurface: Theta must be a series in (z, chi, tau) with weights 1, 1, 2");
  }
  const double scale = std::max(1.0, theta.max_abs());
  if (std::abs(theta.constant_term()) > kRankEpsilon * scale) {
    throw ValidationError("hypersurface: the origin is not on M (Theta(0) != 0)");
  }
  if (std::abs(theta.coefficient(MultiIndex{1, 0, 0})) > kRankEpsilon * scale ||
      std::abs(theta.coefficient(MultiIndex{0, 1, 0})) > kRankEpsilon * scale) {
    throw DomainError("hypersurface: Theta has linear z or chi terms; the chart is not adapted at the origin");
  }
  if (std::abs(theta.coefficient(MultiIndex{0, 0, 1})) <= kRankEpsilon) {
    throw SingularError("hypersurface: dTheta/dtau vanishes at the origin");
  }
  const double residual = check_reality(theta);
  if (residual > kRealityTolerance * scale) {
    throw ValidationError("hypersurface: reality residual " + std::to_string(residual) +
                          " exceeds tolerance");
  }
  if (std::abs(levi_at_origin(theta)) <= kRankEpsilon) {
    throw ValidationError("hypersurface: Levi-degenerate at the origin");
  }
  return Hypersurface(std::move(theta));
}

Complex Hypersurface::segre_height(Complex z, Complex xi, Complex eta) const {
  const std::array<Complex, 3> point{z, std::conj(xi), std::conj(eta)};
  return theta_.evaluate(point);
}

Hypersurface from_real_defining(const TruncatedSeries& phi) {
  if (!(phi.frame() == frames::real_defining())) {
    throw ShapeError("from_real_defining: phi must be a series in (z, zbar, u, v)");
  }
  const double scale = std::max(1.0, phi.max_abs());
  if (max_difference(phi.conjugate(), phi) > 1e-12 * scale) {
    throw ValidationError("from_real_defining: phi is not real-valued");
  }
  if (std::abs(phi.constant_term()) > kRankEpsilon * scale) {
    throw ValidationError("from_real_defining: phi(0) != 0");
  }
  const Complex dz = phi.coefficient(MultiIndex{1, 0, 0, 0});
  const Complex du = phi.coefficient(MultiIndex{0, 0, 1, 0});
  const Complex dv = phi.coefficient(MultiIndex{0, 0, 0, 1});
  if (std::abs(dz) <= kRankEpsilon && std::abs(du) <= kRankEpsilon && std::abs(dv) <= kRankEpsilon) {
    throw SingularError("from_real_defining: d phi(0) = 0 (singular point)");
  }
  if (std::abs(dv) <= kRankEpsilon) {
    throw DomainError("from_real_defining: d phi/dv(0) = 0; rotate coordinates before calling");
  }

  const Frame& f = solve_frame();
  const int cap = phi.cap();
  const auto z = TruncatedSeries::variable(f, cap, 0);
  const auto chi = TruncatedSeries::variable(f, cap, 1);
  const auto tau = TruncatedSeries::variable(f, cap, 2);
  const auto w = TruncatedSeries::variable(f, cap, 3);
  const std::array<TruncatedSeries, 4> images{z, chi, (w + tau) * 0.5, (w - tau) * Complex(0.0, -0.5)};
  const TruncatedSeries equation = compose(phi, images);
  TruncatedSeries theta = implicit_solve(equation, 3);
  if (!(theta.frame() == frames::hypersurface())) {
    throw InternalAssertion("from_real_defining: unexpected solution frame");
  }
  return Hypersurface::from_complex_defining(std::move(theta));
}

double check_reality(const TruncatedSeries& theta) {
  if (!(theta.frame() == frames::hypersurface())) {
    throw ShapeError("check_reality: Theta must be a series in (z, chi, tau)");
  }
  const int cap = theta.cap();
  const Frame& f = theta.frame();
  const std::array<TruncatedSeries, 3> images{TruncatedSeries::variable(f, cap, 0),
                                              TruncatedSeries::variable(f, cap, 1), theta.conjugate()};
  if (std::abs(theta.constant_term()) != 0.0) {
    throw DomainError("check_reality: Theta(0) != 0");
  }
  const TruncatedSeries defect = compose(theta, images) - TruncatedSeries::variable(f, cap, 2);
  return defect.max_abs();
}

double check_reality(const Hypersurface& h) { return check_reality(h.theta()); }

Complex levi_at_origin(const TruncatedSeries& theta) {
  if (!(theta.frame() == frames::hypersurface())) {
    throw ShapeError("levi_at_origin: Theta must be a series in (z, chi, tau)");
  }
  return theta.coefficient(MultiIndex{1, 1, 0});
}

Complex levi_at_origin(const Hypersurface& h) { return h.levi_coefficient(); }

}  // namespace sdes
