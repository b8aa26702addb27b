#include "corpus.hpp"

namespace sdes::corpus {

namespace {

constexpr Complex kI{0.0, 1.0};

TruncatedSeries var(std::size_t i, int cap) { return TruncatedSeries::variable(frames::hypersurface(), cap, i); }

}  // namespace

TruncatedSeries quadric(int cap) { return var(2, cap) + 2.0 * kI * var(0, cap) * var(1, cap); }

TruncatedSeries quadric_image(const std::vector<Complex>& p, int cap) {
  const Frame& H = frames::hypersurface();
  const TruncatedSeries z = var(0, cap), chi = var(1, cap), tau = var(2, cap);
  // p(z) and conj(p)(chi) - 1
  TruncatedSeries pz = TruncatedSeries::constant(H, cap, 1.0);
  TruncatedSeries q(H, cap);
  TruncatedSeries zk = z, ck = chi;
  for (const Complex c : p) {
    pz += c * zk;
    q += std::conj(c) * ck;
    zk = zk * z;
    ck = ck * chi;
  }
  TruncatedSeries inv = TruncatedSeries::constant(H, cap, 1.0);
  TruncatedSeries term = inv;
  for (int k = 1; k <= cap; ++k) {
    term = term * (-1.0 * q);
    inv += term;
  }
  return pz * (tau * inv + 2.0 * kI * z * chi);
}

TruncatedSeries phi42(double eps, int cap) {
  const TruncatedSeries z2 = var(0, cap) * var(0, cap), c2 = var(1, cap) * var(1, cap);
  return quadric(cap) + 2.0 * kI * eps * (z2 * z2 * c2 + z2 * c2 * c2);
}

TruncatedSeries phi24_family(double eps, int cap) {
  const Frame& F = frames::family();
  const MultiIndex z2a4{2, 4, 0};
  return TruncatedSeries::variable(F, cap, 2) + TruncatedSeries::variable(F, cap, 0) * TruncatedSeries::variable(F, cap, 1) +
         TruncatedSeries::monomial(F, cap, z2a4, eps);
}

std::vector<Entry> entries(int cap) {
  using K = io::InputKind;
  std::vector<Entry> out;
  out.push_back({"quadric", K::hypersurface, quadric(cap), Verdict::spherical});
  out.push_back({"quadric_image_quadratic", K::hypersurface, quadric_image({0.6}, cap), Verdict::spherical});
  out.push_back({"quadric_image_cubic", K::hypersurface, quadric_image({0.6, 0.4}, cap), Verdict::spherical});
  out.push_back({"phi42_eps1e-2", K::hypersurface, phi42(1e-2, cap), Verdict::nonspherical});
  out.push_back({"phi42_eps1e-3", K::hypersurface, phi42(1e-3, cap), Verdict::nonspherical});
  out.push_back({"phi24_family", K::family, phi24_family(1e-2, cap), Verdict::nonspherical});
  return out;
}

}  // namespace sdes::corpus
