#ifndef SDES_TOOLS_CORPUS_HPP
#define SDES_TOOLS_CORPUS_HPP

#include <string>
#include <vector>

#include "io.hpp"

namespace sdes::corpus {

struct Entry {
  std::string name;  // file stem
  io::InputKind kind;
  TruncatedSeries series;
  Verdict expected;
};

/// Theta = tau + 2i z chi.
TruncatedSeries quadric(int cap = kDefaultCap);
/// Image of the quadric under (z, w) -> (z, w p(z)).
TruncatedSeries quadric_image(const std::vector<Complex>& p, int cap = kDefaultCap);
/// Quadric plus 2i eps (z^4 chi^2 + z^2 chi^4).
TruncatedSeries phi42(double eps, int cap = kDefaultCap);
/// b + a z + eps z^2 a^4.
TruncatedSeries phi24_family(double eps, int cap = kDefaultCap);

/// The six bundled inputs.
std::vector<Entry> entries(int cap = kDefaultCap);

}  // namespace sdes::corpus

#endif  // SDES_TOOLS_CORPUS_HPP
