#include <array>

#include "sdes/errors.hpp"
#include "sdes/graded.hpp"
#include "sdes/segre.hpp"

namespace sdes {

NormalizationResult normalize_family(const SegreFamily& s) {
  const int cap = s.cap();
  const Frame& fam = frames::family();
  const std::array<std::size_t, 2> to_family{1, 2};
  const TruncatedSeries psi = s.series();
  const auto z = TruncatedSeries::variable(fam, cap, 0);
  const auto a = TruncatedSeries::variable(fam, cap, 1);
  const auto b = TruncatedSeries::variable(fam, cap, 2);
  const std::array<TruncatedSeries, 2> graph{z, psi};

  WeightedJet jet = WeightedJet::identity(cap);
  TruncatedSeries normal = b + a * z;
  ObstructionReport report;
  for (int l = 3; l <= cap; ++l) {
    const std::array<TruncatedSeries, 3> moved{compose(jet.f, graph), jet.lambda.relabeled(fam, to_family),
                                               jet.mu.relabeled(fam, to_family)};
    const TruncatedSeries defect = weighted_component(compose(jet.g, graph) - compose(normal, moved), l);
    Decomposition d = decompose(-defect, l, cap);
    jet += d.block;
    const TruncatedSeries surviving = -d.normal;
    normal += surviving;
    report.components.emplace(l, surviving);
  }
  return NormalizationResult{SegreFamily(normal.cleaned(), true, s.radii()), std::move(report)};
}

}  // namespace sdes
