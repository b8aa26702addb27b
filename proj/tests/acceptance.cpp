// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "io.hpp"
#include "sdes/desargues.hpp"
#include "sdes/errors.hpp"
#include "sdes/graded.hpp"
#include "sdes/hypersurface.hpp"
#include "sdes/symmetry.hpp"
#include "support.hpp"

using namespace sdes;

namespace {

const std::filesystem::path kCorpus{SDES_CORPUS_DIR};
const std::vector<double> kScales{0.05, 0.1, 0.2};
constexpr int kSamples = 500;
constexpr std::uint64_t kSeed = 1;

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SegreFamily load_family(const std::string& stem) {
  const io::InputFile in = io::read_input(kCorpus / (stem + ".json"));
  const ChartRadii radii = in.radii.value_or(ChartRadii{});
  if (in.kind == io::InputKind::hypersurface) return raw_family(Hypersurface::from_complex_defining(in.series), radii);
  return SegreFamily(in.series, false, radii);
}

DesarguesReport run_desargues(const SegreFamily& s, int workers = 0) {
  DesarguesOptions opt;
  opt.workers = workers;
  return sphericity_verdict(s, kSamples, kScales, kSeed, opt);
}

SegreFamily normalized_phi42(double eps) {
  return normalize_family(raw_family(Hypersurface::from_complex_defining(test::phi42_theta(eps)))).family;
}

void criterion1(Result& r) {
  for (const char* stem : {"quadric", "quadric_image_quadratic", "quadric_image_cubic"}) {
    const auto t0 = Clock::now();
    const DesarguesReport d = run_desargues(load_family(stem));
    const double t = seconds_since(t0);
    r.detail << stem << ": max " << d.maxResidual << ", " << to_string(d.verdict) << ", " << t << " s; ";
    r.require(d.maxResidual <= 1e-9, std::string(stem) + " residual");
    r.require(d.verdict == Verdict::spherical, std::string(stem) + " verdict");
    r.require(t <= 30.0, std::string(stem) + " runtime");
  }
}

void criterion2(Result& r) {
  auto t0 = Clock::now();
  const DesarguesReport big = run_desargues(load_family("phi42_eps1e-2"));
  const double t1 = seconds_since(t0);
  t0 = Clock::now();
  const DesarguesReport small = run_desargues(load_family("phi42_eps1e-3"));
  const double t2 = seconds_since(t0);
  const double ratio = small.maxResidual / big.maxResidual;
  r.detail << "eps 1e-2: " << to_string(big.verdict) << ", slope " << big.fittedSlope << ", max " << big.maxResidual
           << "; eps 1e-3: max " << small.maxResidual << "; residual ratio " << ratio << "; runtimes " << t1 << " s, "
           << t2 << " s";
  r.require(big.verdict == Verdict::nonspherical, "verdict at eps 1e-2");
  r.require(std::abs(big.fittedSlope - 6.0) <= 0.5, "slope");
  r.require(ratio >= 0.05 && ratio <= 0.2, "linear scaling in eps");
  r.require(t1 <= 30.0 && t2 <= 30.0, "runtime");
}

void criterion3(Result& r) {
  int agree = 0, total = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kCorpus)) {
    if (entry.path().extension() != ".json") continue;
    const SegreFamily s = load_family(entry.path().stem().string());
    const Verdict d = run_desargues(s).verdict;
    const Verdict o = oracle_verdict(normalize_family(s).report);
    ++total;
    if (d == o && d != Verdict::inconclusive) ++agree;
    r.detail << entry.path().stem().string() << " " << to_string(d) << "/" << to_string(o) << "; ";
  }
  r.detail << agree << "/" << total << " agree";
  r.require(total == 6, "corpus has six files");
  r.require(agree == total, "agreement");
}

void criterion4(Result& r) {
  const auto t0 = Clock::now();
  double worstMargin = 1.0, worstDefect = 1.0;
  for (int l = 3; l <= 10; ++l) {
    const LemmaReport rep = verify_lemma_normal(l);
    worstMargin = std::min(worstMargin, rep.relativeMargin);
    worstDefect = std::min(worstDefect, rep.decompositionDefect);
    r.require(rep.dimV + rep.dimN == rep.dimW, "dimension count at weight " + std::to_string(l));
    if (l == 4) {
      r.require(rep.dimW == 9 && rep.dimN == 0, "weight-4 table");
      r.detail << "weight 4: dimW " << rep.dimW << ", dimN " << rep.dimN << "; ";
    }
  }
  const double t = seconds_since(t0);
  r.detail << "min relative margin " << worstMargin << ", min defect " << worstDefect << ", " << t << " s";
  r.require(worstMargin >= 1e-8, "injectivity margin");
  r.require(worstDefect >= 1e-8, "decomposition defect");
  r.require(t <= 5.0, "runtime");
}

void criterion5(Result& r) {
  const auto M0 = SegreFamily::model(10);
  const RecursionResult one = run_recursion(M0, 1.0, 10);
  r.require(!one.obstruction.has_value() && one.completedWeight == 10, "r = 1 completes");
  const double d1 = test::jet_difference(one.jet, test::scaling_jet(1.0, 10), 10);
  const RecursionResult zero = run_recursion(M0, 0.0, 10);
  r.require(!zero.obstruction.has_value(), "r = 0 completes");
  const double d0 = test::jet_difference(zero.jet, WeightedJet::identity(10), 10);
  r.detail << "r = 1 max coefficient error " << d1 << "; r = 0 distance from identity " << d0;
  r.require(d1 <= 1e-12, "geometric series");
  r.require(d0 == 0.0, "identity jet");
}

void criterion6(Result& r) {
  const SegreFamily s = normalized_phi42(1e-2);
  const auto psi6 = weighted_component(s.series() - (test::fvar(2) + test::fvar(0) * test::fvar(1)), 6);
  const RecursionResult rr = run_recursion(s, 1.0, 8);
  r.require(rr.obstruction.has_value(), "recursion fails");
  if (!rr.obstruction) return;
  r.require(rr.obstruction->weight == 8, "failure at weight 8");
  const auto stated = test::stated_obstruction(psi6, 1.0, 8);
  const auto derived = test::predicted_obstruction(psi6, 1.0, 8);
  const double errStated = max_difference(rr.obstruction->nComponent, stated) / stated.max_abs();
  const double errDerived = max_difference(rr.obstruction->nComponent, derived) / derived.max_abs();
  r.detail << "failure at weight " << rr.obstruction->weight << ", |N-part| " << rr.obstruction->magnitude()
           << "; relative error against -r N(za Psi_6) " << errStated
           << "; against r N([(k+l+n-2) b + (k-1) az] Psi_6) " << errDerived;
  r.require(errStated <= 1e-8, "obstruction equals -r N(za Psi_6)");
}

void criterion7(Result& r) {
  // model: phi_apply against (z, w) / (1 - r w)
  const PhiMap m(SegreFamily::model(kDefaultCap, {0.5, 2.0}), {0.1, 0.1}, {0.05, 0.05});
  const Complex rr = (1.0 - m.A().z / m.Aprime().z) / m.A().w;
  const Point2 Bp = phi_apply(m, {0.2, 0.05});
  double worst = std::max(std::abs(Bp.z - 2.0 / 15.0), std::abs(Bp.w - 1.0 / 30.0));
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int used = 0, outside = 0;
  for (int i = 0; i < 500; ++i) {
    const Complex z = std::polar(m.domainRadius() * (0.1 + 0.9 * u(rng)), 2.0 * std::numbers::pi * u(rng));
    const Point2 B{z, kSectorSlope * std::abs(z) * std::polar(u(rng), 2.0 * std::numbers::pi * u(rng))};
    if (std::abs(B.w) <= 1e-12 || m.relative_distance_to_ray(B) < 0.05) continue;
    Point2 P;
    try {
      P = phi_apply(m, B);
    } catch (const DomainError&) {
      ++outside;
      continue;
    }
    const Complex den = 1.0 - rr * B.w;
    worst = std::max({worst, std::abs(P.z - B.z / den), std::abs(P.w - B.w / den)});
    ++used;
  }
  r.detail << "model: r " << rr.real() << ", worked point (" << Bp.z.real() << ", " << Bp.w.real()
           << "), max deviation " << worst << " over " << used << " points (" << outside
           << " with joins leaving the chart); ";
  r.require(worst <= 1e-10, "model agrees with the scaling maps");
  r.require(used >= 250, "model points evaluated");

  const PhiMap q = PhiMap::on_ray(load_family("quadric"), 0.4, 0.1, 0.08);
  const PropertyReport pq = verify_properties(q, 200, kSeed, 0.2);
  const double qmax = std::max({pq.fixedOnL0, pq.raysPreserved, pq.parallelism});
  double linear = 1.0;
  try {
    linear = phi_jet(q, 6).linearDefect;
  } catch (const std::exception& e) {
    r.detail << "quadric jet: " << e.what() << "; ";
  }
  r.detail << "quadric: (a) " << pq.fixedOnL0 << " (b) " << pq.raysPreserved << " (c) " << pq.parallelism
           << ", linear defect " << linear << "; ";
  r.require(qmax <= 1e-9, "quadric properties");
  r.require(linear <= 1e-7, "quadric jet linear part");
  r.require(pq.skipped < pq.samples, "quadric samples evaluated");

  const PhiMap p = PhiMap::on_ray(load_family("phi42_eps1e-2"), 0.4, 0.1, 0.08);
  const PropertyReport pp = verify_properties(p, 200, kSeed, 0.2);
  r.detail << "perturbed: (c) " << pp.parallelism << " at scale 0.2";
  r.require(pp.parallelism >= 1e-6, "perturbed parallelism defect");
}

void criterion8(Result& r) {
  const SegreFamily s = load_family("phi42_eps1e-2");
  const int hw = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
  const std::string one = io::to_json(run_desargues(s, 1)).dump();
  bool same = true;
  for (int n : {2, 3, hw}) same = same && io::to_json(run_desargues(s, n)).dump() == one;
  r.require(same, "library reports");

  cli::JobSpec job;
  job.command = cli::Command::sphericity;
  job.inputPath = kCorpus / "quadric_image_cubic.json";
  job.seed = 7;
  job.workers = 1;
  const std::string a = cli::execute(job).dump();
  job.workers = hw;
  const std::string b = cli::execute(job).dump();
  r.require(a == b, "front-end reports");
  r.detail << "1 vs {2, 3, " << hw << "} workers: " << (same ? "identical" : "different") << "; front-end 1 vs " << hw
           << ": " << (a == b ? "identical" : "different");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Result&)>>> criteria{
      {"1 necessity on spherical inputs", criterion1}, {"2 residual scaling on perturbed inputs", criterion2},
      {"3 agreement with the normal-form oracle", criterion3}, {"4 graded operator lemma", criterion4},
      {"5 model recursion", criterion5},        {"6 obstruction formula", criterion6},
      {"7 symmetry construction", criterion7},  {"8 determinism across workers", criterion8},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      check(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << "exception: " << e.what();
    }
    std::printf("criterion %s: %s | %s\n", name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.str().c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
