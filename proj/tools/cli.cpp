#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "io.hpp"
#include "sdes/errors.hpp"
#include "sdes/hypersurface.hpp"

#ifndef SDES_VERSION
#define SDES_VERSION "0.0.0"
#endif

namespace sdes::cli {

namespace {

using nlohmann::json;

constexpr std::pair<Command, std::string_view> kNames[] = {
    {Command::sphericity, "sphericity"},     {Command::segre, "segre"},
    {Command::desargues, "desargues"},       {Command::normal_form, "normal-form"},
    {Command::symmetry, "symmetry"},         {Command::verify_lemma, "verify-lemma"},
    {Command::recursion, "recursion"},
};

bool needs_input(Command c) { return c != Command::verify_lemma; }

int parse_int(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ValidationError("not an integer: " + std::string(s));
  return v;
}

struct Loaded {
  io::InputFile input;
  SegreFamily family;
};

Loaded load(const JobSpec& job) {
  io::InputFile in = io::read_input(job.inputPath);
  if (job.cap) {
    in.series = *job.cap <= in.series.cap() ? in.series.truncated(*job.cap) : in.series.padded(*job.cap);
  }
  const ChartRadii radii = in.radii.value_or(ChartRadii{});
  if (in.kind == io::InputKind::hypersurface) {
    const Hypersurface h = Hypersurface::from_complex_defining(in.series);
    SegreFamily fam = raw_family(h, radii);
    return {std::move(in), std::move(fam)};
  }
  SegreFamily fam(in.series, false, radii);
  return {std::move(in), std::move(fam)};
}

DesarguesOptions desargues_options(const JobSpec& job) {
  DesarguesOptions opt;
  opt.newton.tolerance = job.newtonTolerance;
  opt.newton.separation = job.separation;
  opt.sphericalThreshold = job.sphericalThreshold;
  opt.nonsphericalFactor = job.nonsphericalFactor;
  opt.workers = resolve_workers(job.workers);
  return opt;
}

json provenance(const JobSpec& job, int cap) {
  json p{{"tool", "sdes"},
         {"version", SDES_VERSION},
         {"command", std::string(to_string(job.command))},
         {"seed", job.seed},
         {"tolerances",
          {{"newton", job.newtonTolerance},
           {"separation", job.separation},
           {"sphericalThreshold", job.sphericalThreshold},
           {"nonsphericalFactor", job.nonsphericalFactor},
           {"sigmaMin", job.sigmaMin},
           {"oracleVanishing", kOracleVanishing},
           {"oracleSignificant", kOracleSignificant},
           {"clean", kCleanRelative},
           {"rank", kRankEpsilon}}}};
  if (cap > 0) p["cap"] = cap;
  return p;
}

DesarguesReport desargues(const JobSpec& job, const SegreFamily& fam) {
  return sphericity_verdict(fam, job.nSamples, job.scales, job.seed, desargues_options(job));
}

json run_sphericity(const JobSpec& job) {
  const Loaded l = load(job);
  const DesarguesReport d = desargues(job, l.family);
  const NormalizationResult n = normalize_family(l.family);
  const Verdict o = oracle_verdict(n.report);
  return {{"desargues", io::to_json(d)},
          {"oracle", io::to_json(n.report)},
          {"verdict", std::string(to_string(d.verdict))},
          {"agreement", d.verdict == o},
          {"provenance", provenance(job, l.family.cap())}};
}

json run_segre(const JobSpec& job) {
  const Loaded l = load(job);
  return {{"family", io::series_file(l.family.series(), io::InputKind::family, l.family.radii())},
          {"provenance", provenance(job, l.family.cap())}};
}

json run_desargues(const JobSpec& job) {
  const Loaded l = load(job);
  return {{"desargues", io::to_json(desargues(job, l.family))}, {"provenance", provenance(job, l.family.cap())}};
}

json run_normal_form(const JobSpec& job) {
  const Loaded l = load(job);
  const NormalizationResult n = normalize_family(l.family);
  return {{"family", io::series_file(n.family.series(), io::InputKind::family, n.family.radii())},
          {"oracle", io::to_json(n.report)},
          {"provenance", provenance(job, l.family.cap())}};
}

json run_symmetry(const JobSpec& job) {
  const Loaded l = load(job);
  const PhiMap m = PhiMap::on_ray(l.family, job.slope, job.zA, job.zAprime);
  const PropertyReport props = verify_properties(m, job.symmetrySamples, job.seed, job.symmetryScale);
  json jet;
  try {
    const PhiJet pj = phi_jet(m, job.jetOrder);
    jet = {{"r", io::to_json(pj.r)},
           {"fitResidual", pj.fitResidual},
           {"linearDefect", pj.linearDefect},
           {"f", io::coefficients(pj.jet.f)},
           {"g", io::coefficients(pj.jet.g)}};
  } catch (const ConstructionViolation& e) {
    jet = {{"error", e.what()}};
  }
  return {{"A", {{"z", io::to_json(m.A().z)}, {"w", io::to_json(m.A().w)}}},
          {"Aprime", {{"z", io::to_json(m.Aprime().z)}, {"w", io::to_json(m.Aprime().w)}}},
          {"properties", io::to_json(props)},
          {"scale", job.symmetryScale},
          {"jet", jet},
          {"provenance", provenance(job, l.family.cap())}};
}

json run_verify_lemma(const JobSpec& job) {
  json rows = json::array();
  for (int l = job.weightMin; l <= job.weightMax; ++l) rows.push_back(io::to_json(verify_lemma_normal(l, 1.0, job.sigmaMin)));
  return {{"weights", rows}, {"provenance", provenance(job, 0)}};
}

json run_recursion_job(const JobSpec& job) {
  const Loaded l = load(job);
  if (job.maxWeight > l.family.cap()) throw ValidationError("--max-weight exceeds the cap");
  const NormalizationResult n = normalize_family(l.family);
  const RecursionResult rr = run_recursion(n.family, job.r, job.maxWeight);
  json out{{"r", job.r},
           {"completedWeight", rr.completedWeight},
           {"jet", io::to_json(rr.jet)},
           {"provenance", provenance(job, l.family.cap())}};
  out["obstruction"] = rr.obstruction ? io::to_json(*rr.obstruction) : json(nullptr);
  return out;
}

void print_text(const JobSpec& job, const json& rep, std::ostream& out) {
  auto desargues_lines = [&](const json& d) {
    out << "samples/scale " << d["samples"] << ", cap " << d["cap"] << '\n';
    for (const auto& row : d["perScaleResiduals"]) {
      out << "  scale " << std::setw(6) << row["scale"].get<double>() << "  max " << std::scientific
          << std::setprecision(3) << row["maxResidual"].get<double>() << "  mean " << row["meanResidual"].get<double>()
          << std::defaultfloat << '\n';
    }
    out << "max residual " << d["maxResidual"].get<double>() << ", fitted slope " << d["fittedSlope"].get<double>()
        << '\n'
        << "desargues verdict " << d["verdict"].get<std::string>() << '\n';
  };
  switch (job.command) {
    case Command::sphericity:
      desargues_lines(rep["desargues"]);
      out << "oracle max component " << rep["oracle"]["maxAbs"].get<double>() << ", verdict "
          << rep["oracle"]["verdict"].get<std::string>() << '\n'
          << "agreement " << (rep["agreement"].get<bool>() ? "yes" : "no") << '\n';
      break;
    case Command::desargues:
      desargues_lines(rep["desargues"]);
      break;
    case Command::normal_form:
      for (const auto& c : rep["oracle"]["components"]) {
        out << "weight " << c["weight"] << "  max " << c["maxAbs"].get<double>() << '\n';
      }
      out << "oracle verdict " << rep["oracle"]["verdict"].get<std::string>() << '\n';
      break;
    case Command::verify_lemma:
      out << "  l  unk  dimV  dimN  dimW  relMargin    defect\n";
      for (const auto& r : rep["weights"]) {
        out << std::setw(3) << r["weight"].get<int>() << std::setw(5) << r["unknowns"].get<int>() << std::setw(6)
            << r["dimV"].get<int>() << std::setw(6) << r["dimN"].get<int>() << std::setw(6) << r["dimW"].get<int>()
            << "  " << std::scientific << std::setprecision(3) << r["relativeMargin"].get<double>() << "  "
            << r["decompositionDefect"].get<double>() << std::defaultfloat << '\n';
      }
      break;
    case Command::recursion:
      out << "completed weight " << rep["completedWeight"] << '\n';
      if (!rep["obstruction"].is_null()) {
        out << "obstruction at weight " << rep["obstruction"]["weight"] << ", magnitude "
            << rep["obstruction"]["magnitude"].get<double>() << '\n';
      }
      break;
    case Command::symmetry: {
      const json& p = rep["properties"];
      out << "fixed on L0 " << p["fixedOnL0"].get<double>() << "\nrays preserved " << p["raysPreserved"].get<double>()
          << "\nparallelism " << p["parallelism"].get<double>() << "\nsamples " << p["samples"] << " (skipped "
          << p["skipped"] << ")\n";
      if (rep["jet"].contains("error")) {
        out << "jet: " << rep["jet"]["error"].get<std::string>() << '\n';
      } else {
        out << "jet r " << rep["jet"]["r"]["re"].get<double>() << "  linear defect "
            << rep["jet"]["linearDefect"].get<double>() << '\n';
      }
      break;
    }
    case Command::segre:
      out << rep["family"].dump(2) << '\n';
      break;
  }
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [k, n] : kNames) {
    if (k == c) return n;
  }
  return "unknown";
}

Command command_from_string(std::string_view s) {
  for (const auto& [k, n] : kNames) {
    if (n == s) return k;
  }
  throw ValidationError("unknown command " + std::string(s));
}

std::pair<int, int> parse_weight_range(std::string_view s) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) {
    const int w = parse_int(s);
    return {w, w};
  }
  return {parse_int(s.substr(0, dots)), parse_int(s.substr(dots + 2))};
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SEGRE_DESARGUES_WORKERS")) {
    try {
      const int n = parse_int(env);
      if (n > 0) return n;
    } catch (const ValidationError&) {
    }
    throw ValidationError("SEGRE_DESARGUES_WORKERS must be a positive integer");
  }
  return 0;
}

void validate(const JobSpec& job) {
  if (needs_input(job.command) && job.inputPath.empty()) throw ValidationError("an input file is required");
  if (job.cap && (*job.cap < 6 || *job.cap > kMaxCap)) throw ValidationError("--cap must be in 6.." + std::to_string(kMaxCap));
  if (job.nSamples < 1) throw ValidationError("--samples must be at least 1");
  if ((job.command == Command::sphericity || job.command == Command::desargues) && job.scales.empty()) {
    throw ValidationError("--scales must be nonempty");
  }
  if (job.workers < 0) throw ValidationError("--workers must be nonnegative");
  if (job.weightMin < 3 || job.weightMax < job.weightMin) throw ValidationError("--weights must be lo..hi with 3 <= lo <= hi");
  if (job.maxWeight < 3) throw ValidationError("--max-weight must be at least 3");
  if (job.symmetrySamples < 1) throw ValidationError("--symmetry-samples must be at least 1");
  if (!(job.newtonTolerance > 0.0) || !(job.separation > 0.0) || !(job.sphericalThreshold > 0.0) ||
      !(job.nonsphericalFactor > 1.0) || !(job.sigmaMin > 0.0)) {
    throw ValidationError("tolerances must be positive");
  }
}

json execute(const JobSpec& job) {
  validate(job);
  switch (job.command) {
    case Command::sphericity: return run_sphericity(job);
    case Command::segre: return run_segre(job);
    case Command::desargues: return run_desargues(job);
    case Command::normal_form: return run_normal_form(job);
    case Command::symmetry: return run_symmetry(job);
    case Command::verify_lemma: return run_verify_lemma(job);
    case Command::recursion: return run_recursion_job(job);
  }
  throw InternalAssertion("unhandled command");
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    const json rep = execute(job);
    if (job.outputPath) io::write_json(rep, job.outputPath);
    if (job.format == Format::text) {
      print_text(job, rep, out);
    } else if (!job.outputPath) {
      out << rep.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const InternalAssertion& e) {
    err << "sdes: internal assertion: " << e.what() << '\n';
    return kExitInternal;
  } catch (const ConstructionViolation& e) {
    err << "sdes: construction check failed: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    err << "sdes: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "sdes: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "sdes: unexpected failure: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace sdes::cli
