#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "sdes/errors.hpp"

namespace {

using sdes::cli::Command;
using sdes::cli::JobSpec;

void add_common(CLI::App* sub, std::string& output, std::string& format) {
  sub->add_option("-o,--output", output, "Write the JSON report to this file");
  sub->add_option("--format", format, "Standard output format")->check(CLI::IsMember({"json", "text"}));
}

void add_input(CLI::App* sub, JobSpec& job) {
  sub->add_option("input", job.inputPath, "Coefficient file (JSON)")->required();
  sub->add_option("--cap", job.cap, "Truncation cap (>= 6)");
}

void add_tolerances(CLI::App* sub, JobSpec& job) {
  sub->add_option("--newton-tol", job.newtonTolerance, "Newton residual tolerance");
  sub->add_option("--separation", job.separation, "Minimum normalized point separation");
}

void add_sampling(CLI::App* sub, JobSpec& job) {
  sub->add_option("--seed", job.seed, "RNG seed");
  sub->add_option("--samples", job.nSamples, "Configurations per scale");
  sub->add_option("--scales", job.scales, "Comma-separated sampling scales")->delimiter(',');
  sub->add_option("--workers", job.workers, "Worker threads (0: SEGRE_DESARGUES_WORKERS or all cores)");
  sub->add_option("--spherical-threshold", job.sphericalThreshold, "Residual below which a run is spherical");
  sub->add_option("--nonspherical-factor", job.nonsphericalFactor,
                  "Factor above the threshold at which a run is nonspherical");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphericity of real hypersurfaces in C^2 via Segre families"};
  app.require_subcommand(1);
  JobSpec job;
  std::string output, format = "json", weights = "3..10";

  auto* sph = app.add_subcommand("sphericity", "Desargues verdict and normal-form oracle");
  add_input(sph, job);
  add_sampling(sph, job);
  add_tolerances(sph, job);
  add_common(sph, output, format);

  auto* seg = app.add_subcommand("segre", "Export the Segre family as a coefficient file");
  add_input(seg, job);
  add_common(seg, output, format);

  auto* des = app.add_subcommand("desargues", "Desargues residual statistics");
  add_input(des, job);
  add_sampling(des, job);
  add_tolerances(des, job);
  add_common(des, output, format);

  auto* nf = app.add_subcommand("normal-form", "Normalize the family and report resonant components");
  add_input(nf, job);
  add_common(nf, output, format);

  auto* sym = app.add_subcommand("symmetry", "Check the parabolic map built from a pair A, A'");
  add_input(sym, job);
  add_tolerances(sym, job);
  add_common(sym, output, format);
  sym->add_option("--seed", job.seed, "RNG seed");
  sym->add_option("--slope", job.slope, "Slope at O of the curve carrying A and A'");
  sym->add_option("--za", job.zA, "Abscissa of A");
  sym->add_option("--za-prime", job.zAprime, "Abscissa of A'");
  sym->add_option("--scale", job.symmetryScale, "Sampling scale for the property checks");
  sym->add_option("--symmetry-samples", job.symmetrySamples, "Samples for the property checks");
  sym->add_option("--jet-order", job.jetOrder, "Order of the fitted jet");

  auto* lem = app.add_subcommand("verify-lemma", "Injectivity and decomposition of the homological operator");
  lem->add_option("--weights", weights, "Weight range lo..hi");
  lem->add_option("--sigma-min", job.sigmaMin, "Relative singular value threshold");
  add_common(lem, output, format);

  auto* rec = app.add_subcommand("recursion", "Weight-by-weight construction of the parabolic jet");
  add_input(rec, job);
  add_common(rec, output, format);
  rec->add_option("--r", job.r, "Free zw-coefficient of f");
  rec->add_option("--max-weight", job.maxWeight, "Last weight to solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sdes::cli::kExitInput;
  }

  try {
    for (auto* sub : app.get_subcommands()) job.command = sdes::cli::command_from_string(sub->get_name());
    if (!output.empty()) job.outputPath = output;
    job.format = format == "text" ? sdes::cli::Format::text : sdes::cli::Format::json;
    const auto [lo, hi] = sdes::cli::parse_weight_range(weights);
    job.weightMin = lo;
    job.weightMax = hi;
  } catch (const sdes::Error& e) {
    std::cerr << "sdes: " << e.what() << '\n';
    return sdes::cli::kExitInput;
  }
  return sdes::cli::run(job, std::cout, std::cerr);
}
