#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "corpus.hpp"
#include "io.hpp"
#include "sdes/errors.hpp"

using namespace sdes;
using nlohmann::json;

namespace {

const std::filesystem::path kCorpus{SDES_CORPUS_DIR};

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sdes_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_job(const cli::JobSpec& job) {
  std::ostringstream out, err;
  const int code = cli::run(job, out, err);
  return {code, out.str(), err.str()};
}

cli::JobSpec sphericity(const std::filesystem::path& input) {
  cli::JobSpec job;
  job.command = cli::Command::sphericity;
  job.inputPath = input;
  job.cap = 8;
  job.seed = 1;
  job.nSamples = 200;
  job.workers = 1;
  return job;
}

}  // namespace

TEST(Cli, QuadricIsSpherical) {
  const Outcome o = run_job(sphericity(kCorpus / "quadric.json"));
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json rep = json::parse(o.out);
  EXPECT_EQ(rep["verdict"], "spherical");
  EXPECT_TRUE(rep["agreement"].get<bool>());
  EXPECT_EQ(rep["provenance"]["seed"], 1);
  EXPECT_EQ(rep["provenance"]["cap"], 8);
  EXPECT_TRUE(rep["provenance"].contains("tolerances"));
}

TEST(Cli, VerifyLemmaTable) {
  cli::JobSpec job;
  job.command = cli::Command::verify_lemma;
  std::tie(job.weightMin, job.weightMax) = cli::parse_weight_range("3..10");
  job.format = cli::Format::text;
  const Outcome o = run_job(job);
  EXPECT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_NE(o.out.find("dimW"), std::string::npos);
  const json rep = cli::execute(job);
  ASSERT_EQ(rep["weights"].size(), 8u);
  EXPECT_EQ(rep["weights"][1]["dimW"], 9);
}

TEST(Cli, LemmaViolationExitsThree) {
  cli::JobSpec job;
  job.command = cli::Command::verify_lemma;
  job.sigmaMin = 0.5;
  EXPECT_EQ(run_job(job).code, cli::kExitInternal);
}

TEST(Cli, MalformedFileExitsTwo) {
  const auto bad = scratch("bad.json");
  write_text(bad, "{\"kind\": \"segre-family\", ");
  const Outcome o = run_job(sphericity(bad));
  EXPECT_EQ(o.code, cli::kExitInput);
  EXPECT_NE(o.err.find("parse"), std::string::npos);
  EXPECT_TRUE(o.out.empty());
}

TEST(Cli, InvalidInputsExitTwo) {
  const std::string cases[] = {
      R"({"kind":"segre-family","variables":["z","b","a"],"cap":8,"coefficients":[]})",
      R"({"kind":"segre-family","variables":["z","a","b"],"weights":[1,2,2],"cap":8,"coefficients":[]})",
      R"({"kind":"segre-family","variables":["z","a","b"],"cap":8,"coefficients":[{"exp":[0,0,1],"re":1}]})",
      R"({"kind":"hypersurface-complex-defining","variables":["z","chi","tau"],"cap":8,
          "coefficients":[{"exp":[0,0,1],"re":1},{"exp":[1,1,0],"re":1}]})",
      R"({"kind":"other","variables":[],"cap":8,"coefficients":[]})",
      R"({"kind":"segre-family","variables":["z","a","b"],"cap":8,"coefficients":[{"exp":[0,0,1,0],"re":1}]})",
  };
  int i = 0;
  for (const auto& text : cases) {
    const auto p = scratch("invalid" + std::to_string(i++) + ".json");
    write_text(p, text);
    EXPECT_EQ(run_job(sphericity(p)).code, cli::kExitInput) << text;
  }
  EXPECT_EQ(run_job(sphericity(scratch("missing.json"))).code, cli::kExitInput);
}

TEST(Cli, JobSpecInvariants) {
  auto job = sphericity(kCorpus / "quadric.json");
  job.cap = 5;
  EXPECT_THROW(cli::validate(job), ValidationError);
  job.cap = 8;
  job.nSamples = 0;
  EXPECT_THROW(cli::validate(job), ValidationError);
  job.nSamples = 100;
  job.scales.clear();
  EXPECT_THROW(cli::validate(job), ValidationError);
  EXPECT_EQ(run_job(job).code, cli::kExitInput);
}

TEST(Cli, WeightRange) {
  EXPECT_EQ(cli::parse_weight_range("3..10"), std::make_pair(3, 10));
  EXPECT_EQ(cli::parse_weight_range("6"), std::make_pair(6, 6));
  EXPECT_THROW(cli::parse_weight_range("3..x"), ValidationError);
}

TEST(Cli, WorkerEnvironmentFallback) {
  ::setenv("SEGRE_DESARGUES_WORKERS", "3", 1);
  EXPECT_EQ(cli::resolve_workers(0), 3);
  EXPECT_EQ(cli::resolve_workers(2), 2);
  ::setenv("SEGRE_DESARGUES_WORKERS", "zero", 1);
  EXPECT_THROW(cli::resolve_workers(0), ValidationError);
  ::unsetenv("SEGRE_DESARGUES_WORKERS");
  EXPECT_EQ(cli::resolve_workers(0), 0);
}

TEST(Cli, ExportedFamilyRoundTrips) {
  auto seg = sphericity(kCorpus / "quadric_image_cubic.json");
  seg.command = cli::Command::segre;
  seg.outputPath = scratch("family.json");
  ASSERT_EQ(run_job(seg).code, cli::kExitOk);

  const json direct = cli::execute(sphericity(kCorpus / "quadric_image_cubic.json"));
  const json again = cli::execute(sphericity(*seg.outputPath));
  EXPECT_EQ(direct.dump(), again.dump());
}

TEST(Cli, ReportsIndependentOfWorkers) {
  auto one = sphericity(kCorpus / "phi42_eps1e-2.json");
  auto many = one;
  many.workers = 6;
  EXPECT_EQ(cli::execute(one).dump(), cli::execute(many).dump());
}

TEST(Cli, OtherCommands) {
  auto job = sphericity(kCorpus / "phi42_eps1e-2.json");
  job.command = cli::Command::normal_form;
  json rep = cli::execute(job);
  EXPECT_EQ(rep["oracle"]["verdict"], "nonspherical");

  job.command = cli::Command::recursion;
  rep = cli::execute(job);
  EXPECT_EQ(rep["obstruction"]["weight"], 8);

  job.command = cli::Command::symmetry;
  rep = cli::execute(job);
  EXPECT_GE(rep["properties"]["parallelism"].get<double>(), 1e-6);

  job.command = cli::Command::desargues;
  rep = cli::execute(job);
  EXPECT_EQ(rep["desargues"]["verdict"], "nonspherical");
}

TEST(Cli, CommandNames) {
  for (auto c : {cli::Command::sphericity, cli::Command::segre, cli::Command::desargues, cli::Command::normal_form,
                 cli::Command::symmetry, cli::Command::verify_lemma, cli::Command::recursion}) {
    EXPECT_EQ(cli::command_from_string(cli::to_string(c)), c);
  }
  EXPECT_THROW(cli::command_from_string("plot"), ValidationError);
}

TEST(Corpus, FilesMatchGenerator) {
  for (const auto& e : corpus::entries()) {
    const io::InputFile in = io::read_input(kCorpus / (e.name + ".json"));
    EXPECT_EQ(in.kind, e.kind) << e.name;
    EXPECT_EQ(max_difference(in.series, e.series), 0.0) << e.name;
  }
}

TEST(Io, SeriesFileRoundTrip) {
  const auto s = corpus::phi42(1e-3);
  const auto back = io::parse_input(io::series_file(s, io::InputKind::hypersurface, ChartRadii{0.4, 0.6}));
  EXPECT_EQ(max_difference(back.series, s), 0.0);
  ASSERT_TRUE(back.radii.has_value());
  EXPECT_EQ(back.radii->point, 0.4);
}
