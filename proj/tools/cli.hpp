#ifndef SDES_TOOLS_CLI_HPP
#define SDES_TOOLS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sdes::cli {

enum class Command { sphericity, segre, desargues, normal_form, symmetry, verify_lemma, recursion };

std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

enum class Format { json, text };

struct JobSpec {
  Command command = Command::sphericity;
  std::filesystem::path inputPath;
  std::optional<int> cap;  // input cap when unset
  std::uint64_t seed = 1;
  std::vector<double> scales{0.05, 0.1, 0.2};
  int nSamples = 500;
  int workers = 0;  // 0: environment, then hardware
  std::optional<std::filesystem::path> outputPath;
  Format format = Format::json;

  // verify-lemma
  int weightMin = 3;
  int weightMax = 10;

  // recursion
  double r = 1.0;
  int maxWeight = 8;

  // symmetry
  double slope = 0.4;
  double zA = 0.1;
  double zAprime = 0.08;
  double symmetryScale = 0.2;
  int symmetrySamples = 200;
  int jetOrder = 6;

  // tolerance overrides
  double newtonTolerance = 1e-12;
  double separation = 1e-3;
  double sphericalThreshold = 1e-9;
  double nonsphericalFactor = 1e3;
  double sigmaMin = 1e-8;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

/// Checks the JobSpec invariants; throws ValidationError.
void validate(const JobSpec& job);

/// Runs the job and returns the report; throws library errors.
nlohmann::json execute(const JobSpec& job);

/// Runs the job, writes the report, and maps errors to exit codes. Diagnostics go to err.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

/// Worker count after the environment fallback.
int resolve_workers(int requested);

/// Parses "lo..hi" or a single weight.
std::pair<int, int> parse_weight_range(std::string_view s);

}  // namespace sdes::cli

#endif  // SDES_TOOLS_CLI_HPP
