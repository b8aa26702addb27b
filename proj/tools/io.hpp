#ifndef SDES_TOOLS_IO_HPP
#define SDES_TOOLS_IO_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sdes/desargues.hpp"
#include "sdes/graded.hpp"
#include "sdes/segre.hpp"
#include "sdes/symmetry.hpp"

namespace sdes::io {

inline constexpr const char* kHypersurfaceKind = "hypersurface-complex-defining";
inline constexpr const char* kFamilyKind = "segre-family";

enum class InputKind { hypersurface, family };

struct InputFile {
  InputKind kind = InputKind::hypersurface;
  TruncatedSeries series;
  std::optional<ChartRadii> radii;
};

/// Parses a coefficient file; throws ParseError with a diagnostic.
InputFile parse_input(const nlohmann::json& j);
InputFile read_input(const std::filesystem::path& path);

/// The coefficient-file representation of a series.
nlohmann::json series_file(const TruncatedSeries& s, InputKind kind, std::optional<ChartRadii> radii = {});
nlohmann::json coefficients(const TruncatedSeries& s);

nlohmann::json to_json(const DesarguesReport& r);
nlohmann::json to_json(const ObstructionReport& r);
nlohmann::json to_json(const Obstruction& o);
nlohmann::json to_json(const LemmaReport& r);
nlohmann::json to_json(const WeightedJet& j);
nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(Complex c);

void write_json(const nlohmann::json& j, const std::optional<std::filesystem::path>& path);

}  // namespace sdes::io

#endif  // SDES_TOOLS_IO_HPP
