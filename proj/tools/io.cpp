#include "io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "sdes/errors.hpp"

namespace sdes::io {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

InputFile parse_input(const json& j) {
  if (!j.is_object()) throw ParseError("top level must be an object");
  // Output of the segre and normal-form commands.
  if (!j.contains("kind") && j.contains("family")) return parse_input(j.at("family"));
  const json& kind = need(j, "kind");
  if (!kind.is_string()) throw ParseError("\"kind\" must be a string");
  InputFile out{InputKind::hypersurface, TruncatedSeries(frames::hypersurface(), 0), std::nullopt};
  const Frame* frame = nullptr;
  if (kind == kHypersurfaceKind) {
    out.kind = InputKind::hypersurface;
    frame = &frames::hypersurface();
  } else if (kind == kFamilyKind) {
    out.kind = InputKind::family;
    frame = &frames::family();
  } else {
    throw ParseError("unknown kind \"" + kind.get<std::string>() + "\"");
  }

  const json& vars = need(j, "variables");
  if (!vars.is_array() || vars.size() != frame->arity()) {
    throw ParseError("\"variables\" must list " + std::to_string(frame->arity()) + " names");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!vars[i].is_string() || vars[i].get<std::string>() != frame->name(i)) {
      throw ParseError("variable " + std::to_string(i) + " must be \"" + frame->name(i) + "\"");
    }
  }
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    if (!w.is_array() || w.size() != frame->arity()) throw ParseError("\"weights\" has the wrong length");
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!w[i].is_number_integer() || w[i].get<int>() != frame->weight(i)) {
        throw ParseError("weight of " + frame->name(i) + " must be " + std::to_string(frame->weight(i)));
      }
    }
  }
  const json& cap = need(j, "cap");
  if (!cap.is_number_integer() || cap.get<int>() < 1 || cap.get<int>() > kMaxCap) {
    throw ParseError("\"cap\" must be an integer in 1.." + std::to_string(kMaxCap));
  }
  out.series = TruncatedSeries(*frame, cap.get<int>());

  const json& coefs = need(j, "coefficients");
  if (!coefs.is_array()) throw ParseError("\"coefficients\" must be an array");
  for (std::size_t n = 0; n < coefs.size(); ++n) {
    const json& c = coefs[n];
    const std::string where = "coefficient " + std::to_string(n) + ": ";
    const json& exp = need(c, "exp");
    if (!exp.is_array() || exp.size() != frame->arity()) throw ParseError(where + "\"exp\" has the wrong length");
    std::vector<int> e;
    for (const auto& x : exp) {
      if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() > MultiIndex::kMaxExponent) {
        throw ParseError(where + "exponents must be small nonnegative integers");
      }
      e.push_back(x.get<int>());
    }
    const double re = c.contains("re") ? c.at("re").get<double>() : 0.0;
    const double im = c.contains("im") ? c.at("im").get<double>() : 0.0;
    const MultiIndex m{std::span<const int>(e)};
    if (frame->degree(m) > out.series.cap()) throw ParseError(where + "monomial above the declared cap");
    out.series.add_term(m, Complex(re, im));
  }
  if (j.contains("radii")) {
    const json& r = j.at("radii");
    out.radii = ChartRadii{need(r, "point").get<double>(), need(r, "parameter").get<double>()};
  }
  return out;
}

InputFile read_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return parse_input(j);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json coefficients(const TruncatedSeries& s) {
  json arr = json::array();
  for (const auto& [k, c] : s.terms()) {
    arr.push_back({{"exp", k.to_vector(s.arity())}, {"re", c.real()}, {"im", c.imag()}});
  }
  return arr;
}

json series_file(const TruncatedSeries& s, InputKind kind, std::optional<ChartRadii> radii) {
  json j{{"kind", kind == InputKind::hypersurface ? kHypersurfaceKind : kFamilyKind},
         {"variables", s.frame().names()},
         {"weights", s.frame().weights()},
         {"cap", s.cap()},
         {"coefficients", coefficients(s)}};
  if (radii) j["radii"] = {{"point", radii->point}, {"parameter", radii->parameter}};
  return j;
}

json to_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

json to_json(const DesarguesReport& r) {
  json per = json::array();
  for (const auto& [scale, res] : r.perScaleResiduals) {
    per.push_back({{"scale", scale}, {"maxResidual", res}, {"meanResidual", r.perScaleMean.at(scale)}});
  }
  return {{"samples", r.samples},           {"cap", r.cap},
          {"maxResidual", r.maxResidual},   {"meanResidual", r.meanResidual},
          {"perScaleResiduals", per},       {"fittedSlope", r.fittedSlope},
          {"verdict", std::string(to_string(r.verdict))}};
}

json to_json(const ObstructionReport& r) {
  json per = json::array();
  for (const auto& [w, s] : r.components) {
    per.push_back({{"weight", w}, {"maxAbs", s.max_abs()}, {"coefficients", coefficients(s)}});
  }
  return {{"components", per}, {"maxAbs", r.max_abs()}, {"verdict", std::string(to_string(oracle_verdict(r)))}};
}

json to_json(const Obstruction& o) {
  return {{"weight", o.weight}, {"magnitude", o.magnitude()}, {"nComponent", coefficients(o.nComponent)}};
}

json to_json(const LemmaReport& r) {
  return {{"weight", r.weight},
          {"unknowns", r.unknowns},
          {"dimV", r.dimV},
          {"dimN", r.dimN},
          {"dimW", r.dimW},
          {"injectivityMargin", r.injectivityMargin},
          {"matrixNorm", r.matrixNorm},
          {"relativeMargin", r.relativeMargin},
          {"decompositionDefect", r.decompositionDefect}};
}

json to_json(const WeightedJet& j) {
  return {{"cap", j.cap()},
          {"f", coefficients(j.f)},
          {"g", coefficients(j.g)},
          {"lambda", coefficients(j.lambda)},
          {"mu", coefficients(j.mu)}};
}

json to_json(const PropertyReport& r) {
  return {{"fixedOnL0", r.fixedOnL0},
          {"raysPreserved", r.raysPreserved},
          {"parallelism", r.parallelism},
          {"samples", r.samples},
          {"skipped", r.skipped}};
}

void write_json(const json& j, const std::optional<std::filesystem::path>& path) {
  if (!path) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(*path);
  if (!out) throw ValidationError("cannot write " + path->string());
  out << j.dump(2) << '\n';
}

}  // namespace sdes::io
