#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wavepalette/palette.hpp"
#include "wavepalette/wavemodel.hpp"

namespace wavepalette {

inline constexpr std::string_view kEngineVersion = "0.1.0";

/// Bad user input, tagged with the request field it came from.
class RequestError : public Error {
 public:
  RequestError(std::string field, const std::string& message)
      : Error(message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Palette request in raw string form, as it arrives from CLI flags or a
/// query string. Unset fields take their defaults.
struct PaletteQuery {
  std::optional<std::string> color;
  std::optional<std::string> wavelength;
  std::optional<std::string> levels;
  std::optional<std::string> count;
  std::optional<std::string> mode;
  std::optional<std::string> space;
  std::optional<std::string> ratios;  // comma-separated p:q
};

struct PaletteRequest {
  std::optional<Rgb<double>> color;
  std::optional<double> wavelength_nm;
  int levels = 2;
  std::size_t count = 3;
  MatrixMode mode = MatrixMode::Derived;
  WorkingSpace space = WorkingSpace::Linear;
  std::vector<Ratio> ratios;
};

/// Throws RequestError naming the offending field.
PaletteRequest parse_palette_query(const PaletteQuery& query);

using Json = nlohmann::ordered_json;

Json entry_json(const PaletteEntry& entry);

/// Runs the request and renders the palette document. Identical requests
/// produce byte-identical text.
Json palette_response(const PaletteEngine& engine, const PaletteRequest& request);

struct ConsonanceQuery {
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<std::string> domain;
  std::optional<std::string> step;
  std::optional<std::string> epsilon;
};

struct ConsonanceRequest {
  Mixture a;
  Mixture b;
  CrossingParams params;
};

ConsonanceRequest parse_consonance_query(const ConsonanceQuery& query);
Json consonance_response(const ConsonanceRequest& request);

/// Canonical text form shared by the CLI and the HTTP service.
std::string dump_json(const Json& doc);

}  // namespace wavepalette
