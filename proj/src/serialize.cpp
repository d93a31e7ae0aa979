#include "wavepalette/serialize.hpp"

#include <charconv>
#include <cmath>

#include "wavepalette/error.hpp"

namespace wavepalette {

namespace {

template <typename T>
T parse_number_field(const std::string& text, const std::string& field) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw RequestError(field, field + ": not a number: '" + text + "'");
  return value;
}

double parse_positive(const std::string& text, const std::string& field) {
  const double v = parse_number_field<double>(text, field);
  if (!std::isfinite(v) || v <= 0.0) throw RequestError(field, field + " must be positive");
  return v;
}

std::vector<Ratio> parse_ratio_list(const std::string& text) {
  std::vector<Ratio> out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    std::string_view token = rest.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    try {
      out.push_back(Ratio::parse(token));
    } catch (const DomainError& e) {
      throw RequestError("ratios", e.what());
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

Json ratio_list(const std::vector<Ratio>& ratios) {
  Json out = Json::array();
  for (const auto& r : ratios) out.push_back(r.str());
  return out;
}

}  // namespace

PaletteRequest parse_palette_query(const PaletteQuery& q) {
  PaletteRequest r;
  if (q.color && q.wavelength)
    throw RequestError("color", "give either a color or a wavelength, not both");
  if (!q.color && !q.wavelength)
    throw RequestError("color", "a base color (#RRGGBB) or wavelength is required");

  if (q.color) {
    try {
      r.color = parse_hex(*q.color);
    } catch (const DomainError& e) {
      throw RequestError("color", e.what());
    }
  } else {
    r.wavelength_nm = parse_number_field<double>(*q.wavelength, "wavelength");
    if (!(*r.wavelength_nm >= kVisibleMinNm && *r.wavelength_nm <= kVisibleMaxNm))
      throw RequestError("wavelength", "wavelength must lie in 380-780 nm");
  }

  if (q.levels) {
    r.levels = parse_number_field<int>(*q.levels, "levels");
    if (r.levels < 1) throw RequestError("levels", "levels must be at least 1");
  }
  if (q.count) {
    const int count = parse_number_field<int>(*q.count, "count");
    if (count < 1) throw RequestError("count", "count must be at least 1");
    r.count = static_cast<std::size_t>(count);
  }
  try {
    if (q.mode) r.mode = parse_mode(*q.mode);
  } catch (const DomainError& e) {
    throw RequestError("mode", e.what());
  }
  try {
    if (q.space) r.space = parse_space(*q.space);
  } catch (const DomainError& e) {
    throw RequestError("space", e.what());
  }
  if (q.ratios && !q.ratios->empty()) r.ratios = parse_ratio_list(*q.ratios);

  if (r.wavelength_nm && !r.ratios.empty())
    throw RequestError("ratios", "custom ratios apply to colors, not wavelengths");
  if (!r.ratios.empty() && r.mode == MatrixMode::Paper)
    throw RequestError("mode", "custom ratios are only available in derived mode");
  if (r.color && r.mode == MatrixMode::Paper && r.levels > 2)
    throw RequestError("levels", "paper mode publishes only 2 levels");
  return r;
}

Json entry_json(const PaletteEntry& e) {
  Json j;
  j["level"] = e.level;
  j["hex"] = e.hex;
  j["rgb"] = {e.color[0], e.color[1], e.color[2]};
  j["ratios"] = ratio_list(e.ratios);
  j["wavelengths_nm"] = e.wavelengths_nm;
  j["clamp"] = {{"scaled", e.clamp.scaled}, {"zeroed", e.clamp.zeroed}};
  return j;
}

Json palette_response(const PaletteEngine& engine, const PaletteRequest& request) {
  Json doc;
  doc["engine_version"] = kEngineVersion;
  doc["cmf_dataset"] = engine.table().dataset_id();

  Palette palette;
  bool exhausted = false;
  if (request.wavelength_nm) {
    palette = engine.spectral(Wavelength(*request.wavelength_nm), request.count, &exhausted);
    doc["kind"] = "spectral";
  } else if (!request.ratios.empty()) {
    palette = engine.custom_ratio_palette(*request.color, request.ratios, request.space);
    doc["kind"] = "custom";
    doc["mode"] = to_string(MatrixMode::Derived);
    doc["space"] = to_string(request.space);
  } else {
    palette = engine.palette_for_color(*request.color, request.levels, request.mode, request.space);
    doc["kind"] = "levels";
    doc["mode"] = to_string(request.mode);
    doc["space"] = to_string(request.space);
  }

  doc["base"] = entry_json(palette.base);
  Json entries = Json::array();
  for (const auto& e : palette.entries) entries.push_back(entry_json(e));
  doc["entries"] = std::move(entries);
  doc["skipped"] = palette.skipped;
  if (request.wavelength_nm) doc["exhausted"] = exhausted;
  return doc;
}

ConsonanceRequest parse_consonance_query(const ConsonanceQuery& q) {
  auto mixture = [](const std::optional<std::string>& spec, const std::string& field) {
    if (!spec || spec->empty()) throw RequestError(field, field + ": mixture is required");
    try {
      return Mixture::parse(*spec);
    } catch (const DomainError& e) {
      throw RequestError(field, field + ": " + e.what());
    }
  };
  ConsonanceRequest r{mixture(q.a, "a"), mixture(q.b, "b"), CrossingParams{}};
  if (q.domain) r.params.domain_end = parse_positive(*q.domain, "domain");
  if (q.step) r.params.step = parse_positive(*q.step, "step");
  if (q.epsilon) r.params.epsilon = parse_positive(*q.epsilon, "epsilon");
  if (r.params.step > r.params.domain_end)
    throw RequestError("step", "step must not exceed domain");
  return r;
}

Json consonance_response(const ConsonanceRequest& r) {
  const auto result = synchronized_zero_count(r.a, r.b, r.params);
  Json doc;
  doc["engine_version"] = kEngineVersion;
  doc["a"] = r.a.str();
  doc["b"] = r.b.str();
  doc["count"] = result.count;
  doc["density"] = result.density;
  doc["params"] = {{"domain_end", r.params.domain_end},
                   {"step", r.params.step},
                   {"epsilon", r.params.epsilon}};
  return doc;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace wavepalette
