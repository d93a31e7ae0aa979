#include "wavepalette/cmf.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "wavepalette/error.hpp"

namespace wavepalette {

namespace {

constexpr std::string_view kHeader = "lambda_nm,xbar,ybar,zbar";

// Tolerance on grid spacing so that 5 nm steps stored in binary still pass.
constexpr double kStepSlack = 1e-9;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, h, 16);
  std::string hex(buf.data(), ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

void append_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed);
  out.append(buf.data(), ptr);
}

double parse_field(std::string_view field, std::size_t line, const char* name) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(std::string("malformed ") + name + " field '" + std::string(field) + "'", line);
  if (!std::isfinite(value))
    throw ParseError(std::string("non-finite ") + name, line);
  return value;
}

}  // namespace

Wavelength::Wavelength(double nm) : nm_(nm) {
  if (!std::isfinite(nm) || nm <= 0.0)
    throw DomainError("wavelength must be finite and positive, got " + std::to_string(nm));
}

CmfTable::CmfTable(std::vector<CmfRow> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw ValidationError("CMF table needs at least two rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!std::isfinite(r.lambda_nm) || r.lambda_nm <= 0.0)
      throw ValidationError("CMF row " + std::to_string(i) + ": invalid wavelength");
    if (!r.bar.allFinite() || (r.bar.array() < 0.0).any())
      throw ValidationError("CMF row " + std::to_string(i) + ": weights must be finite and nonnegative");
    if (i > 0) {
      const double gap = r.lambda_nm - rows_[i - 1].lambda_nm;
      if (gap <= 0.0)
        throw ValidationError("CMF wavelengths must be strictly increasing");
      if (gap > kMaxCmfStepNm + kStepSlack)
        throw ValidationError("CMF coverage gap of " + std::to_string(gap) + " nm after " +
                              std::to_string(rows_[i - 1].lambda_nm) + " nm");
    }
  }
  if (min_nm() > kVisibleMinNm || max_nm() < kVisibleMaxNm)
    throw ValidationError("CMF table must cover 380-780 nm");
  dataset_id_ = "cmf-" + fnv1a_hex(serialize_cmf(*this));
}

CmfTable load_cmf(std::istream& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(source, line)) throw ParseError("empty CMF source", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ParseError("expected header '" + std::string(kHeader) + "'", line_no);

  std::vector<CmfRow> rows;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<std::string_view, 4> fields;
    std::string_view rest(line);
    for (std::size_t f = 0; f < 4; ++f) {
      const auto comma = rest.find(',');
      if ((f < 3) != (comma != std::string_view::npos))
        throw ParseError("expected 4 comma-separated fields", line_no);
      fields[f] = rest.substr(0, comma);
      rest = f < 3 ? rest.substr(comma + 1) : std::string_view{};
    }

    CmfRow row{parse_field(fields[0], line_no, "lambda_nm"),
               {parse_field(fields[1], line_no, "xbar"), parse_field(fields[2], line_no, "ybar"),
                parse_field(fields[3], line_no, "zbar")}};
    if (row.lambda_nm <= 0.0) throw ParseError("wavelength must be positive", line_no);
    if ((row.bar.array() < 0.0).any()) throw ParseError("negative CMF weight", line_no);
    if (!rows.empty() && row.lambda_nm <= rows.back().lambda_nm)
      throw ParseError("rows out of order at " + std::string(fields[0]) + " nm", line_no);
    rows.push_back(row);
  }
  return CmfTable(std::move(rows));
}

CmfTable load_cmf_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open CMF file " + path.string());
  return load_cmf(in);
}

std::string serialize_cmf(const CmfTable& table) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : table.rows()) {
    append_number(out, r.lambda_nm);
    for (int c = 0; c < 3; ++c) {
      out += ',';
      append_number(out, r.bar[c]);
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path default_cmf_path() {
  if (const char* env = std::getenv("WAVEPALETTE_CMF"); env != nullptr && *env != '\0')
    return env;
  return WAVEPALETTE_DEFAULT_CMF;
}

Eigen::Vector3d cmf_at(const CmfTable& table, Wavelength lambda) {
  const double nm = lambda.nm();
  if (nm < table.min_nm() || nm > table.max_nm())
    throw DomainError("wavelength " + std::to_string(nm) + " nm outside CMF table range");
  const auto rows = table.rows();
  auto hi = std::lower_bound(rows.begin(), rows.end(), nm,
                             [](const CmfRow& r, double v) { return r.lambda_nm < v; });
  if (hi->lambda_nm == nm) return hi->bar;
  const auto lo = std::prev(hi);
  const double t = (nm - lo->lambda_nm) / (hi->lambda_nm - lo->lambda_nm);
  return (1.0 - t) * lo->bar + t * hi->bar;
}

Chromaticity chromaticity_at(const CmfTable& table, Wavelength lambda) {
  if (!lambda.visible())
    throw DomainError("wavelength " + std::to_string(lambda.nm()) + " nm is not visible");
  const Eigen::Vector3d bar = cmf_at(table, lambda);
  const double sum = bar.sum();
  if (sum < kDegenerateCmfSum)
    throw DegenerateStimulusError("CMF sum " + std::to_string(sum) + " at " +
                                  std::to_string(lambda.nm()) + " nm is below threshold");
  const Eigen::Vector3d c = bar / sum;
  return {c.x(), c.y(), c.z()};
}

SpectralLocus spectral_locus(const CmfTable& table) {
  SpectralLocus locus;
  for (const auto& r : table.rows()) {
    const Wavelength lambda(r.lambda_nm);
    if (!lambda.visible() || r.bar.sum() < kDegenerateCmfSum) {
      ++locus.skipped;
      continue;
    }
    locus.points.push_back({r.lambda_nm, chromaticity_at(table, lambda).xy()});
  }
  return locus;
}

}  // namespace wavepalette
