#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wavepalette {

inline constexpr double kVisibleMinNm = 380.0;
inline constexpr double kVisibleMaxNm = 780.0;

// Largest admissible spacing between consecutive table rows.
inline constexpr double kMaxCmfStepNm = 5.0;

// Below this x̄+ȳ+z̄ sum the chromaticity of a spectral stimulus is undefined.
inline constexpr double kDegenerateCmfSum = 1e-6;

/// A length in nanometres; always finite and strictly positive.
class Wavelength {
 public:
  explicit Wavelength(double nm);

  double nm() const noexcept { return nm_; }
  bool visible() const noexcept { return nm_ >= kVisibleMinNm && nm_ <= kVisibleMaxNm; }

  auto operator<=>(const Wavelength&) const = default;

 private:
  double nm_;
};

struct CmfRow {
  double lambda_nm;
  Eigen::Vector3d bar;  // (x̄, ȳ, z̄)
};

/// Sampled colour matching functions. Immutable once constructed; the
/// constructor enforces strictly increasing wavelengths, nonnegative weights
/// and a grid that covers the visible band without gaps wider than 5 nm.
class CmfTable {
 public:
  explicit CmfTable(std::vector<CmfRow> rows);

  std::span<const CmfRow> rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  double min_nm() const noexcept { return rows_.front().lambda_nm; }
  double max_nm() const noexcept { return rows_.back().lambda_nm; }

  /// Identifier derived from the canonical serialisation of the rows.
  const std::string& dataset_id() const noexcept { return dataset_id_; }

 private:
  std::vector<CmfRow> rows_;
  std::string dataset_id_;
};

/// Unit-sum chromaticity coordinates.
struct Chromaticity {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector2d xy() const { return {x, y}; }
  Eigen::Vector3d xyz() const { return {x, y, z}; }
};

struct LocusPoint {
  double lambda_nm;
  Eigen::Vector2d xy;
};

struct SpectralLocus {
  std::vector<LocusPoint> points;  // ordered by wavelength
  std::size_t skipped = 0;         // degenerate grid rows left out
};

/// Parses the `lambda_nm,xbar,ybar,zbar` CSV format.
/// Throws ParseError (with line number) or ValidationError.
CmfTable load_cmf(std::istream& source);
CmfTable load_cmf_file(const std::filesystem::path& path);

/// Inverse of load_cmf; numbers use the shortest fixed-point form that
/// round-trips, so a canonical file re-serialises byte-for-byte.
std::string serialize_cmf(const CmfTable& table);

/// Bundled asset path, overridden by the WAVEPALETTE_CMF environment variable.
std::filesystem::path default_cmf_path();

/// Linear interpolation between bracketing rows; exact at grid nodes.
/// Throws DomainError outside the table range.
Eigen::Vector3d cmf_at(const CmfTable& table, Wavelength lambda);

/// Throws DomainError for non-visible input and DegenerateStimulusError when
/// the interpolated weights sum below kDegenerateCmfSum.
Chromaticity chromaticity_at(const CmfTable& table, Wavelength lambda);

SpectralLocus spectral_locus(const CmfTable& table);

}  // namespace wavepalette
