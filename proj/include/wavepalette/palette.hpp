#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wavepalette/cmf.hpp"
#include "wavepalette/colorspace.hpp"
#include "wavepalette/wavemodel.hpp"

namespace wavepalette {

enum class MatrixMode { Paper, Derived };
enum class WorkingSpace { Linear, Encoded };

std::string_view to_string(MatrixMode mode);
std::string_view to_string(WorkingSpace space);
MatrixMode parse_mode(std::string_view text);
WorkingSpace parse_space(std::string_view text);

inline constexpr std::array<std::string_view, 3> kPrimaryNames{"red", "green", "blue"};

// Dominant wavelengths of the sRGB primaries as published with the
// worked example.
inline constexpr std::array<double, 3> kPaperPrimaryNm{611.4, 549.1, 464.2};

/// Ordered interval ratios consumed level by level. Ratios are unique and
/// sorted by ascending p·q (descending consonance score), ties by smaller p.
class RatioLadder {
 public:
  /// Throws ValidationError when the ordering invariant is violated.
  explicit RatioLadder(std::vector<Ratio> ratios);

  /// Every reduced p/q with 1 < p/q ≤ 5/2 and p·q ≤ max_product:
  /// 2:1, 3:2, 5:2, 4:3, 5:3, 5:4, 7:3, ...
  static RatioLadder standard(std::int64_t max_product = 400);

  const std::vector<Ratio>& ratios() const noexcept { return ratios_; }

 private:
  std::vector<Ratio> ratios_;
};

struct SpectralPalette {
  std::vector<double> wavelengths_nm;  // first is the base
  std::vector<Ratio> ratios;           // ratio that produced each entry; 1:1 for the base
  bool exhausted = false;              // ladder ran out before the requested count
};

/// Walks the ladder from the base wavelength, keeping visible candidates
/// (longer first within a ratio) that differ from every kept wavelength by
/// more than 0.01 nm.
SpectralPalette spectral_palette(Wavelength lambda, std::size_t count, const RatioLadder& ladder);

/// Consonant-colour map on RGB triples; column i is the image of primary i.
struct TransformMatrix {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  MatrixMode mode = MatrixMode::Derived;
  int level = 1;
  std::array<double, 3> source_wavelengths{};
  std::array<Ratio, 3> ratios{};
  std::array<bool, 3> substituted{};  // degenerate wavelength moved inward
};

/// Published level-1 and level-2 constants, verbatim.
/// Throws UnsupportedLevelError for any other level.
TransformMatrix paper_matrix(int level);

struct ConsonantChoice {
  double wavelength_nm = 0.0;
  Ratio ratio;
  std::vector<double> candidates;  // visible candidates for `ratio`
  std::vector<double> scores;      // mixture consonance per candidate, when more than one
};

struct ConsonantSet {
  std::array<double, 3> primaries_nm{};
  std::array<ConsonantChoice, 3> choices{};
};

/// Level-k consonant wavelength of each primary. Each primary walks the
/// ladder on its own, skipping ratios with no visible candidate. When both
/// candidates of a ratio are visible the one whose substituted triple has the
/// higher synchronised-zero density against the primaries' own mixture wins;
/// ties go to the longer wavelength.
/// Throws LadderExhaustedError naming the primary.
ConsonantSet derived_consonant_wavelengths(const std::array<double, 3>& primaries_nm, int level,
                                           const RatioLadder& ladder,
                                           const CrossingParams& params = {});

/// Per-primary consonant wavelengths for a single ratio; returns false (and
/// names the first primary without a candidate in `missing`) when some
/// primary has no visible candidate.
bool single_ratio_consonants(const std::array<double, 3>& primaries_nm, const Ratio& ratio,
                             const CrossingParams& params, ConsonantSet& out,
                             std::string& missing);

/// Columns are the spectral colours of the chosen wavelengths, in
/// red-source, green-source, blue-source order.
TransformMatrix matrix_from_consonants(const CmfTable& table, const ConsonantSet& set, int level);

struct ClampFlags {
  bool scaled = false;
  bool zeroed = false;
};

struct PaletteEntry {
  Rgb<double> color = Rgb<double>::Zero();  // gamma-encoded, in [0, 1]
  std::string hex;
  int level = 0;
  std::vector<Ratio> ratios;
  std::vector<double> wavelengths_nm;
  ClampFlags clamp;
};

/// Applies `matrix` to an encoded colour. Linear space decodes first and
/// re-encodes after clamping; encoded space multiplies the encoded triple.
PaletteEntry consonant_color(const Rgb<double>& encoded, const TransformMatrix& matrix,
                             WorkingSpace space);

struct Palette {
  PaletteEntry base;
  std::vector<PaletteEntry> entries;  // ascending level
  std::vector<std::string> skipped;   // ratios with no usable candidate
};

/// Immutable state shared by every palette computation: the CMF table, the
/// primaries' dominant wavelengths, the ladder and the crossing parameters.
class PaletteEngine {
 public:
  explicit PaletteEngine(CmfTable table, CrossingParams crossing = {},
                         RatioLadder ladder = RatioLadder::standard());

  const CmfTable& table() const noexcept { return table_; }
  const SpectralLocus& locus() const noexcept { return locus_; }
  const std::array<double, 3>& primaries_nm() const noexcept { return primaries_; }
  const RatioLadder& ladder() const noexcept { return ladder_; }
  const CrossingParams& crossing() const noexcept { return crossing_; }

  ConsonantSet consonants(int level) const;
  TransformMatrix derived_matrix(int level) const;
  TransformMatrix matrix(MatrixMode mode, int level) const;

  /// Base entry plus one entry per level 1..levels. Paper mode stops at 2.
  Palette palette_for_color(const Rgb<double>& encoded, int levels, MatrixMode mode,
                            WorkingSpace space) const;

  /// One derived-mode entry per ratio; ratios without a visible candidate
  /// for some primary are recorded in `skipped`.
  Palette custom_ratio_palette(const Rgb<double>& encoded, std::span<const Ratio> ratios,
                               WorkingSpace space) const;

  /// Spectral palette with each wavelength rendered as a clamped sRGB colour.
  Palette spectral(Wavelength lambda, std::size_t count, bool* exhausted = nullptr) const;

 private:
  CmfTable table_;
  SpectralLocus locus_;
  CrossingParams crossing_;
  RatioLadder ladder_;
  std::array<double, 3> primaries_{};
};

/// Dominant wavelengths (D65) of the sRGB primaries on the given locus.
std::array<double, 3> primary_wavelengths(const SpectralLocus& locus);

struct DivergenceReport {
  int level = 1;
  TransformMatrix paper;
  TransformMatrix derived;                  // engine primaries and ladder
  TransformMatrix derived_at_paper_source;  // published source wavelengths, derived pipeline
  Eigen::Matrix3d difference;               // derived - published
  Eigen::Matrix3d difference_at_paper_source;
  Eigen::Matrix3d paper_columns_xyz;        // published columns mapped to XYZ
};

DivergenceReport divergence_report(const PaletteEngine& engine, int level = 1);
std::string format_divergence_markdown(const DivergenceReport& report);

}  // namespace wavepalette
