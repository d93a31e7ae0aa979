#include "wavepalette/palette.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "wavepalette/error.hpp"

namespace wavepalette {

namespace {

// Inward probe step used when a consonant wavelength sits where the CMF
// sum is degenerate.
constexpr double kSubstituteStepNm = 0.1;

Mixture unit_mixture(const std::array<double, 3>& nm) {
  return Mixture({{1.0, nm[0]}, {1.0, nm[1]}, {1.0, nm[2]}});
}

// Picks among several visible candidates for primary `i`; the other slots of
// `provisional` hold the wavelengths used for the remaining primaries.
void resolve_branch(ConsonantChoice& choice, std::size_t i, std::array<double, 3> provisional,
                    const Mixture& base, const CrossingParams& params) {
  if (choice.candidates.size() < 2) {
    choice.wavelength_nm = choice.candidates.front();
    return;
  }
  choice.scores.clear();
  double best_score = -1.0;
  for (double candidate : choice.candidates) {
    provisional[i] = candidate;
    const double score = mixture_consonance(base, unit_mixture(provisional), params);
    choice.scores.push_back(score);
    // Candidates ascend, so >= lets the longer one win ties.
    if (score >= best_score) {
      best_score = score;
      choice.wavelength_nm = candidate;
    }
  }
}

void resolve_all(ConsonantSet& set, const CrossingParams& params) {
  const Mixture base = unit_mixture(set.primaries_nm);
  std::array<double, 3> provisional{};
  for (std::size_t i = 0; i < 3; ++i) provisional[i] = set.choices[i].candidates.back();
  for (std::size_t i = 0; i < 3; ++i) {
    resolve_branch(set.choices[i], i, provisional, base, params);
    provisional[i] = set.choices[i].wavelength_nm;
  }
}

PaletteEntry make_base(const Rgb<double>& encoded, const std::array<double, 3>& primaries) {
  PaletteEntry base;
  base.color = encoded;
  base.hex = to_hex(encoded);
  base.level = 0;
  base.wavelengths_nm.assign(primaries.begin(), primaries.end());
  return base;
}

}  // namespace

std::string_view to_string(MatrixMode mode) {
  return mode == MatrixMode::Paper ? "paper" : "derived";
}

std::string_view to_string(WorkingSpace space) {
  return space == WorkingSpace::Linear ? "linear" : "encoded";
}

MatrixMode parse_mode(std::string_view text) {
  if (text == "paper") return MatrixMode::Paper;
  if (text == "derived") return MatrixMode::Derived;
  throw DomainError("mode must be paper or derived, got '" + std::string(text) + "'");
}

WorkingSpace parse_space(std::string_view text) {
  if (text == "linear") return WorkingSpace::Linear;
  if (text == "encoded") return WorkingSpace::Encoded;
  throw DomainError("space must be linear or encoded, got '" + std::string(text) + "'");
}

RatioLadder::RatioLadder(std::vector<Ratio> ratios) : ratios_(std::move(ratios)) {
  for (std::size_t i = 1; i < ratios_.size(); ++i) {
    const auto& a = ratios_[i - 1];
    const auto& b = ratios_[i];
    const auto ka = std::pair{a.p() * a.q(), a.p()};
    const auto kb = std::pair{b.p() * b.q(), b.p()};
    if (!(ka < kb))
      throw ValidationError("ladder must list unique ratios by ascending p*q: " + a.str() +
                            " before " + b.str());
  }
}

RatioLadder RatioLadder::standard(std::int64_t max_product) {
  std::vector<Ratio> out;
  for (std::int64_t q = 1; q * q < max_product; ++q) {
    for (std::int64_t p = q + 1; 2 * p <= 5 * q && p * q <= max_product; ++p) {
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    }
  }
  std::sort(out.begin(), out.end(), [](const Ratio& a, const Ratio& b) {
    return std::pair{a.p() * a.q(), a.p()} < std::pair{b.p() * b.q(), b.p()};
  });
  return RatioLadder(std::move(out));
}

SpectralPalette spectral_palette(Wavelength lambda, std::size_t count, const RatioLadder& ladder) {
  if (!lambda.visible()) throw DomainError("base wavelength must be visible");
  if (count < 1) throw DomainError("palette needs at least one colour");
  SpectralPalette out;
  out.wavelengths_nm.push_back(lambda.nm());
  out.ratios.emplace_back();
  for (const Ratio& r : ladder.ratios()) {
    if (out.wavelengths_nm.size() >= count) break;
    auto candidates = consonant_wavelengths(lambda, r);
    std::reverse(candidates.begin(), candidates.end());
    for (double c : candidates) {
      if (out.wavelengths_nm.size() >= count) break;
      const bool duplicate = std::any_of(out.wavelengths_nm.begin(), out.wavelengths_nm.end(),
                                         [c](double w) { return std::abs(w - c) <= 0.01; });
      if (duplicate) continue;
      out.wavelengths_nm.push_back(c);
      out.ratios.push_back(r);
    }
  }
  out.exhausted = out.wavelengths_nm.size() < count;
  return out;
}

TransformMatrix paper_matrix(int level) {
  TransformMatrix t;
  t.mode = MatrixMode::Paper;
  t.level = level;
  if (level == 1) {
    t.m << 0.412554, 0.075942, 1.361850,
          -0.387623, -0.025863, -0.496422,
           0.942622, -0.008750, -0.140190;
    t.source_wavelengths = {407.6, 732.133, 696.3};
    t.ratios = {Ratio(3, 2), Ratio(4, 3), Ratio(3, 2)};
  } else if (level == 2) {
    // The g row is printed with five decimals in the blue coefficient.
    t.m << 0.153969, 0.075942, 1.291906,
          -0.265282, -0.025863, -0.32766,
           0.941624, -0.008750, -0.186152;
    t.source_wavelengths = {458.55, 732.133, 618.933};
    t.ratios = {Ratio(4, 3), Ratio(4, 3), Ratio(4, 3)};
  } else {
    throw UnsupportedLevelError("paper mode publishes levels 1 and 2 only, got level " +
                                std::to_string(level));
  }
  return t;
}

ConsonantSet derived_consonant_wavelengths(const std::array<double, 3>& primaries_nm, int level,
                                           const RatioLadder& ladder,
                                           const CrossingParams& params) {
  if (level < 1) throw DomainError("level must be at least 1");
  ConsonantSet set;
  set.primaries_nm = primaries_nm;
  for (std::size_t i = 0; i < 3; ++i) {
    const Wavelength primary(primaries_nm[i]);
    int usable = 0;
    bool found = false;
    for (const Ratio& r : ladder.ratios()) {
      auto candidates = consonant_wavelengths(primary, r);
      if (candidates.empty()) continue;
      if (++usable == level) {
        set.choices[i].ratio = r;
        set.choices[i].candidates = std::move(candidates);
        found = true;
        break;
      }
    }
    if (!found)
      throw LadderExhaustedError("ratio ladder exhausted for the " +
                                 std::string(kPrimaryNames[i]) + " primary at level " +
                                 std::to_string(level));
  }
  resolve_all(set, params);
  return set;
}

bool single_ratio_consonants(const std::array<double, 3>& primaries_nm, const Ratio& ratio,
                             const CrossingParams& params, ConsonantSet& out,
                             std::string& missing) {
  out = ConsonantSet{};
  out.primaries_nm = primaries_nm;
  for (std::size_t i = 0; i < 3; ++i) {
    auto candidates = consonant_wavelengths(Wavelength(primaries_nm[i]), ratio);
    if (candidates.empty()) {
      missing = kPrimaryNames[i];
      return false;
    }
    out.choices[i].ratio = ratio;
    out.choices[i].candidates = std::move(candidates);
  }
  resolve_all(out, params);
  return true;
}

TransformMatrix matrix_from_consonants(const CmfTable& table, const ConsonantSet& set, int level) {
  TransformMatrix t;
  t.mode = MatrixMode::Derived;
  t.level = level;
  for (int i = 0; i < 3; ++i) {
    double nm = set.choices[i].wavelength_nm;
    t.ratios[i] = set.choices[i].ratio;
    const double inward = nm < 0.5 * (kVisibleMinNm + kVisibleMaxNm) ? kSubstituteStepNm
                                                                      : -kSubstituteStepNm;
    while (true) {
      try {
        t.m.col(i) = wavelength_to_linear_rgb(Wavelength(nm), table);
        break;
      } catch (const DegenerateStimulusError&) {
        nm += inward;
        t.substituted[i] = true;
      }
    }
    t.source_wavelengths[i] = nm;
  }
  return t;
}

PaletteEntry consonant_color(const Rgb<double>& encoded, const TransformMatrix& matrix,
                             WorkingSpace space) {
  PaletteEntry e;
  e.level = matrix.level;
  e.ratios.assign(matrix.ratios.begin(), matrix.ratios.end());
  e.wavelengths_nm.assign(matrix.source_wavelengths.begin(), matrix.source_wavelengths.end());

  Rgb<double> raw;
  if (space == WorkingSpace::Linear) {
    raw = matrix.m * srgb_decode(encoded);
  } else {
    detail::require_unit_range(encoded, "consonant_color");
    raw = matrix.m * encoded;
  }
  const auto clamped = clamp_paper_tracked(raw);
  e.clamp = {clamped.scaled, clamped.zeroed};
  e.color = space == WorkingSpace::Linear ? srgb_encode(clamped.value) : clamped.value;
  e.hex = to_hex(e.color);
  return e;
}

std::array<double, 3> primary_wavelengths(const SpectralLocus& locus) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i)
    out[i] = dominant_wavelength(srgb_primary_chromaticity(i).xy(), kD65, locus);
  return out;
}

PaletteEngine::PaletteEngine(CmfTable table, CrossingParams crossing, RatioLadder ladder)
    : table_(std::move(table)),
      locus_(spectral_locus(table_)),
      crossing_(crossing),
      ladder_(std::move(ladder)) {
  crossing_.validate();
  primaries_ = primary_wavelengths(locus_);
}

ConsonantSet PaletteEngine::consonants(int level) const {
  return derived_consonant_wavelengths(primaries_, level, ladder_, crossing_);
}

TransformMatrix PaletteEngine::derived_matrix(int level) const {
  return matrix_from_consonants(table_, consonants(level), level);
}

TransformMatrix PaletteEngine::matrix(MatrixMode mode, int level) const {
  return mode == MatrixMode::Paper ? paper_matrix(level) : derived_matrix(level);
}

Palette PaletteEngine::palette_for_color(const Rgb<double>& encoded, int levels, MatrixMode mode,
                                         WorkingSpace space) const {
  if (levels < 1) throw DomainError("levels must be at least 1");
  if (mode == MatrixMode::Paper && levels > 2)
    throw UnsupportedLevelError("paper mode supports at most 2 levels, got " +
                                std::to_string(levels));
  Palette out;
  out.base = make_base(encoded, mode == MatrixMode::Paper ? kPaperPrimaryNm : primaries_);
  for (int level = 1; level <= levels; ++level)
    out.entries.push_back(consonant_color(encoded, matrix(mode, level), space));
  return out;
}

Palette PaletteEngine::custom_ratio_palette(const Rgb<double>& encoded,
                                            std::span<const Ratio> ratios,
                                            WorkingSpace space) const {
  if (ratios.empty()) throw DomainError("custom palette needs at least one ratio");
  Palette out;
  out.base = make_base(encoded, primaries_);
  int level = 0;
  for (const Ratio& r : ratios) {
    ++level;
    ConsonantSet set;
    std::string missing;
    if (!single_ratio_consonants(primaries_, r, crossing_, set, missing)) {
      out.skipped.push_back(r.str() + ": no visible candidate for the " + missing + " primary");
      continue;
    }
    out.entries.push_back(consonant_color(encoded, matrix_from_consonants(table_, set, level), space));
  }
  return out;
}

Palette PaletteEngine::spectral(Wavelength lambda, std::size_t count, bool* exhausted) const {
  const SpectralPalette sp = spectral_palette(lambda, count, ladder_);
  if (exhausted != nullptr) *exhausted = sp.exhausted;
  Palette out;
  for (std::size_t i = 0; i < sp.wavelengths_nm.size(); ++i) {
    PaletteEntry e;
    const double nm = sp.wavelengths_nm[i];
    const auto clamped = clamp_paper_tracked(wavelength_to_linear_rgb(Wavelength(nm), table_));
    e.color = srgb_encode(clamped.value);
    e.hex = to_hex(e.color);
    e.clamp = {clamped.scaled, clamped.zeroed};
    e.level = static_cast<int>(i);
    e.wavelengths_nm = {nm};
    if (i > 0) e.ratios = {sp.ratios[i]};
    if (i == 0)
      out.base = std::move(e);
    else
      out.entries.push_back(std::move(e));
  }
  return out;
}

DivergenceReport divergence_report(const PaletteEngine& engine, int level) {
  DivergenceReport r;
  r.level = level;
  r.paper = paper_matrix(level);
  r.derived = engine.derived_matrix(level);
  r.difference = r.derived.m - r.paper.m;

  ConsonantSet at_source;
  at_source.primaries_nm = kPaperPrimaryNm;
  for (int i = 0; i < 3; ++i) {
    at_source.choices[i].wavelength_nm = r.paper.source_wavelengths[i];
    at_source.choices[i].ratio = r.paper.ratios[i];
  }
  r.derived_at_paper_source = matrix_from_consonants(engine.table(), at_source, level);
  r.difference_at_paper_source = r.derived_at_paper_source.m - r.paper.m;
  r.paper_columns_xyz = srgb_to_xyz_matrix<double>() * r.paper.m;
  return r;
}

std::string format_divergence_markdown(const DivergenceReport& r) {
  std::ostringstream os;
  char buf[128];
  auto matrix_table = [&](const char* title, const Eigen::Matrix3d& m, bool xyz = false) {
    os << "### " << title << "\n\n| row | red-source | green-source | blue-source |\n"
       << "|---|---:|---:|---:|\n";
    static constexpr const char* kRgb[] = {"r", "g", "b"};
    static constexpr const char* kXyz[] = {"X", "Y", "Z"};
    for (int i = 0; i < 3; ++i) {
      os << "| " << (xyz ? kXyz : kRgb)[i];
      for (int j = 0; j < 3; ++j) {
        std::snprintf(buf, sizeof buf, " | %+.6f", m(i, j));
        os << buf;
      }
      os << " |\n";
    }
    os << "\n";
  };
  auto wavelengths = [&](const TransformMatrix& t) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
      std::snprintf(buf, sizeof buf, "%s%.3f nm (%s)", i ? ", " : "", t.source_wavelengths[i],
                    t.ratios[i].str().c_str());
      s += buf;
    }
    return s;
  };

  os << "## Level " << r.level << " consonant matrix: derived vs published\n\n";
  os << "Published source wavelengths: " << wavelengths(r.paper) << "\n\n";
  os << "Derived source wavelengths: " << wavelengths(r.derived) << "\n\n";
  matrix_table("Published constants", r.paper.m);
  matrix_table("Derived matrix", r.derived.m);
  matrix_table("Difference (derived - published)", r.difference);
  matrix_table("Derived pipeline at the published source wavelengths", r.derived_at_paper_source.m);
  matrix_table("Difference at the published source wavelengths", r.difference_at_paper_source);
  matrix_table("Published columns mapped through the sRGB to XYZ matrix", r.paper_columns_xyz, true);

  os << "### Back-substitution check\n\n";
  for (int j = 0; j < 3; ++j) {
    const double y = r.paper_columns_xyz(1, j);
    std::snprintf(buf, sizeof buf, "- %s-source column: Y = %+.6f%s\n", kPrimaryNames[j].data(), y,
                  y < 0.0 ? " (negative: not a physical spectral stimulus)" : "");
    os << buf;
  }
  os << "\nThe published coordinates cannot be recovered exactly from the published XYZ values "
        "and matrix; the derived matrix is accepted on its properties, not by equality.\n";
  return os.str();
}

}  // namespace wavepalette
