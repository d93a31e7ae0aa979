#include "wavepalette/colorspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>

namespace wavepalette {

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower >= 'a' && lower <= 'f') return lower - 'a' + 10;
  return -1;
}

}  // namespace

Chromaticity srgb_primary_chromaticity(int channel) {
  if (channel < 0 || channel > 2) throw DomainError("primary channel must be 0, 1 or 2");
  const Eigen::Vector3d col = srgb_to_xyz_matrix<double>().col(channel);
  const Eigen::Vector3d c = col / col.sum();
  return {c.x(), c.y(), c.z()};
}

double dominant_wavelength(const Eigen::Vector2d& c, const WhitePoint& white,
                           const SpectralLocus& locus) {
  const Eigen::Vector2d dir = c - white.xy;
  if (dir.norm() < 1e-12) throw UndefinedDirectionError("colour coincides with the white point");

  struct Hit {
    double t;
    double lambda_nm;
  };
  std::optional<Hit> best;
  constexpr double kSlack = 1e-12;

  const auto& pts = locus.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Eigen::Vector2d& a = pts[i].xy;
    const Eigen::Vector2d edge = pts[i + 1].xy - a;
    const double det = cross(dir, edge);
    if (std::abs(det) < 1e-15) continue;  // parallel or zero-length segment
    const Eigen::Vector2d rel = a - white.xy;
    // white + t·dir = a + s·edge
    const double t = cross(rel, edge) / det;
    const double s = cross(rel, dir) / det;
    if (t <= 0.0 || s < -kSlack || s > 1.0 + kSlack) continue;
    const double sc = std::clamp(s, 0.0, 1.0);
    const double lambda = pts[i].lambda_nm + sc * (pts[i + 1].lambda_nm - pts[i].lambda_nm);
    const bool same_point = best && std::abs(t - best->t) <= 1e-6 * best->t;
    if (!best || (same_point && lambda < best->lambda_nm) || (!same_point && t < best->t))
      best = Hit{t, lambda};
  }
  if (!best)
    throw NoDominantWavelengthError("ray from the white point exits through the purple line");
  return best->lambda_nm;
}

Rgb<double> wavelength_to_linear_rgb(Wavelength lambda, const CmfTable& table) {
  return xyz_to_linear(chromaticity_at(table, lambda).xyz());
}

Rgb<double> parse_hex(std::string_view text) {
  if (text.size() != 7 || text[0] != '#')
    throw DomainError("colour must be #RRGGBB, got '" + std::string(text) + "'");
  Rgb<double> out;
  for (int ch = 0; ch < 3; ++ch) {
    const int hi = hex_digit(text[1 + 2 * ch]);
    const int lo = hex_digit(text[2 + 2 * ch]);
    if (hi < 0 || lo < 0)
      throw DomainError("colour must be #RRGGBB, got '" + std::string(text) + "'");
    out[ch] = (hi * 16 + lo) / 255.0;
  }
  return out;
}

std::string to_hex(const Rgb<double>& encoded) {
  detail::require_unit_range(encoded, "to_hex");
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "#";
  for (int ch = 0; ch < 3; ++ch) {
    const long v = std::lround(encoded[ch] * 255.0);
    out += kDigits[v / 16];
    out += kDigits[v % 16];
  }
  return out;
}

}  // namespace wavepalette
