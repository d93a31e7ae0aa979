#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/LU>

#include "wavepalette/cmf.hpp"
#include "wavepalette/error.hpp"

namespace wavepalette {

template <typename Scalar>
using Rgb = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Xyz = Eigen::Matrix<Scalar, 3, 1>;

/// Linear sRGB → CIE XYZ. Columns are the XYZ coordinates of the red, green
/// and blue primaries at unit intensity.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 3, 3> srgb_to_xyz_matrix() {
  Eigen::Matrix<Scalar, 3, 3> m;
  m << Scalar(0.412456), Scalar(0.357576), Scalar(0.180437),
       Scalar(0.212673), Scalar(0.715152), Scalar(0.072175),
       Scalar(0.019334), Scalar(0.119192), Scalar(0.950304);
  return m;
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, 3, 3> xyz_to_srgb_matrix() {
  return srgb_to_xyz_matrix<Scalar>().inverse();
}

namespace detail {

template <typename Derived>
void require_unit_range(const Eigen::MatrixBase<Derived>& c, const char* what) {
  using Scalar = typename Derived::Scalar;
  if (!c.allFinite() || (c.array() < Scalar(0)).any() || (c.array() > Scalar(1)).any())
    throw DomainError(std::string(what) + ": components must lie in [0, 1]");
}

template <typename Scalar>
Scalar decode_component(Scalar v) {
  using std::pow;
  return v <= Scalar(0.04045) ? v / Scalar(12.92)
                              : pow((v + Scalar(0.055)) / Scalar(1.055), Scalar(2.4));
}

// Knee placed at decode's knee mapped through the linear branch, so that
// encode is the branch-wise inverse of decode.
template <typename Scalar>
Scalar encode_component(Scalar v) {
  using std::pow;
  return v <= Scalar(0.04045) / Scalar(12.92) ? v * Scalar(12.92)
                                : Scalar(1.055) * pow(v, Scalar(1) / Scalar(2.4)) - Scalar(0.055);
}

}  // namespace detail

/// Gamma-encoded sRGB → linear light. Throws DomainError outside [0, 1].
template <typename Derived>
Rgb<typename Derived::Scalar> srgb_decode(const Eigen::MatrixBase<Derived>& encoded) {
  detail::require_unit_range(encoded, "srgb_decode");
  return encoded.unaryExpr([](auto v) { return detail::decode_component(v); });
}

/// Linear light → gamma-encoded sRGB. Throws DomainError outside [0, 1];
/// clamp first.
template <typename Derived>
Rgb<typename Derived::Scalar> srgb_encode(const Eigen::MatrixBase<Derived>& linear) {
  detail::require_unit_range(linear, "srgb_encode");
  Rgb<typename Derived::Scalar> out =
      linear.unaryExpr([](auto v) { return detail::encode_component(v); });
  // The power branch can overshoot 1 by an ulp.
  return out.cwiseMin(typename Derived::Scalar(1));
}

template <typename Derived>
Xyz<typename Derived::Scalar> linear_to_xyz(const Eigen::MatrixBase<Derived>& linear) {
  return srgb_to_xyz_matrix<typename Derived::Scalar>() * linear;
}

template <typename Derived>
Rgb<typename Derived::Scalar> xyz_to_linear(const Eigen::MatrixBase<Derived>& xyz) {
  return xyz_to_srgb_matrix<typename Derived::Scalar>() * xyz;
}

template <typename Scalar>
struct ClampResult {
  Rgb<Scalar> value;
  bool scaled = false;  // a component exceeded one and all were rescaled
  bool zeroed = false;  // at least one negative component was set to zero
};

/// Two-step gamut clamp: if the largest component exceeds one, divide every
/// component by it; then replace negatives by zero. The order matters.
template <typename Derived>
ClampResult<typename Derived::Scalar> clamp_paper_tracked(const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  if (!c.allFinite()) throw DomainError("clamp_paper: components must be finite");
  ClampResult<Scalar> r{c};
  const Scalar peak = r.value.maxCoeff();
  if (peak > Scalar(1)) {
    r.value /= peak;
    r.scaled = true;
  }
  if ((r.value.array() < Scalar(0)).any()) {
    r.value = r.value.cwiseMax(Scalar(0));
    r.zeroed = true;
  }
  return r;
}

template <typename Derived>
Rgb<typename Derived::Scalar> clamp_paper(const Eigen::MatrixBase<Derived>& c) {
  return clamp_paper_tracked(c).value;
}

struct WhitePoint {
  Eigen::Vector2d xy;
};

inline const WhitePoint kD65{{0.3127, 0.3290}};

/// Chromaticity of the sRGB primary `channel` (0 = red, 1 = green, 2 = blue),
/// taken from the columns of srgb_to_xyz_matrix.
Chromaticity srgb_primary_chromaticity(int channel);

/// Wavelength where the ray from `white` through `c` meets the spectral locus,
/// interpolated linearly between locus vertices. Where several vertices share
/// the hit point (the flat long-wavelength tail) the shortest is returned.
/// Throws UndefinedDirectionError when c sits on the white point and
/// NoDominantWavelengthError when the ray leaves through the purple line.
double dominant_wavelength(const Eigen::Vector2d& c, const WhitePoint& white,
                           const SpectralLocus& locus);

/// Spectral colour as linear sRGB: the unit-sum chromaticity of `lambda` is
/// used directly as XYZ, then mapped through the inverse matrix. The result
/// is usually out of gamut.
Rgb<double> wavelength_to_linear_rgb(Wavelength lambda, const CmfTable& table);

/// `#RRGGBB`, case-insensitive. Returns the encoded triple (channel / 255).
/// Throws DomainError on anything else.
Rgb<double> parse_hex(std::string_view text);

/// Lowercase `#rrggbb`; channels quantised as round-half-away-from-zero of
/// 255·c. Throws DomainError outside [0, 1].
std::string to_hex(const Rgb<double>& encoded);

}  // namespace wavepalette
