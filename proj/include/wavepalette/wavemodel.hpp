#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wavepalette/cmf.hpp"

namespace wavepalette {

/// Interval between two waves as a reduced fraction p/q with p ≥ q ≥ 1.
/// A ratio and its reciprocal name the same interval, so construction
/// normalises orientation.
class Ratio {
 public:
  Ratio() = default;  // unison

  /// Throws DomainError unless p, q ≥ 1.
  Ratio(std::int64_t p, std::int64_t q);

  std::int64_t p() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  double value() const noexcept { return static_cast<double>(p_) / static_cast<double>(q_); }

  /// `p:q`
  std::string str() const;

  /// Accepts `p:q` or `p/q`.
  static Ratio parse(std::string_view text);

  bool operator==(const Ratio&) const = default;

 private:
  std::int64_t p_ = 1;
  std::int64_t q_ = 1;
};

inline Ratio ratio_normalize(std::int64_t p, std::int64_t q) { return Ratio(p, q); }

/// 1/(p·q): simpler intervals score higher.
double ratio_consonance_score(const Ratio& r) noexcept;

struct WaveTerm {
  double amplitude;
  double lambda_nm;
};

/// Superposition Σ aᵢ·sin(2π·x/λᵢ) of sinusoids in a common length unit (nm).
class Mixture {
 public:
  /// Throws DomainError on negative amplitudes, non-positive wavelengths, or
  /// when no term has positive amplitude.
  explicit Mixture(std::vector<WaveTerm> terms);

  const std::vector<WaveTerm>& terms() const noexcept { return terms_; }
  double total_amplitude() const noexcept { return total_amplitude_; }

  double operator()(double x) const noexcept;

  /// `a@λ,a@λ,...`; throws DomainError when malformed or empty.
  static Mixture parse(std::string_view spec);
  std::string str() const;

 private:
  std::vector<WaveTerm> terms_;
  double total_amplitude_ = 0.0;
};

inline double mixture_eval(const Mixture& m, double x) noexcept { return m(x); }

/// Unit-amplitude mixtures of the worked sRGB example, numbered 1 to 4:
/// the primaries and three consonant alternatives. Wavelengths in nm.
Mixture paper_equation(int number);

struct CrossingParams {
  double domain_end = 10000.0;  // nm
  double step = 0.1;            // nm
  double epsilon = 0.01;        // fraction of a mixture's total amplitude

  /// Throws DomainError unless domain_end > 0, 0 < step ≤ domain_end, epsilon > 0.
  void validate() const;
};

struct CrossingCount {
  std::int64_t count = 0;
  double density = 0.0;  // events per nm
};

/// Positions (nm) of synchronised near-zero events of f and g in
/// [0, domain_end). A grid sample qualifies when |f| ≤ ε·A_f and |g| ≤ ε·A_g;
/// runs of consecutive qualifying samples form one event, located at the
/// sample of smallest normalised amplitude. A run still open at domain_end
/// is followed past it so that an event centred on domain_end is excluded.
std::vector<double> synchronized_zero_events(const Mixture& f, const Mixture& g,
                                             const CrossingParams& params);

CrossingCount synchronized_zero_count(const Mixture& f, const Mixture& g,
                                      const CrossingParams& params);

/// Density of synchronised rest points; larger is more consonant.
double mixture_consonance(const Mixture& f, const Mixture& g, const CrossingParams& params);

/// {λ·p/q, λ·q/p} restricted to the visible band, ascending, duplicates
/// (unison) collapsed. May be empty.
std::vector<double> consonant_wavelengths(Wavelength lambda, const Ratio& r);

}  // namespace wavepalette
