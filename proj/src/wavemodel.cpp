#include "wavepalette/wavemodel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wavepalette/error.hpp"

namespace wavepalette {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

Ratio::Ratio(std::int64_t p, std::int64_t q) {
  if (p < 1 || q < 1)
    throw DomainError("ratio terms must be positive integers, got " + std::to_string(p) + "/" +
                      std::to_string(q));
  const std::int64_t g = std::gcd(p, q);
  p_ = std::max(p, q) / g;
  q_ = std::min(p, q) / g;
}

std::string Ratio::str() const { return std::to_string(p_) + ":" + std::to_string(q_); }

Ratio Ratio::parse(std::string_view text) {
  text = trim(text);
  const auto sep = text.find_first_of(":/");
  std::int64_t p = 0;
  std::int64_t q = 0;
  if (sep == std::string_view::npos || !parse_number(text.substr(0, sep), p) ||
      !parse_number(text.substr(sep + 1), q))
    throw DomainError("ratio must be written p:q, got '" + std::string(text) + "'");
  return Ratio(p, q);
}

double ratio_consonance_score(const Ratio& r) noexcept {
  return 1.0 / (static_cast<double>(r.p()) * static_cast<double>(r.q()));
}

Mixture::Mixture(std::vector<WaveTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.amplitude) || t.amplitude < 0.0)
      throw DomainError("mixture amplitudes must be finite and nonnegative");
    if (!std::isfinite(t.lambda_nm) || t.lambda_nm <= 0.0)
      throw DomainError("mixture wavelengths must be finite and positive");
    total_amplitude_ += t.amplitude;
  }
  if (total_amplitude_ <= 0.0)
    throw DomainError("mixture needs at least one term with positive amplitude");
}

double Mixture::operator()(double x) const noexcept {
  double y = 0.0;
  for (const auto& t : terms_) y += t.amplitude * std::sin(2.0 * std::numbers::pi * x / t.lambda_nm);
  return y;
}

Mixture Mixture::parse(std::string_view spec) {
  std::vector<WaveTerm> terms;
  std::string_view rest = trim(spec);
  if (rest.empty()) throw DomainError("empty mixture");
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto at = item.find('@');
    WaveTerm t{};
    if (at == std::string_view::npos || !parse_number(item.substr(0, at), t.amplitude) ||
        !parse_number(item.substr(at + 1), t.lambda_nm))
      throw DomainError("mixture term must be amplitude@wavelength, got '" + std::string(item) + "'");
    terms.push_back(t);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return Mixture(std::move(terms));
}

std::string Mixture::str() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += ',';
    out += shortest(t.amplitude) + "@" + shortest(t.lambda_nm);
  }
  return out;
}

Mixture paper_equation(int number) {
  static const std::array<std::array<double, 3>, 4> kEquations{{
      {611.4, 549.1, 464.2},
      {407.6, 411.8, 696.3},
      {407.6, 732.1, 696.3},
      {407.6, 549.1, 696.3},
  }};
  if (number < 1 || number > 4) throw DomainError("equation number must be 1..4");
  std::vector<WaveTerm> terms;
  for (double lambda : kEquations[number - 1]) terms.push_back({1.0, lambda});
  return Mixture(std::move(terms));
}

void CrossingParams::validate() const {
  if (!std::isfinite(domain_end) || domain_end <= 0.0)
    throw DomainError("domain_end must be positive");
  if (!std::isfinite(step) || step <= 0.0 || step > domain_end)
    throw DomainError("step must satisfy 0 < step <= domain_end");
  if (!std::isfinite(epsilon) || epsilon <= 0.0) throw DomainError("epsilon must be positive");
}

std::vector<double> synchronized_zero_events(const Mixture& f, const Mixture& g,
                                             const CrossingParams& params) {
  params.validate();
  const auto inside = static_cast<std::int64_t>(std::ceil(params.domain_end / params.step - 1e-9));
  const double af = f.total_amplitude();
  const double ag = g.total_amplitude();

  std::vector<double> events;
  bool in_run = false;
  std::int64_t best_index = 0;
  double best_level = 0.0;

  // Past the domain end only an already-open run is followed, and at most
  // for another `inside` samples.
  for (std::int64_t i = 0; i < 2 * inside; ++i) {
    if (i >= inside && !in_run) break;
    const double x = static_cast<double>(i) * params.step;
    const double level = std::max(std::abs(f(x)) / af, std::abs(g(x)) / ag);
    if (level <= params.epsilon) {
      if (!in_run || level < best_level) {
        best_index = i;
        best_level = level;
      }
      in_run = true;
    } else if (in_run) {
      if (best_index < inside) events.push_back(static_cast<double>(best_index) * params.step);
      in_run = false;
    }
  }
  if (in_run && best_index < inside) events.push_back(static_cast<double>(best_index) * params.step);
  return events;
}

CrossingCount synchronized_zero_count(const Mixture& f, const Mixture& g,
                                      const CrossingParams& params) {
  const auto events = synchronized_zero_events(f, g, params);
  const auto count = static_cast<std::int64_t>(events.size());
  return {count, static_cast<double>(count) / params.domain_end};
}

double mixture_consonance(const Mixture& f, const Mixture& g, const CrossingParams& params) {
  return synchronized_zero_count(f, g, params).density;
}

std::vector<double> consonant_wavelengths(Wavelength lambda, const Ratio& r) {
  const double nm = lambda.nm();
  const double p = static_cast<double>(r.p());
  const double q = static_cast<double>(r.q());
  std::vector<double> out;
  for (double candidate : {nm * q / p, nm * p / q}) {
    if (candidate < kVisibleMinNm || candidate > kVisibleMaxNm) continue;
    if (!out.empty() && std::abs(out.back() - candidate) < 1e-9) continue;
    out.push_back(candidate);
  }
  return out;
}

}  // namespace wavepalette
