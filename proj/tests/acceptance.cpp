// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>


#include "support.hpp"
#include "wavepalette/colorspace.hpp"
#include "wavepalette/palette.hpp"
#include "wavepalette/service.hpp"

#include <httplib.h>

using namespace wavepalette;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  char t[32];
  std::snprintf(t, sizeof t, "%.2fs", secs);
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << t << "): " << o.detail << std::endl;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Mixture sine(double lambda) { return Mixture({{1.0, lambda}}); }

Outcome srgb_matrix() {
  const char* printed[3][3] = {{"0.412456", "0.212673", "0.019334"},
                               {"0.357576", "0.715152", "0.119192"},
                               {"0.180437", "0.072175", "0.950304"}};
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector3d col = linear_to_xyz(Eigen::Vector3d::Unit(j));
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(col[i] - std::strtod(printed[j][i], nullptr)));
  }
  return {worst <= 1e-6, "max |deviation| " + fmt("%.3g", worst)};
}

Outcome primary_wavelengths_check() {
  const auto t0 = Clock::now();
  const auto nm = primary_wavelengths(spectral_locus(wptest::table()));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool ok = secs < 1.0;
  std::string d;
  for (int i = 0; i < 3; ++i) {
    ok = ok && std::abs(nm[i] - kPaperPrimaryNm[i]) <= 1.5;
    d += std::string(kPrimaryNames[i]) + " " + fmt("%.3f", nm[i]) + " (want " +
         fmt("%.1f", kPaperPrimaryNm[i]) + " +/- 1.5) ";
  }
  return {ok, d};
}

Outcome consonant_arithmetic() {
  const auto ladder = RatioLadder::standard();
  const ConsonantSet l1 = derived_consonant_wavelengths(kPaperPrimaryNm, 1, ladder);
  const ConsonantSet l2 = derived_consonant_wavelengths(kPaperPrimaryNm, 2, ladder);
  const auto& green = l1.choices[1].candidates;
  const std::vector<std::pair<double, double>> got_want{
      {l1.choices[0].wavelength_nm, 407.6},
      {green.size() > 0 ? green[0] : 0.0, 411.825},
      {green.size() > 1 ? green[1] : 0.0, 732.133},
      {l1.choices[2].wavelength_nm, 696.3},
      {l2.choices[0].wavelength_nm, 458.55},
      {l2.choices[2].wavelength_nm, 618.933}};
  bool ok = green.size() == 2;
  std::string d;
  for (const auto& [got, want] : got_want) {
    ok = ok && std::abs(got - want) <= 0.1;
    d += fmt("%.3f", got) + " ";
  }
  return {ok, d + "(each within 0.1 nm)"};
}

Outcome paper_matrices() {
  const char* m1[3][3] = {{"0.412554", "0.075942", "1.361850"},
                          {"-0.387623", "-0.025863", "-0.496422"},
                          {"0.942622", "-0.008750", "-0.140190"}};
  const char* m2[3][3] = {{"0.153969", "0.075942", "1.291906"},
                          {"-0.265282", "-0.025863", "-0.32766"},
                          {"0.941624", "-0.008750", "-0.186152"}};
  const Eigen::Matrix3d a = paper_matrix(1).m, b = paper_matrix(2).m;
  int mismatches = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      mismatches += a(i, j) != std::strtod(m1[i][j], nullptr);
      mismatches += b(i, j) != std::strtod(m2[i][j], nullptr);
    }
  bool capped = false;
  try {
    paper_matrix(3);
  } catch (const UnsupportedLevelError&) {
    capped = true;
  }
  return {mismatches == 0 && capped,
          std::to_string(18 - mismatches) + "/18 coefficients equal as printed; level 3 " +
              (capped ? "rejected" : "accepted")};
}

Outcome clamp_rule() {
  const Eigen::Vector3d out = clamp_paper(Eigen::Vector3d(1.361850, -0.496422, -0.140190));
  const bool exact = (out - Eigen::Vector3d(1, 0, 0)).cwiseAbs().maxCoeff() < 1e-15;
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int broken = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d c(u(rng), u(rng), u(rng));
    const Eigen::Vector3d once = clamp_paper(c);
    broken += clamp_paper(once) != once;
  }
  return {exact && broken == 0, "(1.361850, -0.496422, -0.140190) -> (" + fmt("%g", out.x()) + ", " +
                                    fmt("%g", out.y()) + ", " + fmt("%g", out.z()) +
                                    "); idempotence violations " + std::to_string(broken) + "/1000"};
}

Outcome spectral_example() {
  const auto sp = spectral_palette(Wavelength(450.0), 3, RatioLadder::standard());
  std::string d;
  for (double nm : sp.wavelengths_nm) d += fmt("%g ", nm);
  return {sp.wavelengths_nm == std::vector<double>{450, 675, 600}, "[" + d + "] want [450 675 600]"};
}

Outcome density_law() {
  constexpr double u = 100.0;
  const CrossingParams params{2000.0 * u, u / 1000.0, 0.01};
  std::string d;
  bool ok = true;
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}, {4, 3}, {5, 4}, {5, 3}}) {
    const double got = mixture_consonance(sine(p * u), sine(q * u), params);
    const double err = std::abs(got - 2.0 / (p * q * u)) * (p * q * u) / 2.0;
    ok = ok && err < 0.02;
    d += std::to_string(p) + ":" + std::to_string(q) + " " + fmt("%.2f%%", 100 * err) + " ";
  }
  struct Row {
    int pq;
    double density;
  };
  std::vector<Row> rows;
  for (int p = 1; p <= 40; ++p)
    for (int q = 1; q <= p && p * q <= 40; ++q)
      if (std::gcd(p, q) == 1) rows.push_back({p * q, mixture_consonance(sine(p * u), sine(q * u), params)});
  int inversions = 0;
  for (const auto& a : rows)
    for (const auto& b : rows) {
      if (a.pq < b.pq && !(a.density > b.density)) ++inversions;
      if (a.pq == b.pq && std::abs(a.density - b.density) > 0.02 * a.density) ++inversions;
    }
  ok = ok && inversions == 0;
  return {ok, d + "; ordering over " + std::to_string(rows.size()) + " ratios with pq <= 40, " +
                  std::to_string(inversions) + " inversions"};
}

Outcome equation_scan() {
  const CrossingParams params{};
  std::string d;
  bool ok = true;
  for (int n = 2; n <= 4; ++n) {
    const auto a = synchronized_zero_count(paper_equation(1), paper_equation(n), params);
    const auto b = synchronized_zero_count(paper_equation(1), paper_equation(n), params);
    ok = ok && a.count > 0 && a.density > 0.0 && a.count == b.count && a.density == b.density;
    d += "(1)-(" + std::to_string(n) + ") count " + std::to_string(a.count) + " density " +
         fmt("%.3g", a.density) + "; ";
  }
  return {ok, d + "repeat runs identical"};
}

Outcome divergence() {
  const PaletteEngine engine(wptest::table());
  const DivergenceReport r = divergence_report(engine, 1);
  const std::string md = format_divergence_markdown(r);
  const bool table = md.find("Difference (derived - published)") != std::string::npos;
  const double y = r.paper_columns_xyz(1, 2);
  const double want = 0.212673 * 1.361850 + 0.715152 * -0.496422 + 0.072175 * -0.140190;
  return {table && y < 0.0 && std::abs(y - want) < 1e-12,
          "difference table emitted, max |derived - published| " +
              fmt("%.3f", r.difference.cwiseAbs().maxCoeff()) + "; blue column Y " + fmt("%.6f", y)};
}

std::string url_escape(const std::string& s) {
  std::string out;
  for (char c : s) out += c == '#' ? std::string("%23") : std::string(1, c);
  return out;
}

Outcome cross_interface() {
  ServiceConfig cfg;
  cfg.port = 0;
  cfg.log_requests = false;
  Service service(cfg);
  service.set_engine(std::make_shared<const PaletteEngine>(wptest::table()));
  const int port = service.bind();
  if (port < 0) return {false, "cannot bind a local port"};
  std::thread server([&] { service.listen(); });
  service.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  std::mt19937 rng(20261016);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const std::vector<std::string> ratio_sets{"3:2", "4:3,5:4", "1:1", "5:3,2:1,7:4"};
  int identical = 0;
  std::string first_diff;
  for (int i = 0; i < 20; ++i) {
    std::vector<std::pair<std::string, std::string>> args;
    if (pick(4) == 0) {
      args.push_back({"wavelength", std::to_string(380 + pick(401))});
      args.push_back({"count", std::to_string(1 + pick(5))});
    } else {
      char hex[8];
      std::snprintf(hex, sizeof hex, "#%02x%02x%02x", pick(256), pick(256), pick(256));
      args.push_back({"color", hex});
      const bool paper = pick(3) == 0;
      if (paper) args.push_back({"mode", "paper"});
      if (pick(2)) args.push_back({"space", pick(2) ? "encoded" : "linear"});
      if (!paper && pick(3) == 0)
        args.push_back({"ratios", ratio_sets[pick(static_cast<int>(ratio_sets.size()))]});
      else
        args.push_back({"levels", std::to_string(1 + pick(paper ? 2 : 3))});
    }
    std::string cmd = "palette --format json --cmf '" + std::string(WAVEPALETTE_TEST_CMF) + "'";
    std::string query;
    for (const auto& [k, v] : args) {
      cmd += " --" + k + " '" + v + "'";
      query += (query.empty() ? "?" : "&") + k + "=" + url_escape(v);
    }
    std::string cli_out;
    const int code = wptest::run(wptest::cli(cmd), cli_out);
    const auto res = client.Get("/api/v1/palette" + query);
    if (code == 0 && res && res->status == 200 && res->body == cli_out)
      ++identical;
    else if (first_diff.empty())
      first_diff = " first mismatch: " + query;
  }
  service.stop();
  server.join();
  return {identical == 20, std::to_string(identical) + "/20 byte-identical" + first_diff};
}

}  // namespace

int main() {
  std::cout << "wavepalette acceptance, CMF " << WAVEPALETTE_TEST_CMF << "\n";
  criterion("srgb-to-xyz-matrix", srgb_matrix);
  criterion("primary-wavelengths", primary_wavelengths_check);
  criterion("consonant-wavelength-arithmetic", consonant_arithmetic);
  criterion("published-matrices", paper_matrices);
  criterion("clamp-rule", clamp_rule);
  criterion("spectral-palette-450", spectral_example);
  criterion("consonance-density-law", density_law);
  criterion("mixture-scan", equation_scan);
  criterion("divergence-report", divergence);
  criterion("cli-service-consistency", cross_interface);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
