#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wavepalette/palette.hpp"

using namespace wavepalette;

namespace {

const PaletteEngine& engine() {
  static const PaletteEngine e(wptest::table());
  return e;
}

double max_abs(const Eigen::Vector3d& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("mode and space names") {
  CHECK(parse_mode("paper") == MatrixMode::Paper);
  CHECK(parse_space("encoded") == WorkingSpace::Encoded);
  CHECK(to_string(MatrixMode::Derived) == "derived");
  CHECK(to_string(WorkingSpace::Linear) == "linear");
  CHECK_THROWS_AS(parse_mode("fancy"), DomainError);
  CHECK_THROWS_AS(parse_space("log"), DomainError);
}

TEST_CASE("standard ladder") {
  const RatioLadder ladder = RatioLadder::standard();
  const auto& r = ladder.ratios();
  REQUIRE(r.size() > 10);
  const std::vector<Ratio> head{{2, 1}, {3, 2}, {5, 2}, {4, 3}, {5, 3}, {5, 4}, {7, 3}};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(r[i] == head[i]);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const auto pq0 = r[i - 1].p() * r[i - 1].q();
    const auto pq1 = r[i].p() * r[i].q();
    CHECK((pq0 < pq1 || (pq0 == pq1 && r[i - 1].p() < r[i].p())));
  }
  CHECK_THROWS_AS(RatioLadder({Ratio(3, 2), Ratio(2, 1)}), ValidationError);
  CHECK_THROWS_AS(RatioLadder({Ratio(3, 2), Ratio(3, 2)}), ValidationError);
}

TEST_CASE("spectral palette walks the ladder") {
  const auto ladder = RatioLadder::standard();
  CHECK(spectral_palette(Wavelength(450), 3, ladder).wavelengths_nm == std::vector<double>{450, 675, 600});
  CHECK(spectral_palette(Wavelength(520), 1, ladder).wavelengths_nm == std::vector<double>{520});

  // Oracle: first ratio in ladder order with a visible candidate.
  const auto sp = spectral_palette(Wavelength(549.1), 2, ladder);
  REQUIRE(sp.wavelengths_nm.size() == 2);
  double expect = 0.0;
  for (const Ratio& r : ladder.ratios()) {
    const double hi = 549.1 * r.value();
    const double lo = 549.1 / r.value();
    if (hi <= kVisibleMaxNm) { expect = hi; break; }
    if (lo >= kVisibleMinNm) { expect = lo; break; }
  }
  CHECK(sp.wavelengths_nm[1] == doctest::Approx(expect));
  CHECK(sp.ratios[1] == Ratio(4, 3));

  const auto tiny = spectral_palette(Wavelength(450), 50, RatioLadder({Ratio(3, 2), Ratio(4, 3)}));
  CHECK(tiny.exhausted);
  CHECK(tiny.wavelengths_nm.size() == 3);
}

TEST_CASE("published matrices") {
  const TransformMatrix m1 = paper_matrix(1);
  CHECK(m1.m(0, 2) == 1.361850);
  CHECK(m1.m(1, 0) == -0.387623);
  CHECK(m1.mode == MatrixMode::Paper);
  const TransformMatrix m2 = paper_matrix(2);
  CHECK(m2.m(1, 2) == -0.32766);
  CHECK(m2.m(0, 0) == 0.153969);
  CHECK_THROWS_AS(paper_matrix(3), UnsupportedLevelError);
  CHECK_THROWS_AS(paper_matrix(0), UnsupportedLevelError);
}

TEST_CASE("consonant wavelengths from the published primaries") {
  const std::array<double, 3> p{611.4, 549.1, 464.2};
  const auto ladder = RatioLadder::standard();
  const ConsonantSet l1 = derived_consonant_wavelengths(p, 1, ladder);
  CHECK(std::abs(l1.choices[0].wavelength_nm - 407.6) <= 0.1);
  CHECK(std::abs(l1.choices[2].wavelength_nm - 696.3) <= 0.1);
  REQUIRE(l1.choices[1].candidates.size() == 2);
  CHECK(std::abs(l1.choices[1].candidates[0] - 411.825) <= 0.1);
  CHECK(std::abs(l1.choices[1].candidates[1] - 732.133) <= 0.1);
  CHECK(l1.choices[1].scores.size() == 2);
  CHECK(l1.choices[1].ratio == Ratio(4, 3));

  const ConsonantSet l2 = derived_consonant_wavelengths(p, 2, ladder);
  CHECK(std::abs(l2.choices[0].wavelength_nm - 458.55) <= 0.1);
  CHECK(std::abs(l2.choices[2].wavelength_nm - 618.933) <= 0.1);

  const ConsonantSet l3 = derived_consonant_wavelengths(p, 3, ladder);
  for (const auto& c : l3.choices) CHECK((c.ratio.p() == 5 || c.ratio.q() == 5));

  CHECK_THROWS_AS(derived_consonant_wavelengths(p, 3, RatioLadder({Ratio(3, 2), Ratio(4, 3)})),
                  LadderExhaustedError);
}

TEST_CASE("derived matrix") {
  const TransformMatrix m = engine().derived_matrix(1);
  CHECK(m.mode == MatrixMode::Derived);
  CHECK((m.m * Eigen::Vector3d::Zero()).isZero());
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector3d col =
        wavelength_to_linear_rgb(Wavelength(m.source_wavelengths[j]), engine().table());
    CHECK(max_abs(m.m.col(j) - col) < 1e-12);
  }
}

TEST_CASE("divergence report") {
  const DivergenceReport r = divergence_report(engine(), 1);
  CHECK((r.difference - (r.derived.m - r.paper.m)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(r.paper_columns_xyz(1, 2) < 0.0);
  CHECK(r.paper_columns_xyz(1, 2) == doctest::Approx(0.212673 * 1.361850 + 0.715152 * -0.496422 +
                                                     0.072175 * -0.140190));
  const std::string md = format_divergence_markdown(r);
  CHECK(md.find("+1.361850") != std::string::npos);
  CHECK(md.find("Back-substitution") != std::string::npos);
}

TEST_CASE("consonant colour") {
  const TransformMatrix m1 = paper_matrix(1);
  const PaletteEntry blue = consonant_color(Eigen::Vector3d(0, 0, 1), m1, WorkingSpace::Encoded);
  CHECK(blue.hex == "#ff0000");
  CHECK(blue.clamp.scaled);
  CHECK(blue.clamp.zeroed);

  const PaletteEntry white = consonant_color(Eigen::Vector3d(1, 1, 1), m1, WorkingSpace::Encoded);
  const Eigen::Vector3d rows = m1.m.rowwise().sum();
  CHECK(rows.x() == doctest::Approx(1.850346));
  CHECK(rows.y() == doctest::Approx(-0.909908));
  CHECK(rows.z() == doctest::Approx(0.793682));
  CHECK(max_abs(white.color - Eigen::Vector3d(1, 0, 0.793682 / 1.850346)) < 1e-12);
  CHECK(white.color.z() == doctest::Approx(0.428936).epsilon(1e-6));

  for (auto space : {WorkingSpace::Linear, WorkingSpace::Encoded}) {
    for (auto mode : {MatrixMode::Paper, MatrixMode::Derived})
      CHECK(consonant_color(Eigen::Vector3d::Zero(), engine().matrix(mode, 1), space).hex == "#000000");
  }
}

TEST_CASE("palette for a colour") {
  const Eigen::Vector3d c = parse_hex("#3366cc");
  const Palette one = engine().palette_for_color(c, 1, MatrixMode::Derived, WorkingSpace::Linear);
  CHECK(one.entries.size() == 1);
  CHECK(one.base.hex == "#3366cc");
  CHECK_THROWS_AS(engine().palette_for_color(c, 3, MatrixMode::Paper, WorkingSpace::Linear),
                  UnsupportedLevelError);
  const Palette three = engine().palette_for_color(c, 3, MatrixMode::Derived, WorkingSpace::Linear);
  REQUIRE(three.entries.size() == 3);
  CHECK(three.entries[2].level == 3);
  CHECK(three.entries[2].wavelengths_nm.size() == 3);

  const Palette black = engine().palette_for_color(Eigen::Vector3d::Zero(), 2, MatrixMode::Derived,
                                                   WorkingSpace::Linear);
  for (const auto& e : black.entries) CHECK(e.hex == "#000000");
}

TEST_CASE("custom ratios") {
  const Eigen::Vector3d c = parse_hex("#0000ff");
  SUBCASE("a ratio some primary cannot use is skipped") {
    const std::vector<Ratio> r{Ratio(3, 2)};
    const Palette p = engine().custom_ratio_palette(c, r, WorkingSpace::Linear);
    CHECK(p.entries.empty());
    REQUIRE(p.skipped.size() == 1);
    CHECK(p.skipped[0].find("green") != std::string::npos);
  }
  SUBCASE("matches the ladder when every primary took that ratio") {
    const PaletteEngine e(wptest::table(), {}, RatioLadder({Ratio(4, 3), Ratio(5, 4)}));
    for (const auto& x : e.consonants(1).choices) REQUIRE(x.ratio == Ratio(4, 3));
    const std::vector<Ratio> r{Ratio(4, 3)};
    const Palette custom = e.custom_ratio_palette(c, r, WorkingSpace::Linear);
    const Palette ladder = e.palette_for_color(c, 1, MatrixMode::Derived, WorkingSpace::Linear);
    REQUIRE(custom.entries.size() == 1);
    CHECK(custom.entries[0].hex == ladder.entries[0].hex);
    CHECK(custom.entries[0].wavelengths_nm == ladder.entries[0].wavelengths_nm);
  }
  SUBCASE("unison maps each primary to its own spectral colour") {
    ConsonantSet set;
    std::string missing;
    REQUIRE(single_ratio_consonants(engine().primaries_nm(), Ratio(), {}, set, missing));
    const TransformMatrix m = matrix_from_consonants(engine().table(), set, 1);
    for (int j = 0; j < 3; ++j) {
      CHECK(m.source_wavelengths[j] == engine().primaries_nm()[j]);
      CHECK(max_abs(m.m.col(j) -
                    wavelength_to_linear_rgb(Wavelength(engine().primaries_nm()[j]), engine().table())) <
            1e-12);
    }
    const std::vector<Ratio> r{Ratio()};
    const Palette p = engine().custom_ratio_palette(c, r, WorkingSpace::Linear);
    REQUIRE(p.entries.size() == 1);
    CHECK(p.entries[0].hex == consonant_color(c, m, WorkingSpace::Linear).hex);
  }
  SUBCASE("deterministic on pure blue") {
    const std::vector<Ratio> r{Ratio(3, 2), Ratio(4, 3), Ratio(5, 4)};
    const Palette a = engine().custom_ratio_palette(c, r, WorkingSpace::Linear);
    const Palette b = engine().custom_ratio_palette(c, r, WorkingSpace::Linear);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].hex == b.entries[i].hex);
    CHECK(a.entries.size() + a.skipped.size() == 3);
    REQUIRE(a.entries.size() == 2);
    CHECK(a.entries[0].hex == "#ff0000");
    CHECK(a.entries[1].hex == "#f6ac00");
  }
}

TEST_CASE("spectral palette as colours") {
  bool exhausted = true;
  const Palette p = engine().spectral(Wavelength(450), 3, &exhausted);
  CHECK_FALSE(exhausted);
  REQUIRE(p.entries.size() == 2);
  CHECK(p.base.wavelengths_nm == std::vector<double>{450});
  CHECK(p.entries[0].wavelengths_nm == std::vector<double>{675});
  CHECK(p.entries[1].wavelengths_nm == std::vector<double>{600});
}

TEST_CASE("engine primaries") {
  const auto& p = engine().primaries_nm();
  for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - kPaperPrimaryNm[i]) <= 1.5);
}
