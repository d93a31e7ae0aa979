#include "wavepalette/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>

#include <CLI11.hpp>

#include "wavepalette/error.hpp"
#include "wavepalette/figure.hpp"
#include "wavepalette/palette.hpp"
#include "wavepalette/serialize.hpp"
#include "wavepalette/service.hpp"

namespace wavepalette {

namespace {

struct EngineOptions {
  std::string cmf;
  CrossingParams crossing;
};

void add_engine_options(CLI::App* cmd, EngineOptions& opts) {
  cmd->add_option("--cmf", opts.cmf, "CMF table CSV (default: bundled asset or $WAVEPALETTE_CMF)");
  cmd->add_option("--domain", opts.crossing.domain_end, "scan domain end, nm")
      ->capture_default_str();
  cmd->add_option("--step", opts.crossing.step, "scan step, nm")->capture_default_str();
  cmd->add_option("--epsilon", opts.crossing.epsilon, "near-zero tolerance, fraction of amplitude")
      ->capture_default_str();
}

std::filesystem::path cmf_path(const EngineOptions& opts) {
  return opts.cmf.empty() ? default_cmf_path() : std::filesystem::path(opts.cmf);
}

PaletteEngine make_engine(const EngineOptions& opts) {
  return PaletteEngine(load_cmf_file(cmf_path(opts)), opts.crossing);
}

std::optional<std::string> given(const CLI::Option* opt, const std::string& value) {
  return opt->count() > 0 ? std::optional<std::string>(value) : std::nullopt;
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct PaletteArgs {
  std::string color, wavelength, levels, count, mode, space, ratios;
  std::string format = "json";
  CLI::Option *o_color{}, *o_wavelength{}, *o_levels{}, *o_count{}, *o_mode{}, *o_space{},
      *o_ratios{};
};

void run_palette(const PaletteArgs& a, const EngineOptions& eo, std::ostream& out) {
  PaletteQuery q;
  q.color = given(a.o_color, a.color);
  q.wavelength = given(a.o_wavelength, a.wavelength);
  q.levels = given(a.o_levels, a.levels);
  q.count = given(a.o_count, a.count);
  q.mode = given(a.o_mode, a.mode);
  q.space = given(a.o_space, a.space);
  q.ratios = given(a.o_ratios, a.ratios);
  const PaletteRequest request = parse_palette_query(q);
  const PaletteEngine engine = make_engine(eo);
  const Json doc = palette_response(engine, request);

  if (a.format == "json") {
    out << dump_json(doc);
    return;
  }
  std::vector<std::string> hexes{doc["base"]["hex"].get<std::string>()};
  for (const auto& e : doc["entries"]) hexes.push_back(e["hex"].get<std::string>());
  if (a.format == "hex") {
    for (const auto& h : hexes) out << h << "\n";
  } else if (a.format == "css") {
    out << ":root {\n";
    for (std::size_t i = 0; i < hexes.size(); ++i)
      out << "  --wave-palette-" << i << ": " << hexes[i] << ";\n";
    out << "}\n";
  } else {
    Palette p;
    p.base.hex = hexes.front();
    for (std::size_t i = 1; i < hexes.size(); ++i) {
      PaletteEntry e;
      e.hex = hexes[i];
      p.entries.push_back(e);
    }
    out << render_swatches_svg(p);
  }
}

struct ConsonanceArgs {
  std::string a, b, paper_eq;
  std::string format = "text";
  CLI::Option *o_a{}, *o_b{}, *o_paper{};
};

void print_consonance(const ConsonanceRequest& r, const std::string& format, std::ostream& out) {
  const Json doc = consonance_response(r);
  if (format == "json") {
    out << dump_json(doc);
    return;
  }
  out << "a: " << r.a.str() << "\nb: " << r.b.str() << "\ncount: " << doc["count"].get<std::int64_t>()
      << "\ndensity: " << fmt(doc["density"].get<double>(), "%.9g") << " per nm\n";
}

void run_consonance(const ConsonanceArgs& a, const EngineOptions& eo, std::ostream& out) {
  eo.crossing.validate();
  if (a.o_paper->count() > 0 && a.paper_eq == "all") {
    const Mixture base = paper_equation(1);
    if (a.format == "json") {
      Json rows = Json::array();
      for (int n = 2; n <= 4; ++n) {
        Json row = consonance_response({base, paper_equation(n), eo.crossing});
        row["pair"] = "1-" + std::to_string(n);
        rows.push_back(row);
      }
      out << dump_json(rows);
      return;
    }
    out << "domain " << eo.crossing.domain_end << " nm, step " << eo.crossing.step
        << " nm, epsilon " << eo.crossing.epsilon << "\n";
    out << "pair     count  density (per nm)\n";
    for (int n = 2; n <= 4; ++n) {
      const auto c = synchronized_zero_count(base, paper_equation(n), eo.crossing);
      char line[96];
      std::snprintf(line, sizeof line, "(1)-(%d)  %5lld  %.9g\n", n, static_cast<long long>(c.count),
                    c.density);
      out << line;
    }
    return;
  }

  ConsonanceQuery q;
  if (a.o_paper->count() > 0) {
    int n = 0;
    try {
      n = std::stoi(a.paper_eq);
    } catch (const std::exception&) {
      throw RequestError("paper-eq", "--paper-eq takes 1-4 or all");
    }
    if (n < 1 || n > 4) throw RequestError("paper-eq", "--paper-eq takes 1-4 or all");
    q.a = a.o_a->count() > 0 ? a.a : paper_equation(1).str();
    q.b = paper_equation(n).str();
  } else {
    q.a = given(a.o_a, a.a);
    q.b = given(a.o_b, a.b);
  }
  const ConsonanceRequest r{parse_consonance_query(q).a, parse_consonance_query(q).b, eo.crossing};
  print_consonance(r, a.format, out);
}

struct FigureArgs {
  int id = 0;
  std::vector<std::string> mixtures;
  double from = 0.0, to = 0.0;
  int samples = 0;
  std::string out_path;
  CLI::Option *o_id{}, *o_from{}, *o_to{};
};

void run_figure(const FigureArgs& a, const EngineOptions& eo, std::ostream& out) {
  LinePlot plot;
  if (a.o_id->count() > 0) {
    plot = standard_figure(a.id, eo.crossing);
  } else if (!a.mixtures.empty()) {
    plot.title = "Custom mixtures";
  } else {
    throw RequestError("figure", "give a figure id (1-5) or at least one --mixture");
  }
  static constexpr const char* kStrokes[] = {"#1f4e9c", "#c0392b", "#e67e22", "#27ae60"};
  for (const auto& spec : a.mixtures) {
    const std::size_t i = plot.series.size();
    plot.series.push_back({Mixture::parse(spec), spec, kStrokes[i % 4]});
  }
  if (a.o_from->count() > 0) plot.x_min = a.from;
  if (a.o_to->count() > 0) plot.x_max = a.to;
  if (a.samples > 0) plot.samples = a.samples;

  const std::string svg = render_line_plot_svg(plot);
  if (a.out_path.empty()) {
    out << svg;
    return;
  }
  std::ofstream file(a.out_path, std::ios::binary);
  if (!file) throw Error("cannot write " + a.out_path);
  file << svg;
}

struct CmfArgs {
  double at = 0.0;
  bool locus = false, primaries = false, dump = false;
  CLI::Option* o_at{};
};

void run_cmf(const CmfArgs& a, const EngineOptions& eo, std::ostream& out) {
  const CmfTable table = load_cmf_file(cmf_path(eo));
  if (a.o_at->count() > 0) {
    const Wavelength lambda(a.at);
    const Eigen::Vector3d bar = cmf_at(table, lambda);
    out << "lambda_nm " << fmt(a.at, "%.4f") << "\nxbar " << fmt(bar[0]) << "\nybar "
        << fmt(bar[1]) << "\nzbar " << fmt(bar[2]) << "\n";
    const Chromaticity c = chromaticity_at(table, lambda);
    out << "x " << fmt(c.x) << "\ny " << fmt(c.y) << "\nz " << fmt(c.z) << "\n";
    const Rgb<double> rgb = wavelength_to_linear_rgb(lambda, table);
    out << "linear_rgb " << fmt(rgb[0]) << " " << fmt(rgb[1]) << " " << fmt(rgb[2]) << "\n";
  } else if (a.locus) {
    const SpectralLocus locus = spectral_locus(table);
    out << "lambda_nm,x,y\n";
    for (const auto& p : locus.points)
      out << p.lambda_nm << "," << fmt(p.xy.x()) << "," << fmt(p.xy.y()) << "\n";
  } else if (a.primaries) {
    const auto nm = primary_wavelengths(spectral_locus(table));
    for (int i = 0; i < 3; ++i) out << kPrimaryNames[i] << " " << fmt(nm[i], "%.3f") << " nm\n";
  } else if (a.dump) {
    out << serialize_cmf(table);
  } else {
    out << "dataset " << table.dataset_id() << "\nrows " << table.size() << "\nrange "
        << table.min_nm() << "-" << table.max_nm() << " nm\n";
  }
}

int error_exit(std::ostream& err, const std::exception& e, int code) {
  err << "wavepalette: " << e.what() << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consonant colour palettes from wavelength ratios", "wavepalette"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  EngineOptions eo;

  PaletteArgs pa;
  auto* palette = app.add_subcommand("palette", "generate a palette");
  pa.o_color = palette->add_option("--color", pa.color, "base colour #RRGGBB");
  pa.o_wavelength = palette->add_option("--wavelength", pa.wavelength, "spectral base, nm");
  pa.o_levels = palette->add_option("--levels", pa.levels, "consonant levels (default 2)");
  pa.o_count = palette->add_option("--count", pa.count, "spectral palette size (default 3)");
  pa.o_mode = palette->add_option("--mode", pa.mode, "paper | derived (default derived)");
  pa.o_space = palette->add_option("--space", pa.space, "linear | encoded (default linear)");
  pa.o_ratios = palette->add_option("--ratios", pa.ratios, "custom ratios, e.g. 3:2,4:3");
  palette->add_option("--format", pa.format, "hex | json | css | svg")
      ->check(CLI::IsMember({"hex", "json", "css", "svg"}))
      ->capture_default_str();
  add_engine_options(palette, eo);

  ConsonanceArgs ca;
  auto* consonance = app.add_subcommand("consonance", "score synchronised rest of two mixtures");
  ca.o_a = consonance->add_option("--a", ca.a, "mixture a@nm,a@nm,...");
  ca.o_b = consonance->add_option("--b", ca.b, "mixture a@nm,a@nm,...");
  ca.o_paper = consonance->add_option("--paper-eq", ca.paper_eq,
                                      "compare worked-example mixture 1 with mixture N (1-4), or 'all'");
  consonance->add_option("--format", ca.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  add_engine_options(consonance, eo);

  FigureArgs fa;
  auto* figure = app.add_subcommand("figure", "write an SVG plot");
  fa.o_id = figure->add_option("id", fa.id, "figure 1-5");
  figure->add_option("--mixture", fa.mixtures, "extra mixture to plot (repeatable)");
  fa.o_from = figure->add_option("--from", fa.from, "x range start");
  fa.o_to = figure->add_option("--to", fa.to, "x range end");
  figure->add_option("--samples", fa.samples, "points per curve");
  figure->add_option("--out", fa.out_path, "output file (default stdout)");
  add_engine_options(figure, eo);

  CmfArgs ma;
  auto* cmf = app.add_subcommand("cmf", "inspect the colour matching functions");
  ma.o_at = cmf->add_option("--at", ma.at, "interpolate at a wavelength, nm");
  cmf->add_flag("--locus", ma.locus, "print the spectral locus");
  cmf->add_flag("--primaries", ma.primaries, "dominant wavelengths of the sRGB primaries");
  cmf->add_flag("--dump", ma.dump, "re-serialise the table");
  add_engine_options(cmf, eo);

  int report_level = 1;
  auto* report = app.add_subcommand("report", "derived vs published matrix divergence (markdown)");
  report->add_option("--level", report_level, "1 or 2")->check(CLI::Range(1, 2));
  add_engine_options(report, eo);

  ServiceConfig sc;
  std::string listen = "127.0.0.1:8080";
  std::string static_dir;
  bool quiet = false;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--listen", listen, "host:port")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "directory served at /");
  serve->add_option("--cors-origin", sc.cors_origin, "Access-Control-Allow-Origin ('' disables)")
      ->capture_default_str();
  serve->add_flag("--quiet", quiet, "no request logs");
  add_engine_options(serve, eo);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (palette->parsed()) {
      run_palette(pa, eo, out);
    } else if (consonance->parsed()) {
      run_consonance(ca, eo, out);
    } else if (figure->parsed()) {
      run_figure(fa, eo, out);
    } else if (cmf->parsed()) {
      run_cmf(ma, eo, out);
    } else if (report->parsed()) {
      out << format_divergence_markdown(divergence_report(make_engine(eo), report_level));
    } else if (serve->parsed()) {
      eo.crossing.validate();
      const auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw RequestError("listen", "--listen expects host:port");
      sc.host = listen.substr(0, colon);
      try {
        sc.port = std::stoi(listen.substr(colon + 1));
      } catch (const std::exception&) {
        throw RequestError("listen", "--listen expects host:port");
      }
      sc.cmf_path = cmf_path(eo);
      if (!static_dir.empty()) sc.static_dir = static_dir;
      sc.log_requests = !quiet;
      return run_service(sc, eo.crossing);
    }
  } catch (const RequestError& e) {
    return error_exit(err, e, 2);
  } catch (const DomainError& e) {
    return error_exit(err, e, 2);
  } catch (const UnsupportedLevelError& e) {
    return error_exit(err, e, 2);
  } catch (const LadderExhaustedError& e) {
    return error_exit(err, e, 2);
  } catch (const ParseError& e) {
    return error_exit(err, e, 2);
  } catch (const ValidationError& e) {
    return error_exit(err, e, 2);
  } catch (const std::exception& e) {
    return error_exit(err, e, 1);
  }
  return 0;
}

}  // namespace wavepalette
