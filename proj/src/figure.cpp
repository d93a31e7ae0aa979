#include "wavepalette/figure.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "wavepalette/error.hpp"

namespace wavepalette {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 360.0;
constexpr double kMargin = 40.0;

constexpr const char* kStrokes[] = {"#1f4e9c", "#c0392b", "#e67e22", "#27ae60"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

PlotSeries sine(double lambda, const char* stroke) {
  return {Mixture({{1.0, lambda}}), "sin(2πx/" + fmt(lambda) + ")", stroke};
}

}  // namespace

LinePlot standard_figure(int id, const CrossingParams& params) {
  LinePlot plot;
  switch (id) {
    case 1:
    case 2: {
      plot.title = id == 1 ? "Two waves a fifth apart (3:2), against time"
                           : "Two waves a fifth apart (3:2), against distance";
      plot.x_label = id == 1 ? "t" : "x, nm";
      plot.x_max = 1500.0;
      plot.series = {sine(600.0, kStrokes[0]), sine(400.0, kStrokes[1])};
      CrossingParams p = params;
      p.domain_end = plot.x_max;
      for (double x : synchronized_zero_events(plot.series[0].mixture, plot.series[1].mixture, p)) {
        if (x > 0.0) {
          plot.markers.push_back(x);
          break;
        }
      }
      break;
    }
    case 3: {
      plot.title = "Spectral palette from 450 nm";
      plot.x_max = 2700.0;
      const auto sp = spectral_palette(Wavelength(450.0), 3, RatioLadder::standard());
      for (std::size_t i = 0; i < sp.wavelengths_nm.size(); ++i)
        plot.series.push_back(sine(sp.wavelengths_nm[i], kStrokes[i % 4]));
      break;
    }
    case 4: {
      plot.title = "Primaries mixture and its consonant mixture: synchronised rest points";
      plot.x_max = params.domain_end;
      plot.samples = 4000;
      plot.series = {{paper_equation(1), "primaries", kStrokes[0]},
                     {paper_equation(3), "consonant", kStrokes[1]}};
      CrossingParams p = params;
      p.domain_end = plot.x_max;
      plot.markers = synchronized_zero_events(plot.series[0].mixture, plot.series[1].mixture, p);
      break;
    }
    case 5:
      plot.title = "Equal mixture of the sRGB primaries";
      plot.x_max = 2000.0;
      plot.series = {{paper_equation(1), "primaries", kStrokes[0]}};
      break;
    default:
      throw DomainError("unknown figure " + std::to_string(id) + "; expected 1-5");
  }
  return plot;
}

std::string render_line_plot_svg(const LinePlot& plot) {
  if (plot.series.empty()) throw DomainError("plot needs at least one series");
  if (!(plot.x_max > plot.x_min) || plot.samples < 2) throw DomainError("invalid plot range");

  double y_extent = 0.0;
  for (const auto& s : plot.series) y_extent = std::max(y_extent, s.mixture.total_amplitude());

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - plot.x_min) / (plot.x_max - plot.x_min) * plot_w; };
  auto sy = [&](double y) { return kMargin + (1.0 - (y + y_extent) / (2 * y_extent)) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(plot.title) << "</text>\n";
  os << "<line class=\"axis\" x1=\"" << fmt(sx(plot.x_min)) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\""
     << fmt(sx(plot.x_max)) << "\" y2=\"" << fmt(sy(0)) << "\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << fmt(kWidth - kMargin) << "\" y=\"" << fmt(kHeight - 12)
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << escape(plot.x_label)
     << "</text>\n";

  for (double m : plot.markers) {
    if (m < plot.x_min || m > plot.x_max) continue;
    os << "<line class=\"marker\" x1=\"" << fmt(sx(m)) << "\" y1=\"" << fmt(kMargin) << "\" x2=\""
       << fmt(sx(m)) << "\" y2=\"" << fmt(kHeight - kMargin)
       << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const auto& s : plot.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.stroke << "\" stroke-width=\"1.5\" points=\"";
    for (int i = 0; i < plot.samples; ++i) {
      const double x = plot.x_min + (plot.x_max - plot.x_min) * i / (plot.samples - 1);
      os << (i ? " " : "") << fmt(sx(x)) << "," << fmt(sy(s.mixture(x)));
    }
    os << "\"><title>" << escape(s.label) << "</title></polyline>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_swatches_svg(const Palette& palette) {
  std::vector<const PaletteEntry*> all{&palette.base};
  for (const auto& e : palette.entries) all.push_back(&e);

  constexpr double kSwatch = 120.0;
  constexpr double kLabel = 28.0;
  const double width = kSwatch * static_cast<double>(all.size());
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << kSwatch + kLabel << "\" viewBox=\"0 0 " << width << " " << kSwatch + kLabel << "\">\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double x = kSwatch * static_cast<double>(i);
    os << "<rect x=\"" << x << "\" y=\"0\" width=\"" << kSwatch << "\" height=\"" << kSwatch
       << "\" fill=\"" << all[i]->hex << "\"/>\n";
    os << "<text x=\"" << x + kSwatch / 2 << "\" y=\"" << kSwatch + 19
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" << all[i]->hex
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wavepalette
