#pragma once

#include <string>
#include <vector>

#include "wavepalette/palette.hpp"
#include "wavepalette/wavemodel.hpp"

namespace wavepalette {

struct PlotSeries {
  Mixture mixture;
  std::string label;
  std::string stroke;  // CSS colour
};

struct LinePlot {
  std::string title;
  std::string x_label = "x, nm";
  double x_min = 0.0;
  double x_max = 1800.0;
  int samples = 1200;
  std::vector<PlotSeries> series;
  std::vector<double> markers;  // vertical lines
};

/// Plots for the illustrations of the method:
///   1, 2  sine pair a fifth apart (λ 600 and 400) with the first common zero
///   3     450 nm base with its two most consonant spectral partners
///   4     primaries mixture against its chosen consonant mixture, with every
///         synchronised rest point marked
///   5     the primaries mixture alone
/// Throws DomainError for other ids.
LinePlot standard_figure(int id, const CrossingParams& params = {});

std::string render_line_plot_svg(const LinePlot& plot);

/// Horizontal swatch strip, base first, each labelled with its hex value.
std::string render_swatches_svg(const Palette& palette);

}  // namespace wavepalette
