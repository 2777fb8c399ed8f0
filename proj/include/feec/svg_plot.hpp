// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_SVG_PLOT_HPP
#define FEEC_SVG_PLOT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "feec/convergence.hpp"

namespace feec
{

struct PlotSeries
{
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Dashed line of the given slope through (x0, y0).
struct GuideLine
{
  double slope = 1.0;
  double x0 = 1.0;
  double y0 = 1.0;
};

struct LogLogPlot
{
  std::string title;
  std::string x_label = "h_max";
  std::string y_label = "L2 error";
  std::vector<PlotSeries> series;
  std::vector<GuideLine> guides;
};

// Standalone SVG 1.1 document on a fixed 800x600 canvas with log10 axes.
void write_svg(std::ostream &os, const LogLogPlot &plot);

// One polyline per error column present in the records, guides of slope k - 1/2 and k.
LogLogPlot convergence_plot(const std::vector<ErrorRecord> &records, int k,
                            const std::string &title);

}  // namespace feec

#endif  // FEEC_SVG_PLOT_HPP
